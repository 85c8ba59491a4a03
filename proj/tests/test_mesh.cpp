#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "stokesbgg/mesh.hpp"
#include "support/poly2.hpp"

using namespace stokesbgg;

namespace {

PolyMesh unit_square_mesh() {
  std::vector<Eigen::Vector2d> v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return build_mesh(v, {{0, 1, 2, 3}});
}

}  // namespace

TEST_CASE("unit square counts") {
  const PolyMesh mesh = unit_square_mesh();
  CHECK(mesh.n_vertices() == 4);
  CHECK(mesh.n_edges() == 4);
  CHECK(mesh.n_cells() == 1);
  CHECK(mesh.cells[0].area == doctest::Approx(1.));
  CHECK(mesh.cells[0].inner_point.x() == doctest::Approx(0.5));
  CHECK(mesh.cells[0].inner_point.y() == doctest::Approx(0.5));
}

TEST_CASE("four-cell ring of trapezoids") {
  const PolyMesh mesh = generate_mesh(MeshFamily::RingOneHole, 1);
  CHECK(mesh.n_vertices() == 8);
  CHECK(mesh.n_edges() == 12);
  CHECK(mesh.n_cells() == 4);
  const auto [b0, b1] = betti_numbers(mesh);
  CHECK(b0 == 1);
  CHECK(b1 == 1);
}

TEST_CASE("square split into two triangles: interior edge signs") {
  std::vector<Eigen::Vector2d> v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const PolyMesh mesh = build_mesh(v, {{0, 1, 2}, {0, 2, 3}});
  int interior = -1;
  for (int e = 0; e < mesh.n_edges(); e++) {
    if (!mesh.is_boundary_edge(e)) interior = e;
  }
  REQUIRE(interior >= 0);
  const auto& cells = mesh.edges[interior].cells;
  REQUIRE(cells.size() == 2);
  CHECK(mesh.omega_TE(cells[0], interior) == -mesh.omega_TE(cells[1], interior));
}

TEST_CASE("loader errors carry the cell index") {
  std::vector<Eigen::Vector2d> v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(build_mesh(v, {{0, 3, 2, 1}}), MeshError);       // clockwise
  CHECK_THROWS_AS(build_mesh(v, {{0, 1, 2, 1}}), MeshError);       // duplicate vertex
  CHECK_THROWS_AS(build_mesh(v, {{0, 1}}), MeshError);             // non-closed
  CHECK_THROWS_AS(build_mesh(v, {{0, 1, 2}, {0, 1, 3}, {0, 1, 2, 3}}), MeshError);  // >2 cells
}

TEST_CASE("json round trip") {
  const char* path = "mesh_roundtrip.json";
  {
    std::ofstream out(path);
    out << R"({"vertices": [[0,0],[1,0],[1,1],[0,1],[2,0],[2,1]],
               "cells": [[0,1,2,3],[1,4,5,2]]})";
  }
  const PolyMesh mesh = load_mesh(path);
  CHECK(mesh.n_cells() == 2);
  CHECK(mesh.n_edges() == 7);
  save_mesh(mesh, path);
  const PolyMesh again = load_mesh(path);
  CHECK(again.n_edges() == 7);
  std::remove(path);
}

TEST_CASE("betti numbers") {
  const PolyMesh tri = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  CHECK(betti_numbers(tri) == std::pair<int, int>{1, 0});

  // two disjoint squares
  std::vector<Eigen::Vector2d> v = {{0, 0}, {1, 0}, {1, 1}, {0, 1},
                                    {2, 0}, {3, 0}, {3, 1}, {2, 1}};
  const PolyMesh two = build_mesh(v, {{0, 1, 2, 3}, {4, 5, 6, 7}});
  CHECK(betti_numbers(two) == std::pair<int, int>{2, 0});

  const PolyMesh ring2 = generate_mesh(MeshFamily::RingTwoHoles, 1);
  CHECK(betti_numbers(ring2).second == 2);
}

TEST_CASE("sign identity over random vertex values") {
  // integer arithmetic: the double sum telescopes to zero exactly
  testsupport::Rng rng(42);
  for (auto family : {MeshFamily::Cartesian, MeshFamily::SplitTriangles,
                      MeshFamily::DistortedQuads, MeshFamily::AgglomeratedNonconvex,
                      MeshFamily::RingOneHole, MeshFamily::RingTwoHoles}) {
    const PolyMesh mesh = generate_mesh(family, 2);
    for (int trial = 0; trial < 100; trial++) {
      std::vector<long long> phi(mesh.n_vertices());
      for (auto& x : phi) x = static_cast<long long>(rng.next() % 2001) - 1000;
      for (int t = 0; t < mesh.n_cells(); t++) {
        const auto& cell = mesh.cells[t];
        long long sum = 0;
        for (size_t i = 0; i < cell.edge_loop.size(); i++) {
          const auto& edge = mesh.edges[cell.edge_loop[i]];
          long long inner = 0;
          inner += mesh.omega_EV(cell.edge_loop[i], edge.a) * phi[edge.a];
          inner += mesh.omega_EV(cell.edge_loop[i], edge.b) * phi[edge.b];
          sum += cell.edge_sign[i] * inner;
        }
        CHECK(sum == 0);
      }
    }
  }
}

TEST_CASE("edge frames and orientations") {
  for (auto family : {MeshFamily::Cartesian, MeshFamily::DistortedQuads,
                      MeshFamily::AgglomeratedNonconvex, MeshFamily::RingOneHole}) {
    const PolyMesh mesh = generate_mesh(family, 2);
    for (const auto& edge : mesh.edges) {
      CHECK(std::abs(edge.tangent.norm() - 1.) < 1e-14);
      const Eigen::Vector2d rot(-edge.tangent.y(), edge.tangent.x());
      CHECK((edge.normal - rot).norm() < 1e-14);
      const double det = edge.tangent.x() * edge.normal.y() - edge.tangent.y() * edge.normal.x();
      CHECK(det == doctest::Approx(1.).epsilon(1e-14));
    }
    for (int e = 0; e < mesh.n_edges(); e++) {
      if (mesh.is_boundary_edge(e)) continue;
      const auto& c = mesh.edges[e].cells;
      CHECK(mesh.omega_TE(c[0], e) == -mesh.omega_TE(c[1], e));
    }
    // Euler characteristic consistency
    const auto [b0, b1] = betti_numbers(mesh);
    CHECK(mesh.n_vertices() - mesh.n_edges() + mesh.n_cells() == b0 - b1);
  }
}

TEST_CASE("inner point on convex and nonconvex cells") {
  // regular hexagon: centroid is fine
  std::vector<Eigen::Vector2d> hex;
  for (int i = 0; i < 6; i++) {
    hex.emplace_back(std::cos(i * M_PI / 3.), std::sin(i * M_PI / 3.));
  }
  const Eigen::Vector2d p = inner_point(hex);
  CHECK(p.norm() < 1e-12);

  // L-shaped hexagon: the returned point is strictly inside at a safe distance
  std::vector<Eigen::Vector2d> ell = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  const Eigen::Vector2d q = inner_point(ell);
  CHECK(point_in_polygon(q, ell));
  double diam = 0;
  for (size_t i = 0; i < ell.size(); i++) {
    for (size_t j = 0; j < ell.size(); j++) diam = std::max(diam, (ell[i] - ell[j]).norm());
  }
  CHECK(distance_to_boundary(q, ell) >= 0.05 * diam);

  CHECK_THROWS_AS(inner_point({{0, 0}, {1, 0}, {2, 0}}), MeshError);  // degenerate
}

TEST_CASE("generated families have the advertised features") {
  CHECK(generate_mesh(MeshFamily::Cartesian, 2).n_cells() == 4);
  CHECK(betti_numbers(generate_mesh(MeshFamily::Cartesian, 2)).second == 0);
  CHECK(betti_numbers(generate_mesh(MeshFamily::RingOneHole, 2)).second == 1);
  CHECK(betti_numbers(generate_mesh(MeshFamily::RingTwoHoles, 2)).second == 2);

  const PolyMesh agg = generate_mesh(MeshFamily::AgglomeratedNonconvex, 1);
  bool has_collinear_pair = false;
  for (const auto& cell : agg.cells) {
    const int n = static_cast<int>(cell.vertex_loop.size());
    for (int i = 0; i < n; i++) {
      const Eigen::Vector2d a = agg.vertices[cell.vertex_loop[i]];
      const Eigen::Vector2d b = agg.vertices[cell.vertex_loop[(i + 1) % n]];
      const Eigen::Vector2d c = agg.vertices[cell.vertex_loop[(i + 2) % n]];
      const double cross = (b - a).x() * (c - b).y() - (b - a).y() * (c - b).x();
      if (std::abs(cross) < 1e-14) has_collinear_pair = true;
    }
  }
  CHECK(has_collinear_pair);

  bool has_nonconvex = false;
  for (const auto& cell : agg.cells) {
    const int n = static_cast<int>(cell.vertex_loop.size());
    for (int i = 0; i < n; i++) {
      const Eigen::Vector2d a = agg.vertices[cell.vertex_loop[i]];
      const Eigen::Vector2d b = agg.vertices[cell.vertex_loop[(i + 1) % n]];
      const Eigen::Vector2d c = agg.vertices[cell.vertex_loop[(i + 2) % n]];
      const double cross = (b - a).x() * (c - b).y() - (b - a).y() * (c - b).x();
      if (cross < -1e-14) has_nonconvex = true;
    }
  }
  CHECK(has_nonconvex);
}
