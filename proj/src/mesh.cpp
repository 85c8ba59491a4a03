#include "stokesbgg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

namespace stokesbgg {

namespace {

double cross2(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
  return u.x() * v.y() - u.y() * v.x();
}

double loop_signed_area(const std::vector<Eigen::Vector2d>& poly) {
  double a = 0.;
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; i++) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    a += cross2(p, q);
  }
  return 0.5 * a;
}

Eigen::Vector2d loop_centroid(const std::vector<Eigen::Vector2d>& poly, double area) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; i++) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    c += (p + q) * cross2(p, q);
  }
  return c / (6. * area);
}

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.) return (p - a).norm();
  const double t = std::clamp((p - a).dot(d) / len2, 0., 1.);
  return (p - a - t * d).norm();
}

}  // namespace

double polygon_area(const std::vector<Eigen::Vector2d>& polygon) {
  return loop_signed_area(polygon);
}

bool point_in_polygon(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& polygon) {
  // crossing number with horizontal ray
  bool inside = false;
  const int n = static_cast<int>(polygon.size());
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = polygon[i];
    const auto& b = polygon[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_boundary(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& polygon) {
  double d = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(polygon.size());
  for (int i = 0; i < n; i++) {
    d = std::min(d, point_segment_distance(p, polygon[i], polygon[(i + 1) % n]));
  }
  return d;
}

Eigen::Vector2d inner_point(const std::vector<Eigen::Vector2d>& polygon) {
  const double area = loop_signed_area(polygon);
  if (std::abs(area) < 1e-14) {
    throw MeshError("inner_point: degenerate (zero-area) cell");
  }
  double diameter = 0.;
  for (size_t i = 0; i < polygon.size(); i++) {
    for (size_t j = i + 1; j < polygon.size(); j++) {
      diameter = std::max(diameter, (polygon[i] - polygon[j]).norm());
    }
  }

  const Eigen::Vector2d centroid = loop_centroid(polygon, area);
  if (point_in_polygon(centroid, polygon) &&
      distance_to_boundary(centroid, polygon) >= 0.1 * diameter) {
    return centroid;
  }

  // pole-of-inaccessibility search: refine a grid around the best candidate
  Eigen::Vector2d lo = polygon[0], hi = polygon[0];
  for (const auto& v : polygon) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  Eigen::Vector2d best = centroid;
  double best_dist = point_in_polygon(centroid, polygon)
                         ? distance_to_boundary(centroid, polygon)
                         : -1.;
  Eigen::Vector2d cell_lo = lo, cell_hi = hi;
  constexpr int grid = 8;
  for (int level = 0; level < 12; level++) {
    Eigen::Vector2d step = (cell_hi - cell_lo) / grid;
    Eigen::Vector2d level_best = best;
    for (int i = 0; i <= grid; i++) {
      for (int j = 0; j <= grid; j++) {
        const Eigen::Vector2d p = cell_lo + Eigen::Vector2d(i * step.x(), j * step.y());
        if (!point_in_polygon(p, polygon)) continue;
        const double d = distance_to_boundary(p, polygon);
        if (d > best_dist) {
          best_dist = d;
          level_best = p;
        }
      }
    }
    best = level_best;
    if (best_dist >= 0.05 * diameter) break;
    // zoom on the current best
    const Eigen::Vector2d half = 1.5 * step;
    cell_lo = best - half;
    cell_hi = best + half;
  }
  if (best_dist <= 0.) {
    throw MeshError("inner_point: no interior point found");
  }
  return best;
}

int PolyMesh::omega_TE(int t, int e) const {
  const auto& cell = cells[t];
  for (size_t i = 0; i < cell.edge_loop.size(); i++) {
    if (cell.edge_loop[i] == e) return cell.edge_sign[i];
  }
  throw MeshError("omega_TE: edge not on cell boundary");
}

PolyMesh build_mesh(std::vector<Eigen::Vector2d> vertices,
                    const std::vector<std::vector<int>>& cell_loops) {
  PolyMesh mesh;
  mesh.vertices = std::move(vertices);
  const int nv = mesh.n_vertices();

  std::map<std::pair<int, int>, int> edge_index;
  for (size_t t = 0; t < cell_loops.size(); t++) {
    const auto& loop = cell_loops[t];
    const std::string where = " (cell " + std::to_string(t) + ")";
    if (loop.size() < 3) throw MeshError("non-closed loop" + where);
    std::set<int> seen;
    std::vector<Eigen::Vector2d> poly;
    for (int v : loop) {
      if (v < 0 || v >= nv) throw MeshError("vertex index out of range" + where);
      if (!seen.insert(v).second) throw MeshError("duplicate vertex in a loop" + where);
      poly.push_back(mesh.vertices[v]);
    }
    const double area = loop_signed_area(poly);
    if (area <= 0.) throw MeshError("clockwise loop" + where);

    MeshCell cell;
    cell.vertex_loop = loop;
    cell.area = area;
    cell.centroid = loop_centroid(poly, area);
    cell.diameter = 0.;
    for (size_t i = 0; i < poly.size(); i++) {
      for (size_t j = i + 1; j < poly.size(); j++) {
        cell.diameter = std::max(cell.diameter, (poly[i] - poly[j]).norm());
      }
    }
    cell.inner_point = inner_point(poly);
    cell.inradius = distance_to_boundary(cell.inner_point, poly);

    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; i++) {
      const int va = loop[i];
      const int vb = loop[(i + 1) % n];
      const auto key = std::minmax(va, vb);
      auto it = edge_index.find(key);
      if (it == edge_index.end()) {
        MeshEdge edge;
        edge.a = key.first;
        edge.b = key.second;
        const Eigen::Vector2d d = mesh.vertices[edge.b] - mesh.vertices[edge.a];
        edge.length = d.norm();
        if (edge.length < 1e-14) throw MeshError("degenerate edge" + where);
        edge.tangent = d / edge.length;
        edge.normal = Eigen::Vector2d(-edge.tangent.y(), edge.tangent.x());
        edge.midpoint = 0.5 * (mesh.vertices[edge.a] + mesh.vertices[edge.b]);
        it = edge_index.emplace(key, mesh.n_edges()).first;
        mesh.edges.push_back(edge);
      }
      const int e = it->second;
      cell.edge_loop.push_back(e);
      // CCW walk direction along canonical tangent: outward normal is -normal
      cell.edge_sign.push_back(va == mesh.edges[e].a ? -1 : 1);
    }
    mesh.cells.push_back(std::move(cell));
    for (int i = 0; i < n; i++) {
      auto& edge = mesh.edges[mesh.cells.back().edge_loop[i]];
      edge.cells.push_back(static_cast<int>(t));
      if (edge.cells.size() > 2) {
        throw MeshError("edge shared by >2 cells" + where);
      }
    }
  }

  mesh.mesh_size = 0.;
  for (const auto& cell : mesh.cells) mesh.mesh_size = std::max(mesh.mesh_size, cell.diameter);

  // orientation audit: ω_TE * n_E sticks out of T
  for (int t = 0; t < mesh.n_cells(); t++) {
    const auto& cell = mesh.cells[t];
    std::vector<Eigen::Vector2d> poly;
    for (int v : cell.vertex_loop) poly.push_back(mesh.vertices[v]);
    for (size_t i = 0; i < cell.edge_loop.size(); i++) {
      const auto& edge = mesh.edges[cell.edge_loop[i]];
      const double eps = 1e-6 * cell.diameter;
      const Eigen::Vector2d out = edge.midpoint + eps * cell.edge_sign[i] * edge.normal;
      const Eigen::Vector2d in = edge.midpoint - eps * cell.edge_sign[i] * edge.normal;
      if (point_in_polygon(out, poly) || !point_in_polygon(in, poly)) {
        throw MeshError("inconsistent edge orientation (cell " + std::to_string(t) + ")");
      }
    }
  }
  return mesh;
}

PolyMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);
  nlohmann::json j;
  in >> j;
  std::vector<Eigen::Vector2d> vertices;
  for (const auto& v : j.at("vertices")) {
    vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  }
  std::vector<std::vector<int>> loops;
  for (const auto& c : j.at("cells")) {
    loops.push_back(c.get<std::vector<int>>());
  }
  return build_mesh(std::move(vertices), loops);
}

void save_mesh(const PolyMesh& mesh, const std::string& path) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : mesh.vertices) j["vertices"].push_back({v.x(), v.y()});
  j["cells"] = nlohmann::json::array();
  for (const auto& c : mesh.cells) j["cells"].push_back(c.vertex_loop);
  j["edges"] = nlohmann::json::array();
  for (const auto& e : mesh.edges) j["edges"].push_back({e.a, e.b});
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

std::pair<int, int> betti_numbers(const PolyMesh& mesh) {
  // components of the cell adjacency graph, by union-find over shared edges
  std::vector<int> parent(mesh.n_cells());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& edge : mesh.edges) {
    if (edge.cells.size() == 2) {
      parent[find(edge.cells[0])] = find(edge.cells[1]);
    }
  }
  std::set<int> roots;
  for (int t = 0; t < mesh.n_cells(); t++) roots.insert(find(t));
  const int beta0 = static_cast<int>(roots.size());
  const int chi = mesh.n_vertices() - mesh.n_edges() + mesh.n_cells();
  return {beta0, beta0 - chi};
}

MeshFamily mesh_family_from_string(const std::string& name) {
  if (name == "cartesian") return MeshFamily::Cartesian;
  if (name == "split_triangles") return MeshFamily::SplitTriangles;
  if (name == "distorted_quads") return MeshFamily::DistortedQuads;
  if (name == "agglomerated_nonconvex") return MeshFamily::AgglomeratedNonconvex;
  if (name == "ring_one_hole") return MeshFamily::RingOneHole;
  if (name == "ring_two_holes") return MeshFamily::RingTwoHoles;
  throw MeshError("unknown mesh family: " + name);
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::Cartesian: return "cartesian";
    case MeshFamily::SplitTriangles: return "split_triangles";
    case MeshFamily::DistortedQuads: return "distorted_quads";
    case MeshFamily::AgglomeratedNonconvex: return "agglomerated_nonconvex";
    case MeshFamily::RingOneHole: return "ring_one_hole";
    case MeshFamily::RingTwoHoles: return "ring_two_holes";
  }
  return "?";
}

namespace {

// grid-of-quads helper on [0,1]^2, vertex (i,j) -> index
struct Grid {
  int nx, ny;
  std::vector<Eigen::Vector2d> vertices;
  int index(int i, int j) const { return j * (nx + 1) + i; }
  Grid(int nx, int ny) : nx(nx), ny(ny) {
    for (int j = 0; j <= ny; j++) {
      for (int i = 0; i <= nx; i++) {
        vertices.emplace_back(static_cast<double>(i) / nx, static_cast<double>(j) / ny);
      }
    }
  }
};

PolyMesh make_cartesian(int n) {
  Grid g(n, n);
  std::vector<std::vector<int>> loops;
  for (int j = 0; j < n; j++) {
    for (int i = 0; i < n; i++) {
      loops.push_back({g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1), g.index(i, j + 1)});
    }
  }
  return build_mesh(g.vertices, loops);
}

PolyMesh make_split_triangles(int n) {
  Grid g(n, n);
  std::vector<std::vector<int>> loops;
  for (int j = 0; j < n; j++) {
    for (int i = 0; i < n; i++) {
      loops.push_back({g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1)});
      loops.push_back({g.index(i, j), g.index(i + 1, j + 1), g.index(i, j + 1)});
    }
  }
  return build_mesh(g.vertices, loops);
}

PolyMesh make_distorted_quads(int n) {
  Grid g(n, n);
  const double amp = 0.15 / n;
  for (int j = 1; j < n; j++) {
    for (int i = 1; i < n; i++) {
      auto& v = g.vertices[g.index(i, j)];
      v.x() += amp * std::sin(2 * M_PI * v.x()) * std::sin(2 * M_PI * v.y() + 0.7);
      v.y() += amp * std::sin(2 * M_PI * v.y()) * std::cos(2 * M_PI * v.x() + 0.3);
    }
  }
  std::vector<std::vector<int>> loops;
  for (int j = 0; j < n; j++) {
    for (int i = 0; i < n; i++) {
      loops.push_back({g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1), g.index(i, j + 1)});
    }
  }
  return build_mesh(g.vertices, loops);
}

// 2n x 2n grid with an L-shaped agglomeration at the origin block and the cell
// to its upper right split in two, which puts a hanging node on the L boundary
PolyMesh make_agglomerated(int n) {
  const int N = 2 * n;
  const double s = 1.0;  // unit blocks; the domain grows with n
  std::vector<Eigen::Vector2d> vertices;
  std::map<std::pair<long long, long long>, int> vid;  // coordinates in half-steps
  auto vertex = [&](double x, double y) {
    const auto key = std::make_pair(std::llround(x * 2 * N), std::llround(y * 2 * N));
    auto it = vid.find(key);
    if (it == vid.end()) {
      it = vid.emplace(key, static_cast<int>(vertices.size())).first;
      vertices.emplace_back(x, y);
    }
    return it->second;
  };
  std::vector<std::vector<int>> loops;
  for (int j = 0; j < N; j++) {
    for (int i = 0; i < N; i++) {
      const double x0 = i * s, x1 = (i + 1) * s, y0 = j * s, y1 = (j + 1) * s;
      if ((i == 0 && j == 0) || (i == 1 && j == 0) || (i == 0 && j == 1)) {
        if (i == 0 && j == 0) {
          // L covering blocks (0,0), (1,0), (0,1); its side x = s lists the
          // hanging vertex at (s, 1.5s) introduced by the split neighbour
          loops.push_back({vertex(0, 0), vertex(2 * s, 0), vertex(2 * s, s), vertex(s, s),
                           vertex(s, 1.5 * s), vertex(s, 2 * s), vertex(0, 2 * s)});
        }
        continue;
      }
      if (i == 1 && j == 1) {
        // split into two half-height rectangles
        loops.push_back({vertex(x0, y0), vertex(x1, y0), vertex(x1, y0 + 0.5 * s),
                         vertex(x0, y0 + 0.5 * s)});
        loops.push_back({vertex(x0, y0 + 0.5 * s), vertex(x1, y0 + 0.5 * s), vertex(x1, y1),
                         vertex(x0, y1)});
        continue;
      }
      std::vector<int> loop = {vertex(x0, y0), vertex(x1, y0), vertex(x1, y1), vertex(x0, y1)};
      if (i == 2 && j == 1) {
        // left side borders the split rectangles: list the hanging vertex
        loop = {vertex(x0, y0), vertex(x1, y0), vertex(x1, y1), vertex(x0, y1),
                vertex(x0, y0 + 0.5 * s)};
      }
      loops.push_back(loop);
    }
  }
  return build_mesh(vertices, loops);
}

PolyMesh make_ring_one_hole(int n) {
  if (n == 1) {
    // four trapezoids around a square hole
    std::vector<Eigen::Vector2d> v = {{0, 0}, {3, 0}, {3, 3}, {0, 3},
                                      {1, 1}, {2, 1}, {2, 2}, {1, 2}};
    std::vector<std::vector<int>> loops = {
        {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
    return build_mesh(v, loops);
  }
  const int N = n + 2;
  std::vector<Eigen::Vector2d> vertices;
  std::map<std::pair<int, int>, int> vid;
  auto vertex = [&](int i, int j) {
    auto it = vid.find({i, j});
    if (it == vid.end()) {
      it = vid.emplace(std::make_pair(i, j), static_cast<int>(vertices.size())).first;
      vertices.emplace_back(static_cast<double>(i), static_cast<double>(j));
    }
    return it->second;
  };
  std::vector<std::vector<int>> loops;
  for (int j = 0; j < N; j++) {
    for (int i = 0; i < N; i++) {
      if (i >= 1 && i <= n && j >= 1 && j <= n) continue;  // hole
      loops.push_back({vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)});
    }
  }
  return build_mesh(vertices, loops);
}

PolyMesh make_ring_two_holes(int n) {
  const int W = 2 * n + 3, H = n + 2;
  std::vector<Eigen::Vector2d> vertices;
  std::map<std::pair<int, int>, int> vid;
  auto vertex = [&](int i, int j) {
    auto it = vid.find({i, j});
    if (it == vid.end()) {
      it = vid.emplace(std::make_pair(i, j), static_cast<int>(vertices.size())).first;
      vertices.emplace_back(static_cast<double>(i), static_cast<double>(j));
    }
    return it->second;
  };
  auto in_hole = [&](int i, int j) {
    const bool row = (j >= 1 && j <= n);
    return row && ((i >= 1 && i <= n) || (i >= n + 2 && i <= 2 * n + 1));
  };
  std::vector<std::vector<int>> loops;
  for (int j = 0; j < H; j++) {
    for (int i = 0; i < W; i++) {
      if (in_hole(i, j)) continue;
      loops.push_back({vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)});
    }
  }
  return build_mesh(vertices, loops);
}

}  // namespace

PolyMesh generate_mesh(MeshFamily family, int n) {
  if (n < 1) throw MeshError("generate_mesh: n must be >= 1");
  switch (family) {
    case MeshFamily::Cartesian: return make_cartesian(n);
    case MeshFamily::SplitTriangles: return make_split_triangles(n);
    case MeshFamily::DistortedQuads: return make_distorted_quads(n);
    case MeshFamily::AgglomeratedNonconvex: return make_agglomerated(n);
    case MeshFamily::RingOneHole: return make_ring_one_hole(n);
    case MeshFamily::RingTwoHoles: return make_ring_two_holes(n);
  }
  throw MeshError("generate_mesh: unknown family");
}

}  // namespace stokesbgg
