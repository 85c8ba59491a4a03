// Polygonal meshes with oriented topology.
//
// Provides:
//  - PolyMesh: vertices, canonically oriented edges, CCW cell boundary loops,
//    incidence signs, geometric data (lengths, diameters, areas, inner points)
//  - JSON reader/writer, test-mesh generators, Betti numbers

#ifndef STOKESBGG_MESH_HPP
#define STOKESBGG_MESH_HPP

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stokesbgg {

/// Error raised on invalid mesh input (non-closed/clockwise loops, duplicate
/// vertices, over-shared edges); message carries the offending cell index.
struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeshEdge {
  int a, b;                  // vertex indices, a < b; tangent points a -> b
  Eigen::Vector2d tangent;   // unit
  Eigen::Vector2d normal;    // tangent rotated +90° (right-handed pair)
  Eigen::Vector2d midpoint;
  double length;
  std::vector<int> cells;    // incident cells (1 = boundary edge, 2 = interior)
};

struct MeshCell {
  std::vector<int> vertex_loop;       // CCW; v[i] -> v[i+1] spans edge_loop[i]
  std::vector<int> edge_loop;
  std::vector<int> edge_sign;         // ω_TE: edge_sign[i]*normal points out
  double area;
  double diameter;                    // h_T
  Eigen::Vector2d centroid;
  Eigen::Vector2d inner_point;        // x_T
  double inradius;                    // dist(x_T, ∂T)
};

class PolyMesh {
public:
  std::vector<Eigen::Vector2d> vertices;
  std::vector<MeshEdge> edges;
  std::vector<MeshCell> cells;
  double mesh_size = 0.;  // h = max_T h_T

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }

  /// ω_EV: +1 if the edge tangent points toward vertex v
  int omega_EV(int e, int v) const {
    return edges[e].b == v ? 1 : -1;
  }
  bool is_boundary_edge(int e) const { return edges[e].cells.size() == 1; }

  /// ω_TE of edge e in cell t (e must belong to the cell boundary)
  int omega_TE(int t, int e) const;
};

/// Assemble a PolyMesh from vertices and CCW vertex loops. Edges are derived
/// by pairing consecutive loop vertices, deduplicated by unordered pair and
/// oriented from lower to higher vertex index. Validates all mesh invariants.
PolyMesh build_mesh(std::vector<Eigen::Vector2d> vertices,
                    const std::vector<std::vector<int>>& cell_loops);

/// Read a mesh from JSON: {"vertices": [[x,y],...], "cells": [[i,...],...]}.
PolyMesh load_mesh(const std::string& path);

/// Write the JSON format back; includes a derived "edges" block for inspection.
void save_mesh(const PolyMesh& mesh, const std::string& path);

/// (β0, β1): components of the cell adjacency graph and β0 - χ.
std::pair<int, int> betti_numbers(const PolyMesh& mesh);

/// Point x_T: centroid when it is inside with distance to ∂T >= 0.1 h_T,
/// otherwise an approximate pole of inaccessibility from a refined grid search.
Eigen::Vector2d inner_point(const std::vector<Eigen::Vector2d>& polygon);

enum class MeshFamily {
  Cartesian,
  SplitTriangles,
  DistortedQuads,
  AgglomeratedNonconvex,
  RingOneHole,
  RingTwoHoles,
};

MeshFamily mesh_family_from_string(const std::string& name);
std::string to_string(MeshFamily family);

/// Test-mesh factory. Ring families have β1 = 1 and 2; the agglomerated
/// family contains a nonconvex cell and a hanging node.
PolyMesh generate_mesh(MeshFamily family, int n);

// polygon helpers shared with the quadrature layer
double polygon_area(const std::vector<Eigen::Vector2d>& polygon);
bool point_in_polygon(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& polygon);
double distance_to_boundary(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& polygon);

}  // namespace stokesbgg

#endif
