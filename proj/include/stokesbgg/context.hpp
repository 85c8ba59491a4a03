// Cached quadrature and orthonormal bases per mesh entity, at a fixed
// consistency degree k. Every local operator of the discrete complexes is a
// small dense matrix built from these tables.
//
// Quadrature exactness is 2k+8 throughout: all operator integrands are
// polynomial of degree <= 2k+6 and the margin covers degree-(k+3) potentials.

#ifndef STOKESBGG_CONTEXT_HPP
#define STOKESBGG_CONTEXT_HPP

#include <memory>
#include <vector>

#include "stokesbgg/basis.hpp"
#include "stokesbgg/mesh.hpp"
#include "stokesbgg/quadrature.hpp"
#include "stokesbgg/spaces.hpp"

namespace stokesbgg {

inline int default_quad_degree(int k) { return 2 * k + 8; }

struct EdgeContext {
  int e;
  QuadRule quad;
  EdgeScalarBasis basis;          // orthonormal, degree k+3
  Eigen::MatrixXd values;         // basis values at quad points
  Eigen::MatrixXd derivs;         // tangential derivatives at quad points
  Eigen::VectorXd end_values[2];  // endpoint evaluations (0 = tail, 1 = head)
  Eigen::VectorXd end_derivs[2];

  EdgeContext(const PolyMesh& mesh, int e, int k, int quad_degree);
};

struct CellContext {
  const PolyMesh* mesh;
  int t, k;
  QuadRule quad;
  CellScalarBasis scalar;  // orthonormal, degree k+4
  Eigen::MatrixXd sv;      // scalar values at cell quad points
  Eigen::MatrixXd sgx, sgy;
  CellVectorBasis roly;    // degree k+1
  Eigen::MatrixXd roly_x, roly_y;
  CellVectorBasis croly;   // degree k+4
  Eigen::MatrixXd croly_x, croly_y;
  Eigen::MatrixXd croly_div;  // divergences at cell quad points

  // boundary tables, aligned with the cell's edge loop
  std::vector<const EdgeContext*> edge;
  std::vector<Eigen::MatrixXd> scalar_on_edge;          // cell scalar basis at edge quad points
  std::vector<Eigen::MatrixXd> croly_on_edge_x, croly_on_edge_y;
  std::vector<Eigen::MatrixXd> roly_on_edge_x, roly_on_edge_y;
  Eigen::MatrixXd scalar_at_vertices;                   // at loop vertices
  Eigen::MatrixXd sgx_at_vertices, sgy_at_vertices;

  CellContext(const PolyMesh& mesh, int t, int k, const std::vector<EdgeContext>& edges,
              int quad_degree);

  const MeshCell& cell() const { return mesh->cells[t]; }
  int n_loop_edges() const { return static_cast<int>(cell().edge_loop.size()); }
  int omega(int i) const { return cell().edge_sign[i]; }
  const MeshEdge& loop_edge(int i) const { return mesh->edges[cell().edge_loop[i]]; }

  /// Gram of the first n cell scalar basis functions against edge basis rows
  /// on loop edge i (cell functions indexing rows).
  Eigen::MatrixXd edge_mixed_gram(int i, int n_cell, int n_edge) const;
};

/// Owns the per-edge contexts of a mesh; cell contexts are built on demand.
class MeshContext {
public:
  MeshContext(const PolyMesh& mesh, int k, int quad_degree = -1);
  const PolyMesh& mesh() const { return *mesh_; }
  int degree() const { return k_; }
  int quad_degree() const { return quad_degree_; }
  const EdgeContext& edge(int e) const { return edges_[e]; }
  const std::vector<EdgeContext>& edges() const { return edges_; }
  CellContext cell(int t) const { return CellContext(*mesh_, t, k_, edges_, quad_degree_); }

private:
  const PolyMesh* mesh_;
  int k_;
  int quad_degree_;
  std::vector<EdgeContext> edges_;
};

}  // namespace stokesbgg

#endif
