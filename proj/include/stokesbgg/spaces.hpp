// Discrete spaces as DOF layouts over mesh entities.
//
// Coefficients are stored against the orthonormal bases of basis.hpp: scalar
// functions as basis coefficients, vector/matrix values interleaved per scalar
// basis function (slot = n_comp*i + c). Vertex blocks precede edge blocks
// precede cell blocks in the global numbering.

#ifndef STOKESBGG_SPACES_HPP
#define STOKESBGG_SPACES_HPP

#include <string>
#include <vector>

#include "stokesbgg/basis.hpp"
#include "stokesbgg/mesh.hpp"

namespace stokesbgg {

enum class Space {
  SGrad,      // head of the discrete Stokes complex: (q_T, q_E, Gn_E, q_V, G_V)
  SRot,       // middle space, identical to the vector DDR gradient space
  DdrRot,     // tensor DDR rot space: (tau_T, tau_E)
  DdrRotSym,  // symmetric-valued subspace of DdrRot
  Broken,     // piecewise P^m scalars (m = degree field)
  BrokenVec,  // piecewise (P^m)^2
  Ddr0Grad,   // lowest-order de Rham: one real per vertex
  Ddr0Curl,   // lowest-order de Rham: one real per edge
};

std::string to_string(Space space);

struct DofLayout {
  Space space;
  int degree;  // consistency degree k (SGrad/SRot/DdrRot*), polynomial degree (Broken*)
  int n_vertices, n_edges, n_cells;
  int per_vertex, per_edge, per_cell;

  int vertex_offset(int v) const { return v * per_vertex; }
  int edge_offset(int e) const { return n_vertices * per_vertex + e * per_edge; }
  int cell_offset(int t) const {
    return n_vertices * per_vertex + n_edges * per_edge + t * per_cell;
  }
  int dim() const { return n_vertices * per_vertex + n_edges * per_edge + n_cells * per_cell; }
};

DofLayout make_layout(Space space, int degree, const PolyMesh& mesh);

/// Global indices of the DOFs attached to the closure of cell t:
/// vertex blocks in loop order, then edge blocks in loop order, then the cell block.
std::vector<int> cell_dofs(const DofLayout& layout, const PolyMesh& mesh, int t);

/// Global indices attached to edge e: tail vertex block, head vertex block, edge block.
std::vector<int> edge_dofs(const DofLayout& layout, const PolyMesh& mesh, int e);

/// Cell-local block bookkeeping matching cell_dofs ordering.
struct LocalLayout {
  int nv, ne;
  int per_vertex, per_edge, per_cell;
  int vertex_offset(int i) const { return i * per_vertex; }
  int edge_offset(int i) const { return nv * per_vertex + i * per_edge; }
  int cell_offset() const { return nv * per_vertex + ne * per_edge; }
  int dim() const { return nv * per_vertex + ne * per_edge + per_cell; }
};

LocalLayout local_layout(const DofLayout& layout, const PolyMesh& mesh, int t);

}  // namespace stokesbgg

#endif
