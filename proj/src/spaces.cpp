#include "stokesbgg/spaces.hpp"

namespace stokesbgg {

std::string to_string(Space space) {
  switch (space) {
    case Space::SGrad: return "X_Sgrad";
    case Space::SRot: return "X_Srot";
    case Space::DdrRot: return "X_ddr_rot";
    case Space::DdrRotSym: return "X_ddr_rot_sym";
    case Space::Broken: return "P_broken";
    case Space::BrokenVec: return "P_broken_vec";
    case Space::Ddr0Grad: return "DDR0_grad";
    case Space::Ddr0Curl: return "DDR0_curl";
  }
  return "?";
}

DofLayout make_layout(Space space, int degree, const PolyMesh& mesh) {
  DofLayout layout;
  layout.space = space;
  layout.degree = degree;
  layout.n_vertices = mesh.n_vertices();
  layout.n_edges = mesh.n_edges();
  layout.n_cells = mesh.n_cells();
  layout.per_vertex = layout.per_edge = layout.per_cell = 0;
  const int k = degree;
  switch (space) {
    case Space::SGrad:
      layout.per_vertex = 3;
      layout.per_edge = edge_poly_dim(k - 1) + edge_poly_dim(k);
      layout.per_cell = poly_dim(k - 2);
      break;
    case Space::SRot:
      layout.per_vertex = 2;
      layout.per_edge = 2 * edge_poly_dim(k);
      layout.per_cell = 2 * poly_dim(k - 1);
      break;
    case Space::DdrRot:
      layout.per_edge = 2 * edge_poly_dim(k + 1);
      layout.per_cell = 4 * poly_dim(k);
      break;
    case Space::DdrRotSym:
      layout.per_edge = 2 * edge_poly_dim(k + 1);
      layout.per_cell = 3 * poly_dim(k);
      break;
    case Space::Broken:
      layout.per_cell = poly_dim(degree);
      break;
    case Space::BrokenVec:
      layout.per_cell = 2 * poly_dim(degree);
      break;
    case Space::Ddr0Grad:
      layout.per_vertex = 1;
      break;
    case Space::Ddr0Curl:
      layout.per_edge = 1;
      break;
  }
  return layout;
}

std::vector<int> cell_dofs(const DofLayout& layout, const PolyMesh& mesh, int t) {
  const auto& cell = mesh.cells[t];
  std::vector<int> dofs;
  dofs.reserve(local_layout(layout, mesh, t).dim());
  for (int v : cell.vertex_loop) {
    const int off = layout.vertex_offset(v);
    for (int i = 0; i < layout.per_vertex; i++) dofs.push_back(off + i);
  }
  for (int e : cell.edge_loop) {
    const int off = layout.edge_offset(e);
    for (int i = 0; i < layout.per_edge; i++) dofs.push_back(off + i);
  }
  const int off = layout.cell_offset(t);
  for (int i = 0; i < layout.per_cell; i++) dofs.push_back(off + i);
  return dofs;
}

std::vector<int> edge_dofs(const DofLayout& layout, const PolyMesh& mesh, int e) {
  const auto& edge = mesh.edges[e];
  std::vector<int> dofs;
  for (int v : {edge.a, edge.b}) {
    const int off = layout.vertex_offset(v);
    for (int i = 0; i < layout.per_vertex; i++) dofs.push_back(off + i);
  }
  const int off = layout.edge_offset(e);
  for (int i = 0; i < layout.per_edge; i++) dofs.push_back(off + i);
  return dofs;
}

LocalLayout local_layout(const DofLayout& layout, const PolyMesh& mesh, int t) {
  LocalLayout local;
  local.nv = static_cast<int>(mesh.cells[t].vertex_loop.size());
  local.ne = static_cast<int>(mesh.cells[t].edge_loop.size());
  local.per_vertex = layout.per_vertex;
  local.per_edge = layout.per_edge;
  local.per_cell = layout.per_cell;
  return local;
}

}  // namespace stokesbgg
