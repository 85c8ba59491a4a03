#include "stokesbgg/context.hpp"

namespace stokesbgg {

EdgeContext::EdgeContext(const PolyMesh& mesh, int e, int k, int quad_degree)
    : e(e),
      quad(edge_quadrature(mesh, e, quad_degree)),
      basis(mesh, e, k + 3, quad) {
  values = basis.values(quad.points);
  derivs = basis.derivatives(quad.points);
  for (int which : {0, 1}) {
    end_values[which] = basis.endpoint_values(which);
    end_derivs[which] = basis.endpoint_derivatives(which);
  }
}

CellContext::CellContext(const PolyMesh& m, int t, int k, const std::vector<EdgeContext>& edges,
                         int quad_degree)
    : mesh(&m), t(t), k(k), quad(cell_quadrature(m, t, quad_degree)),
      scalar(m, t, k + 4, quad),
      roly(m, t, CellVectorBasis::Kind::Roly, k + 1, quad),
      croly(m, t, CellVectorBasis::Kind::RolyCompl, k + 4, quad) {
  sv = scalar.values(quad.points);
  scalar.gradients(quad.points, sgx, sgy);
  roly.values(quad.points, roly_x, roly_y);
  croly.values(quad.points, croly_x, croly_y);
  croly_div = croly.divergence_values(quad.points);

  const auto& c = cell();
  const int ne = static_cast<int>(c.edge_loop.size());
  edge.resize(ne);
  scalar_on_edge.resize(ne);
  croly_on_edge_x.resize(ne);
  croly_on_edge_y.resize(ne);
  roly_on_edge_x.resize(ne);
  roly_on_edge_y.resize(ne);
  for (int i = 0; i < ne; i++) {
    edge[i] = &edges[c.edge_loop[i]];
    const auto& pts = edge[i]->quad.points;
    scalar_on_edge[i] = scalar.values(pts);
    croly.values(pts, croly_on_edge_x[i], croly_on_edge_y[i]);
    roly.values(pts, roly_on_edge_x[i], roly_on_edge_y[i]);
  }

  const int nv = static_cast<int>(c.vertex_loop.size());
  Eigen::Matrix2Xd vpts(2, nv);
  for (int i = 0; i < nv; i++) vpts.col(i) = mesh->vertices[c.vertex_loop[i]];
  scalar_at_vertices = scalar.values(vpts);
  scalar.gradients(vpts, sgx_at_vertices, sgy_at_vertices);
}

Eigen::MatrixXd CellContext::edge_mixed_gram(int i, int n_cell, int n_edge) const {
  return scalar_on_edge[i].topRows(n_cell) * edge[i]->quad.weights.asDiagonal() *
         edge[i]->values.topRows(n_edge).transpose();
}

MeshContext::MeshContext(const PolyMesh& mesh, int k, int quad_degree)
    : mesh_(&mesh), k_(k),
      quad_degree_(quad_degree > 0 ? quad_degree : default_quad_degree(k)) {
  edges_.reserve(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); e++) edges_.emplace_back(mesh, e, k, quad_degree_);
}

}  // namespace stokesbgg
