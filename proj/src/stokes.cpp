#include "stokesbgg/stokes.hpp"

namespace stokesbgg {

Eigen::MatrixXd stokes_tangential_gradient_matrix(const EdgeContext& ec, int k) {
  const int n_out = edge_poly_dim(k);
  const int n_in = edge_poly_dim(k - 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_out, 2 + n_in);
  const Eigen::MatrixXd S = ec.values.topRows(n_in) * ec.quad.weights.asDiagonal() *
                            ec.derivs.topRows(n_out).transpose();
  for (int j = 0; j < n_out; j++) {
    B(j, 0) = -ec.end_values[0][j];
    B(j, 1) = ec.end_values[1][j];
    for (int i = 0; i < n_in; i++) B(j, 2 + i) = -S(i, j);
  }
  return B;
}

Eigen::MatrixXd stokes_element_gradient_matrix(const CellContext& cc) {
  const int k = cc.k;
  const int n_out = poly_dim(k - 1);
  const int n_cell = poly_dim(k - 2);
  const int n_qe = edge_poly_dim(k - 1);  // q_E block inside the edge slot
  const DofLayout proto = make_layout(Space::SGrad, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n_out, loc.dim());
  if (n_out == 0) return B;

  const Eigen::MatrixXd Dx = cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() *
                             cc.sgx.topRows(n_out).transpose();
  const Eigen::MatrixXd Dy = cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() *
                             cc.sgy.topRows(n_out).transpose();
  for (int j = 0; j < n_out; j++) {
    for (int i = 0; i < n_cell; i++) {
      B(2 * j + 0, loc.cell_offset() + i) = -Dx(i, j);
      B(2 * j + 1, loc.cell_offset() + i) = -Dy(i, j);
    }
  }
  for (int ie = 0; ie < loc.ne; ie++) {
    const Eigen::MatrixXd M = cc.edge_mixed_gram(ie, n_out, n_qe);
    const Eigen::Vector2d n = cc.loop_edge(ie).normal;
    const int w = cc.omega(ie);
    for (int j = 0; j < n_out; j++) {
      for (int c = 0; c < 2; c++) {
        for (int i = 0; i < n_qe; i++) {
          B(2 * j + c, loc.edge_offset(ie) + i) += w * n[c] * M(j, i);
        }
      }
    }
  }
  return B;
}

Eigen::MatrixXd sgrad_matrix(const CellContext& cc) {
  const int k = cc.k;
  const PolyMesh& mesh = *cc.mesh;
  const DofLayout src_proto = make_layout(Space::SGrad, k, mesh);
  const DofLayout dst_proto = make_layout(Space::SRot, k, mesh);
  const LocalLayout src = local_layout(src_proto, mesh, cc.t);
  const LocalLayout dst = local_layout(dst_proto, mesh, cc.t);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dst.dim(), src.dim());

  // vertex rows: the gradient components carried by the head space
  for (int i = 0; i < src.nv; i++) {
    G(dst.vertex_offset(i) + 0, src.vertex_offset(i) + 1) = 1.;
    G(dst.vertex_offset(i) + 1, src.vertex_offset(i) + 2) = 1.;
  }

  const int n_qe = edge_poly_dim(k - 1);
  const int n_gn = edge_poly_dim(k);
  const auto& loop = cc.cell().vertex_loop;
  for (int ie = 0; ie < src.ne; ie++) {
    const auto& edge = cc.loop_edge(ie);
    const Eigen::MatrixXd T = stokes_tangential_gradient_matrix(*cc.edge[ie], k);
    // map the edge-matrix columns [q_a, q_b, q_E] into the cell-local layout;
    // the loop walks the edge either along or against the canonical tangent
    const bool along = edge.a == loop[ie];
    const int col_tail = along ? src.vertex_offset(ie) : src.vertex_offset((ie + 1) % src.nv);
    const int col_head = along ? src.vertex_offset((ie + 1) % src.nv) : src.vertex_offset(ie);
    for (int j = 0; j < n_gn; j++) {
      for (int c = 0; c < 2; c++) {
        const int row = dst.edge_offset(ie) + 2 * j + c;
        // tangential part from the reconstructed gradient
        G(row, col_tail) += edge.tangent[c] * T(j, 0);
        G(row, col_head) += edge.tangent[c] * T(j, 1);
        for (int i = 0; i < n_qe; i++) {
          G(row, src.edge_offset(ie) + i) += edge.tangent[c] * T(j, 2 + i);
        }
        // normal part carried directly by the head space
        G(row, src.edge_offset(ie) + n_qe + j) += edge.normal[c];
      }
    }
  }

  const Eigen::MatrixXd GT = stokes_element_gradient_matrix(cc);
  G.middleRows(dst.cell_offset(), 2 * poly_dim(k - 1)) = GT;
  return G;
}

Eigen::MatrixXd srot_matrix(const CellContext& cc) {
  const int k = cc.k;
  const int n_out = poly_dim(k);
  const int n_cell = poly_dim(k - 1);
  const int n_edge = edge_poly_dim(k);
  const DofLayout proto = make_layout(Space::SRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_out, loc.dim());

  const Eigen::MatrixXd Gx = cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() *
                             cc.sgx.topRows(n_out).transpose();
  const Eigen::MatrixXd Gy = cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() *
                             cc.sgy.topRows(n_out).transpose();
  for (int j = 0; j < n_out; j++) {
    for (int i = 0; i < n_cell; i++) {
      B(j, loc.cell_offset() + 2 * i + 0) = Gy(i, j);
      B(j, loc.cell_offset() + 2 * i + 1) = -Gx(i, j);
    }
  }
  for (int ie = 0; ie < loc.ne; ie++) {
    const Eigen::MatrixXd M = cc.edge_mixed_gram(ie, n_out, n_edge);
    const Eigen::Vector2d tg = cc.loop_edge(ie).tangent;
    const int w = cc.omega(ie);
    for (int j = 0; j < n_out; j++) {
      for (int c = 0; c < 2; c++) {
        for (int i = 0; i < n_edge; i++) {
          B(j, loc.edge_offset(ie) + 2 * i + c) -= w * tg[c] * M(j, i);
        }
      }
    }
  }
  return B;
}

Eigen::VectorXd interpolate_stokes(const MeshContext& mc, const ScalarField& q,
                                   const VectorField& grad_q) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout layout = make_layout(Space::SGrad, k, mesh);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.dim());
  for (int iv = 0; iv < mesh.n_vertices(); iv++) {
    out[layout.vertex_offset(iv)] = q(mesh.vertices[iv]);
    out.segment<2>(layout.vertex_offset(iv) + 1) = grad_q(mesh.vertices[iv]);
  }
  const int n_qe = edge_poly_dim(k - 1);
  const int n_gn = edge_poly_dim(k);
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& ec = mc.edge(e);
    Eigen::VectorXd qs(ec.quad.size()), gns(ec.quad.size());
    for (int p = 0; p < ec.quad.size(); p++) {
      qs[p] = q(ec.quad.points.col(p));
      gns[p] = grad_q(ec.quad.points.col(p)).dot(mesh.edges[e].normal);
    }
    out.segment(layout.edge_offset(e), n_qe) =
        ec.values.topRows(n_qe) * ec.quad.weights.asDiagonal() * qs;
    out.segment(layout.edge_offset(e) + n_qe, n_gn) =
        ec.values.topRows(n_gn) * ec.quad.weights.asDiagonal() * gns;
  }
  const int n_cell = poly_dim(k - 2);
  if (n_cell > 0) {
    for (int t = 0; t < mesh.n_cells(); t++) {
      const CellContext cc = mc.cell(t);
      Eigen::VectorXd qs(cc.quad.size());
      for (int p = 0; p < cc.quad.size(); p++) qs[p] = q(cc.quad.points.col(p));
      out.segment(layout.cell_offset(t), n_cell) =
          cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() * qs;
    }
  }
  return out;
}

}  // namespace stokesbgg
