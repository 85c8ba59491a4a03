#include "stokesbgg/ddr.hpp"

namespace stokesbgg {

Eigen::MatrixXd ddr_edge_gradient_matrix(const EdgeContext& ec, const PolyMesh& mesh, int k) {
  (void)mesh;
  const int n_out = edge_poly_dim(k + 1);  // per component
  const int n_in = edge_poly_dim(k);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n_out, 4 + 2 * n_in);
  // d/ds moments of the edge unknown against the test functions
  const Eigen::MatrixXd S = ec.values.topRows(n_in) * ec.quad.weights.asDiagonal() *
                            ec.derivs.topRows(n_out).transpose();
  for (int j = 0; j < n_out; j++) {
    for (int c = 0; c < 2; c++) {
      B(2 * j + c, 0 + c) = -ec.end_values[0][j];
      B(2 * j + c, 2 + c) = ec.end_values[1][j];
      for (int i = 0; i < n_in; i++) B(2 * j + c, 4 + 2 * i + c) = -S(i, j);
    }
  }
  return B;
}

Eigen::MatrixXd ddr_element_gradient_matrix(const CellContext& cc) {
  const int k = cc.k;
  const int n_out = poly_dim(k);        // tensor components share the scalar basis
  const int n_cell = poly_dim(k - 1);   // per component of v_T
  const int n_edge = edge_poly_dim(k);  // per component of v_E
  const DofLayout proto = make_layout(Space::SRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4 * n_out, loc.dim());

  // volumetric term: -ceil moments of the divergence of the test tensor
  const Eigen::MatrixXd Dx = cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() *
                             cc.sgx.topRows(n_out).transpose();
  const Eigen::MatrixXd Dy = cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() *
                             cc.sgy.topRows(n_out).transpose();
  for (int j = 0; j < n_out; j++) {
    for (int r = 0; r < 2; r++) {
      for (int i = 0; i < n_cell; i++) {
        B(4 * j + 2 * r + 0, loc.cell_offset() + 2 * i + r) = -Dx(i, j);
        B(4 * j + 2 * r + 1, loc.cell_offset() + 2 * i + r) = -Dy(i, j);
      }
    }
  }
  for (int ie = 0; ie < loc.ne; ie++) {
    const Eigen::MatrixXd M = cc.edge_mixed_gram(ie, n_out, n_edge);
    const Eigen::Vector2d n = cc.loop_edge(ie).normal;
    const int w = cc.omega(ie);
    for (int j = 0; j < n_out; j++) {
      for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
          for (int i = 0; i < n_edge; i++) {
            B(4 * j + 2 * r + c, loc.edge_offset(ie) + 2 * i + r) += w * n[c] * M(j, i);
          }
        }
      }
    }
  }
  return B;
}

Eigen::MatrixXd ddr_element_rot_matrix(const CellContext& cc) {
  const int k = cc.k;
  const int n_out = poly_dim(k + 1);
  const int n_cell = poly_dim(k);
  const int n_edge = edge_poly_dim(k + 1);
  const DofLayout proto = make_layout(Space::DdrRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n_out, loc.dim());

  // tau_T : CURL w with w = psi_j e_c reaches only row c of tau
  const Eigen::MatrixXd Gx = cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() *
                             cc.sgx.topRows(n_out).transpose();
  const Eigen::MatrixXd Gy = cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() *
                             cc.sgy.topRows(n_out).transpose();
  for (int j = 0; j < n_out; j++) {
    for (int c = 0; c < 2; c++) {
      for (int i = 0; i < n_cell; i++) {
        B(2 * j + c, loc.cell_offset() + 4 * i + 2 * c + 0) = Gy(i, j);
        B(2 * j + c, loc.cell_offset() + 4 * i + 2 * c + 1) = -Gx(i, j);
      }
    }
  }
  for (int ie = 0; ie < loc.ne; ie++) {
    const Eigen::MatrixXd M = cc.edge_mixed_gram(ie, n_out, n_edge);
    const int w = cc.omega(ie);
    for (int j = 0; j < n_out; j++) {
      for (int c = 0; c < 2; c++) {
        for (int i = 0; i < n_edge; i++) {
          B(2 * j + c, loc.edge_offset(ie) + 2 * i + c) = -w * M(j, i);
        }
      }
    }
  }
  return B;
}

Eigen::MatrixXd sskw_matrix(int k) {
  const int n = poly_dim(k);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, 4 * n);
  for (int i = 0; i < n; i++) {
    S(i, 4 * i + 1) = 1.;   // slot (0,1)
    S(i, 4 * i + 2) = -1.;  // slot (1,0)
  }
  return S;
}

//------------------------------------------------------------------------------

namespace {

Eigen::MatrixXd sample_vector(const VectorField& v, const Eigen::Matrix2Xd& pts) {
  Eigen::MatrixXd out(2, pts.cols());
  for (int p = 0; p < pts.cols(); p++) out.col(p) = v(pts.col(p));
  return out;
}

}  // namespace

Eigen::VectorXd interpolate_ddr_grad(const MeshContext& mc, const VectorField& v) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout layout = make_layout(Space::SRot, k, mesh);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.dim());
  for (int iv = 0; iv < mesh.n_vertices(); iv++) {
    out.segment<2>(layout.vertex_offset(iv)) = v(mesh.vertices[iv]);
  }
  const int n_edge = edge_poly_dim(k);
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& ec = mc.edge(e);
    const Eigen::MatrixXd samples = sample_vector(v, ec.quad.points);
    for (int c = 0; c < 2; c++) {
      const Eigen::VectorXd coeffs =
          ec.values.topRows(n_edge) * ec.quad.weights.asDiagonal() * samples.row(c).transpose();
      for (int i = 0; i < n_edge; i++) out[layout.edge_offset(e) + 2 * i + c] = coeffs[i];
    }
  }
  const int n_cell = poly_dim(k - 1);
  if (n_cell > 0) {
    for (int t = 0; t < mesh.n_cells(); t++) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd samples = sample_vector(v, cc.quad.points);
      for (int c = 0; c < 2; c++) {
        const Eigen::VectorXd coeffs =
            cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() * samples.row(c).transpose();
        for (int i = 0; i < n_cell; i++) out[layout.cell_offset(t) + 2 * i + c] = coeffs[i];
      }
    }
  }
  return out;
}

Eigen::VectorXd interpolate_ddr_rot(const MeshContext& mc, const MatrixField& tau) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout layout = make_layout(Space::DdrRot, k, mesh);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.dim());
  const int n_edge = edge_poly_dim(k + 1);
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& ec = mc.edge(e);
    const Eigen::Vector2d tg = mesh.edges[e].tangent;
    Eigen::MatrixXd samples(2, ec.quad.size());
    for (int p = 0; p < ec.quad.size(); p++) {
      samples.col(p) = tau(ec.quad.points.col(p)) * tg;
    }
    for (int c = 0; c < 2; c++) {
      const Eigen::VectorXd coeffs =
          ec.values.topRows(n_edge) * ec.quad.weights.asDiagonal() * samples.row(c).transpose();
      for (int i = 0; i < n_edge; i++) out[layout.edge_offset(e) + 2 * i + c] = coeffs[i];
    }
  }
  const int n_cell = poly_dim(k);
  for (int t = 0; t < mesh.n_cells(); t++) {
    const CellContext cc = mc.cell(t);
    Eigen::MatrixXd samples(4, cc.quad.size());
    for (int p = 0; p < cc.quad.size(); p++) {
      const Eigen::Matrix2d m = tau(cc.quad.points.col(p));
      samples.col(p) << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
    }
    for (int s = 0; s < 4; s++) {
      const Eigen::VectorXd coeffs =
          cc.sv.topRows(n_cell) * cc.quad.weights.asDiagonal() * samples.row(s).transpose();
      for (int i = 0; i < n_cell; i++) out[layout.cell_offset(t) + 4 * i + s] = coeffs[i];
    }
  }
  return out;
}

//------------------------------------------------------------------------------

Ddr0Ops ddr0_ops(const PolyMesh& mesh) {
  Ddr0Ops ops;
  std::vector<Eigen::Triplet<double>> tg, tc;
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& edge = mesh.edges[e];
    tg.emplace_back(e, edge.a, -1. / edge.length);
    tg.emplace_back(e, edge.b, 1. / edge.length);
  }
  for (int t = 0; t < mesh.n_cells(); t++) {
    const auto& cell = mesh.cells[t];
    for (size_t i = 0; i < cell.edge_loop.size(); i++) {
      const auto& edge = mesh.edges[cell.edge_loop[i]];
      tc.emplace_back(t, cell.edge_loop[i], -cell.edge_sign[i] * edge.length / cell.area);
    }
  }
  ops.grad.resize(mesh.n_edges(), mesh.n_vertices());
  ops.grad.setFromTriplets(tg.begin(), tg.end());
  ops.curl.resize(mesh.n_cells(), mesh.n_edges());
  ops.curl.setFromTriplets(tc.begin(), tc.end());
  return ops;
}

Eigen::VectorXd interpolate_ddr0_grad(const PolyMesh& mesh, const ScalarField& q) {
  Eigen::VectorXd out(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); v++) out[v] = q(mesh.vertices[v]);
  return out;
}

Eigen::VectorXd interpolate_ddr0_curl(const PolyMesh& mesh, const VectorField& v) {
  Eigen::VectorXd out(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); e++) {
    const QuadRule rule = edge_quadrature(mesh, e, 8);
    double avg = 0.;
    for (int p = 0; p < rule.size(); p++) {
      avg += rule.weights[p] * v(rule.points.col(p)).dot(mesh.edges[e].tangent);
    }
    out[e] = avg / mesh.edges[e].length;
  }
  return out;
}

Eigen::MatrixXd gamma0_matrix(const CellContext& cc) {
  // moments against rotated gradients of the two degree-1 basis functions;
  // the cell-average term drops out because those functions have zero average
  Eigen::Matrix2d A;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, cc.n_loop_edges());
  for (int j = 1; j <= 2; j++) {
    const Eigen::VectorXd curl_x = cc.sgy.row(j).transpose();
    const Eigen::VectorXd curl_y = -cc.sgx.row(j).transpose();
    A(j - 1, 0) = (cc.sv.row(0).transpose().cwiseProduct(curl_x)).dot(cc.quad.weights);
    A(j - 1, 1) = (cc.sv.row(0).transpose().cwiseProduct(curl_y)).dot(cc.quad.weights);
    for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
      const double integral =
          cc.scalar_on_edge[ie].row(j).dot(cc.edge[ie]->quad.weights);
      B(j - 1, ie) = cc.omega(ie) * integral;
    }
  }
  return A.inverse() * B;
}

}  // namespace stokesbgg
