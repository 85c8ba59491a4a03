#include "stokesbgg/potentials.hpp"

#include <stdexcept>
#include <string>

namespace stokesbgg {

namespace {

// Constrained edge-misfit lifting shared by every consistent lifting here.
// Unknown w in P^d(T)^2 (interleaved coefficients over the cell scalar basis):
// the graded prefix of degree d-1 is pinned by `prefix_map` and the remaining
// top-degree block minimises
//   sum_E h_E^{-1} int_E |B_E w - data_E|^2,
// where B_E w is the full vector trace (tangential_only = false, vector edge
// data interleaved) or the tangential component w.t_E (tangential_only = true,
// scalar edge data). Both maps act on the same local input vector.
Eigen::MatrixXd constrained_lifting(const CellContext& cc, int d, bool tangential_only,
                                    const Eigen::MatrixXd& prefix_map,
                                    const std::vector<Eigen::MatrixXd>& edge_data_maps,
                                    int edge_data_degree) {
  const int n_lo = poly_dim(d - 1);
  const int n_hi = poly_dim(d);
  const int n_free = 2 * (n_hi - n_lo);
  const int n_in = static_cast<int>(prefix_map.cols());
  const int ne = cc.n_loop_edges();
  const int n_edata = edge_poly_dim(edge_data_degree);

  // quadratic form over all 2*n_hi coefficients and cross term against inputs
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * n_hi, 2 * n_hi);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * n_hi, n_in);
  for (int ie = 0; ie < ne; ie++) {
    const auto& ec = *cc.edge[ie];
    const double wgt = 1. / cc.loop_edge(ie).length;
    const Eigen::MatrixXd& A = cc.scalar_on_edge[ie];  // cell basis on this edge
    const Eigen::MatrixXd M =
        A.topRows(n_hi) * ec.quad.weights.asDiagonal() * A.topRows(n_hi).transpose();
    const Eigen::MatrixXd X =
        A.topRows(n_hi) * ec.quad.weights.asDiagonal() * ec.values.topRows(n_edata).transpose();
    if (tangential_only) {
      const Eigen::Vector2d tg = cc.loop_edge(ie).tangent;
      for (int c = 0; c < 2; c++) {
        for (int cp = 0; cp < 2; cp++) {
          for (int i = 0; i < n_hi; i++) {
            for (int j = 0; j < n_hi; j++) {
              K(2 * i + c, 2 * j + cp) += wgt * tg[c] * tg[cp] * M(i, j);
            }
          }
        }
        for (int i = 0; i < n_hi; i++) {
          for (int j = 0; j < n_edata; j++) {
            C.row(2 * i + c) += wgt * tg[c] * X(i, j) * edge_data_maps[ie].row(j);
          }
        }
      }
    } else {
      for (int c = 0; c < 2; c++) {
        for (int i = 0; i < n_hi; i++) {
          for (int j = 0; j < n_hi; j++) K(2 * i + c, 2 * j + c) += wgt * M(i, j);
          for (int j = 0; j < n_edata; j++) {
            C.row(2 * i + c) += wgt * X(i, j) * edge_data_maps[ie].row(2 * j + c);
          }
        }
      }
    }
  }

  // split prefix / free blocks (interleaved layout keeps the prefix contiguous)
  Eigen::MatrixXd lift(2 * n_hi, n_in);
  lift.topRows(2 * n_lo) = prefix_map;
  if (n_free > 0) {
    const Eigen::MatrixXd K_ff = K.bottomRightCorner(n_free, n_free);
    const Eigen::MatrixXd K_fp = K.bottomLeftCorner(n_free, 2 * n_lo);
    const Eigen::MatrixXd rhs = C.bottomRows(n_free) - K_fp * prefix_map;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K_ff);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw std::runtime_error("constrained lifting rank-deficient on cell " +
                               std::to_string(cc.t));
    }
    lift.bottomRows(n_free) = ldlt.solve(rhs);
  }
  return lift;
}

// mixed system used by the vector potentials: unknown P in P^d(T)^2 tested
// against rotated gradients of P^{d+1}(T) (constants removed) and the Koszul
// complement of degree d
Eigen::PartialPivLU<Eigen::MatrixXd> rot_system_lu(const CellContext& cc, int d) {
  const int n = poly_dim(d);
  const int n_tests = poly_dim(d + 1) - 1;
  const int n_croly = croly_dim(d);
  Eigen::MatrixXd L(n_tests + n_croly, 2 * n);
  for (int j = 1; j <= n_tests; j++) {
    for (int i = 0; i < n; i++) {
      L(j - 1, 2 * i + 0) =
          cc.sv.row(i).cwiseProduct(cc.sgy.row(j)).cwiseProduct(cc.quad.weights.transpose()).sum();
      L(j - 1, 2 * i + 1) =
          -cc.sv.row(i).cwiseProduct(cc.sgx.row(j)).cwiseProduct(cc.quad.weights.transpose()).sum();
    }
  }
  for (int m = 0; m < n_croly; m++) {
    for (int i = 0; i < n; i++) {
      L(n_tests + m, 2 * i + 0) = cc.sv.row(i)
                                      .cwiseProduct(cc.croly_x.row(m))
                                      .cwiseProduct(cc.quad.weights.transpose())
                                      .sum();
      L(n_tests + m, 2 * i + 1) = cc.sv.row(i)
                                      .cwiseProduct(cc.croly_y.row(m))
                                      .cwiseProduct(cc.quad.weights.transpose())
                                      .sum();
    }
  }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(L);
}

// divergence-moment system: D(m, j) = int psi_j div w_m over the Koszul
// complement of degree d+1; square and invertible onto P^d(T)
Eigen::PartialPivLU<Eigen::MatrixXd> div_system_lu(const CellContext& cc, int d) {
  const int n = poly_dim(d);
  const int m = croly_dim(d + 1);
  Eigen::MatrixXd D =
      cc.croly_div.topRows(m) * cc.quad.weights.asDiagonal() * cc.sv.topRows(n).transpose();
  return Eigen::PartialPivLU<Eigen::MatrixXd>(D);
}

}  // namespace

Eigen::MatrixXd lifting_matrix(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_lo = poly_dim(k - 1);

  Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(2 * n_lo, loc.dim());
  prefix.middleCols(loc.cell_offset(), 2 * n_lo).setIdentity();
  std::vector<Eigen::MatrixXd> edge_maps(cc.n_loop_edges());
  for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * edge_poly_dim(k), loc.dim());
    m.middleCols(loc.edge_offset(ie), 2 * edge_poly_dim(k)).setIdentity();
    edge_maps[ie] = m;
  }
  return constrained_lifting(cc, k, false, prefix, edge_maps, k);
}

Eigen::MatrixXd pot_rot_matrix(const CellContext& cc, RotLifting choice) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_tests = poly_dim(k + 1) - 1;
  const int n_croly = croly_dim(k);

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_tests + n_croly, loc.dim());

  // rot moments: the scalar rot supplies the coefficients directly
  const Eigen::MatrixXd R = srot_matrix(cc);
  rhs.topRows(std::min<int>(n_tests, R.rows() - 1)) =
      R.middleRows(1, std::min<int>(n_tests, R.rows() - 1));
  // boundary tangential term
  for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
    const Eigen::MatrixXd M = cc.edge_mixed_gram(ie, poly_dim(k + 1), edge_poly_dim(k));
    const Eigen::Vector2d tg = cc.loop_edge(ie).tangent;
    const int w = cc.omega(ie);
    for (int j = 1; j <= n_tests; j++) {
      for (int c = 0; c < 2; c++) {
        for (int i = 0; i < edge_poly_dim(k); i++) {
          rhs(j - 1, loc.edge_offset(ie) + 2 * i + c) += w * tg[c] * M(j, i);
        }
      }
    }
  }
  // complement moments come from the consistent lifting (or, diagnostically,
  // from the inclusion of the cell component)
  Eigen::MatrixXd lift;
  if (choice == RotLifting::Consistent) {
    lift = lifting_matrix(cc);
  } else {
    lift = Eigen::MatrixXd::Zero(2 * poly_dim(k), loc.dim());
    lift.block(0, loc.cell_offset(), 2 * poly_dim(k - 1), 2 * poly_dim(k - 1)).setIdentity();
  }
  const int n = poly_dim(k);
  Eigen::MatrixXd G_c(n_croly, 2 * n);  // int (psi_i e_c) . croly_m
  for (int m = 0; m < n_croly; m++) {
    for (int i = 0; i < n; i++) {
      G_c(m, 2 * i + 0) = cc.sv.row(i)
                              .cwiseProduct(cc.croly_x.row(m))
                              .cwiseProduct(cc.quad.weights.transpose())
                              .sum();
      G_c(m, 2 * i + 1) = cc.sv.row(i)
                              .cwiseProduct(cc.croly_y.row(m))
                              .cwiseProduct(cc.quad.weights.transpose())
                              .sum();
    }
  }
  rhs.bottomRows(n_croly) = G_c * lift;

  return rot_system_lu(cc, k).solve(rhs);
}

namespace {

// trace block on one loop edge: prefix moments pinned, trailing coefficients
// from endpoint conditions. `n_moments` fixes the number of pinned edge
// moments, `conditions` rows are (endpoint values | endpoint derivatives)
// evaluations of the remaining basis functions.
Eigen::MatrixXd edge_trace_block(const CellContext& cc, int ie, int trace_degree, int n_moments,
                                 bool with_derivatives, const Eigen::MatrixXd& moment_map,
                                 const Eigen::MatrixXd& value_map,
                                 const Eigen::MatrixXd& deriv_map) {
  const auto& ec = *cc.edge[ie];
  const int n_trace = edge_poly_dim(trace_degree);
  const int n_cond = n_trace - n_moments;
  const int n_in = static_cast<int>(moment_map.cols());

  Eigen::MatrixXd block(n_trace, n_in);
  block.topRows(n_moments) = moment_map;

  // endpoint conditions: subtract the pinned prefix, solve the small system
  Eigen::MatrixXd A(n_cond, n_cond);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_cond, n_in);
  int row = 0;
  for (int which : {0, 1}) {
    for (int i = 0; i < n_cond; i++) A(row, i) = ec.end_values[which][n_moments + i];
    rhs.row(row) = value_map.row(which);
    for (int i = 0; i < n_moments; i++) {
      rhs.row(row) -= ec.end_values[which][i] * moment_map.row(i);
    }
    row++;
  }
  if (with_derivatives) {
    for (int which : {0, 1}) {
      for (int i = 0; i < n_cond; i++) A(row, i) = ec.end_derivs[which][n_moments + i];
      rhs.row(row) = deriv_map.row(which);
      for (int i = 0; i < n_moments; i++) {
        rhs.row(row) -= ec.end_derivs[which][i] * moment_map.row(i);
      }
      row++;
    }
  }
  block.bottomRows(n_cond) = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(rhs);
  return block;
}

}  // namespace

Eigen::MatrixXd trace_matrix(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SGrad, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_trace = edge_poly_dim(k + 1);
  const int n_qe = edge_poly_dim(k - 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(cc.n_loop_edges() * n_trace, loc.dim());

  for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
    const auto& edge = cc.loop_edge(ie);
    const bool along = edge.a == cc.cell().vertex_loop[ie];
    const int tail_loop = along ? ie : (ie + 1) % loc.nv;
    const int head_loop = along ? (ie + 1) % loc.nv : ie;

    Eigen::MatrixXd moment_map = Eigen::MatrixXd::Zero(n_qe, loc.dim());
    moment_map.middleCols(loc.edge_offset(ie), n_qe).setIdentity();
    Eigen::MatrixXd value_map = Eigen::MatrixXd::Zero(2, loc.dim());
    value_map(0, loc.vertex_offset(tail_loop)) = 1.;
    value_map(1, loc.vertex_offset(head_loop)) = 1.;

    T.middleRows(ie * n_trace, n_trace) = edge_trace_block(
        cc, ie, k + 1, n_qe, false, moment_map, value_map, Eigen::MatrixXd());
  }
  return T;
}

Eigen::MatrixXd pot_stokes_matrix(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SGrad, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_out = poly_dim(k + 1);
  const int n_croly = croly_dim(k + 2);

  const Eigen::MatrixXd G = sgrad_matrix(cc);
  const Eigen::MatrixXd Prot_G = pot_rot_matrix(cc) * G;  // P^k(T)^2 coefficients
  const Eigen::MatrixXd trace = trace_matrix(cc);
  const int n_trace = edge_poly_dim(k + 1);

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_croly, loc.dim());
  // volumetric part: - int prot(sgrad q) . w_m
  const int n = poly_dim(k);
  for (int m = 0; m < n_croly; m++) {
    Eigen::RowVectorXd gx =
        cc.croly_x.row(m).cwiseProduct(cc.quad.weights.transpose()) * cc.sv.topRows(n).transpose();
    Eigen::RowVectorXd gy =
        cc.croly_y.row(m).cwiseProduct(cc.quad.weights.transpose()) * cc.sv.topRows(n).transpose();
    for (int i = 0; i < n; i++) {
      rhs.row(m) -= gx[i] * Prot_G.row(2 * i + 0) + gy[i] * Prot_G.row(2 * i + 1);
    }
  }
  // boundary part: + sum_E w int_E trace (w_m . n_E)
  for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
    const auto& ec = *cc.edge[ie];
    const Eigen::Vector2d nrm = cc.loop_edge(ie).normal;
    const int w = cc.omega(ie);
    const Eigen::MatrixXd wn = nrm.x() * cc.croly_on_edge_x[ie].topRows(n_croly) +
                               nrm.y() * cc.croly_on_edge_y[ie].topRows(n_croly);
    const Eigen::MatrixXd M =
        wn * ec.quad.weights.asDiagonal() * ec.values.topRows(n_trace).transpose();
    rhs += w * M * trace.middleRows(ie * n_trace, n_trace);
  }
  (void)n_out;
  return div_system_lu(cc, k + 1).solve(rhs);
}

Eigen::MatrixXd pot_grad_kp2_matrix(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_out = poly_dim(k + 2);
  const int n_croly = croly_dim(k + 3);
  const int n_trace = edge_poly_dim(k + 2);
  const int n_ve = edge_poly_dim(k);

  // tensor element gradient and per-edge tangential gradients
  const Eigen::MatrixXd Gt = ddr_element_gradient_matrix(cc);
  std::vector<Eigen::MatrixXd> Ge(cc.n_loop_edges());
  for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
    const Eigen::MatrixXd B = ddr_edge_gradient_matrix(*cc.edge[ie], *cc.mesh, k);
    // rebase the edge-local columns [v_a v_b v_E] onto the cell-local layout
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(B.rows(), loc.dim());
    const auto& edge = cc.loop_edge(ie);
    const bool along = edge.a == cc.cell().vertex_loop[ie];
    const int tail_loop = along ? ie : (ie + 1) % loc.nv;
    const int head_loop = along ? (ie + 1) % loc.nv : ie;
    full.middleCols(loc.vertex_offset(tail_loop), 2) = B.middleCols(0, 2);
    full.middleCols(loc.vertex_offset(head_loop), 2) = B.middleCols(2, 2);
    full.middleCols(loc.edge_offset(ie), 2 * n_ve) = B.rightCols(2 * n_ve);
    Ge[ie] = full;
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> div_lu = div_system_lu(cc, k + 2);
  Eigen::MatrixXd out(2 * n_out, loc.dim());

  for (int r = 0; r < 2; r++) {
    // lifted gradient of component r: prefix = tensor row r, tangential data
    // from the edge gradient
    const int n_pre = poly_dim(k);
    Eigen::MatrixXd prefix(2 * n_pre, loc.dim());
    for (int i = 0; i < n_pre; i++) {
      prefix.row(2 * i + 0) = Gt.row(4 * i + 2 * r + 0);
      prefix.row(2 * i + 1) = Gt.row(4 * i + 2 * r + 1);
    }
    std::vector<Eigen::MatrixXd> edata(cc.n_loop_edges());
    for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
      Eigen::MatrixXd m(edge_poly_dim(k + 1), loc.dim());
      for (int j = 0; j < edge_poly_dim(k + 1); j++) m.row(j) = Ge[ie].row(2 * j + r);
      edata[ie] = m;
    }
    const Eigen::MatrixXd g = constrained_lifting(cc, k + 1, true, prefix, edata, k + 1);

    // componentwise traces: moments from v_E component r, values from v_V
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_croly, loc.dim());
    const int n_g = poly_dim(k + 1);
    for (int m = 0; m < n_croly; m++) {
      Eigen::RowVectorXd gx = cc.croly_x.row(m).cwiseProduct(cc.quad.weights.transpose()) *
                              cc.sv.topRows(n_g).transpose();
      Eigen::RowVectorXd gy = cc.croly_y.row(m).cwiseProduct(cc.quad.weights.transpose()) *
                              cc.sv.topRows(n_g).transpose();
      for (int i = 0; i < n_g; i++) {
        rhs.row(m) -= gx[i] * g.row(2 * i + 0) + gy[i] * g.row(2 * i + 1);
      }
    }
    for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
      const auto& edge = cc.loop_edge(ie);
      const bool along = edge.a == cc.cell().vertex_loop[ie];
      const int tail_loop = along ? ie : (ie + 1) % loc.nv;
      const int head_loop = along ? (ie + 1) % loc.nv : ie;

      Eigen::MatrixXd moment_map = Eigen::MatrixXd::Zero(edge_poly_dim(k), loc.dim());
      for (int i = 0; i < edge_poly_dim(k); i++) {
        moment_map(i, loc.edge_offset(ie) + 2 * i + r) = 1.;
      }
      Eigen::MatrixXd value_map = Eigen::MatrixXd::Zero(2, loc.dim());
      value_map(0, loc.vertex_offset(tail_loop) + r) = 1.;
      value_map(1, loc.vertex_offset(head_loop) + r) = 1.;
      const Eigen::MatrixXd trace = edge_trace_block(cc, ie, k + 2, edge_poly_dim(k), false,
                                                     moment_map, value_map, Eigen::MatrixXd());

      const auto& ec = *cc.edge[ie];
      const Eigen::Vector2d nrm = edge.normal;
      const Eigen::MatrixXd wn = nrm.x() * cc.croly_on_edge_x[ie].topRows(n_croly) +
                                 nrm.y() * cc.croly_on_edge_y[ie].topRows(n_croly);
      const Eigen::MatrixXd M =
          wn * ec.quad.weights.asDiagonal() * ec.values.topRows(n_trace).transpose();
      rhs += cc.omega(ie) * M * trace;
    }

    const Eigen::MatrixXd Pr = div_lu.solve(rhs);
    for (int j = 0; j < n_out; j++) out.row(2 * j + r) = Pr.row(j);
  }
  return out;
}

Eigen::MatrixXd pot_rot_tensor_matrix(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::DdrRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int d = k + 1;
  const int n_out = poly_dim(d);
  const int n_tests = poly_dim(d + 1) - 1;
  const int n_croly = croly_dim(d);
  const int n_te = edge_poly_dim(k + 1);

  const Eigen::MatrixXd R = ddr_element_rot_matrix(cc);  // rows 2j+r
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu = rot_system_lu(cc, d);

  // complement Gram for the lifting moments
  Eigen::MatrixXd G_c(n_croly, 2 * n_out);
  for (int m = 0; m < n_croly; m++) {
    for (int i = 0; i < n_out; i++) {
      G_c(m, 2 * i + 0) = cc.sv.row(i)
                              .cwiseProduct(cc.croly_x.row(m))
                              .cwiseProduct(cc.quad.weights.transpose())
                              .sum();
      G_c(m, 2 * i + 1) = cc.sv.row(i)
                              .cwiseProduct(cc.croly_y.row(m))
                              .cwiseProduct(cc.quad.weights.transpose())
                              .sum();
    }
  }

  Eigen::MatrixXd out(4 * n_out, loc.dim());
  for (int r = 0; r < 2; r++) {
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_tests + n_croly, loc.dim());
    // rot moments: coefficients of the element rot, padded with zeros for the
    // higher test degrees
    for (int j = 1; j <= n_tests; j++) {
      if (j < poly_dim(k + 1)) rhs.row(j - 1) = R.row(2 * j + r);
    }
    for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
      const Eigen::MatrixXd M = cc.edge_mixed_gram(ie, poly_dim(d + 1), n_te);
      const int w = cc.omega(ie);
      for (int j = 1; j <= n_tests; j++) {
        for (int i = 0; i < n_te; i++) {
          rhs(j - 1, loc.edge_offset(ie) + 2 * i + r) += w * M(j, i);
        }
      }
    }
    // complement moments from the row lifting: prefix = cell row r of tau,
    // tangential data = component r of tau_E
    const int n_pre = poly_dim(k);
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(2 * n_pre, loc.dim());
    for (int i = 0; i < n_pre; i++) {
      prefix(2 * i + 0, loc.cell_offset() + 4 * i + 2 * r + 0) = 1.;
      prefix(2 * i + 1, loc.cell_offset() + 4 * i + 2 * r + 1) = 1.;
    }
    std::vector<Eigen::MatrixXd> edata(cc.n_loop_edges());
    for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_te, loc.dim());
      for (int j = 0; j < n_te; j++) m(j, loc.edge_offset(ie) + 2 * j + r) = 1.;
      edata[ie] = m;
    }
    const Eigen::MatrixXd lift = constrained_lifting(cc, d, true, prefix, edata, k + 1);
    rhs.bottomRows(n_croly) = G_c * lift;

    const Eigen::MatrixXd Pr = lu.solve(rhs);
    for (int j = 0; j < n_out; j++) {
      out.row(4 * j + 2 * r + 0) = Pr.row(2 * j + 0);
      out.row(4 * j + 2 * r + 1) = Pr.row(2 * j + 1);
    }
  }
  return out;
}

Eigen::MatrixXd trace_kp3_matrix(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SGrad, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_trace = edge_poly_dim(k + 3);
  const int n_qe = edge_poly_dim(k - 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(cc.n_loop_edges() * n_trace, loc.dim());

  for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
    const auto& edge = cc.loop_edge(ie);
    const bool along = edge.a == cc.cell().vertex_loop[ie];
    const int tail_loop = along ? ie : (ie + 1) % loc.nv;
    const int head_loop = along ? (ie + 1) % loc.nv : ie;

    Eigen::MatrixXd moment_map = Eigen::MatrixXd::Zero(n_qe, loc.dim());
    moment_map.middleCols(loc.edge_offset(ie), n_qe).setIdentity();
    Eigen::MatrixXd value_map = Eigen::MatrixXd::Zero(2, loc.dim());
    value_map(0, loc.vertex_offset(tail_loop)) = 1.;
    value_map(1, loc.vertex_offset(head_loop)) = 1.;
    // tangential derivative at the endpoints: G_V . t_E
    Eigen::MatrixXd deriv_map = Eigen::MatrixXd::Zero(2, loc.dim());
    deriv_map(0, loc.vertex_offset(tail_loop) + 1) = edge.tangent.x();
    deriv_map(0, loc.vertex_offset(tail_loop) + 2) = edge.tangent.y();
    deriv_map(1, loc.vertex_offset(head_loop) + 1) = edge.tangent.x();
    deriv_map(1, loc.vertex_offset(head_loop) + 2) = edge.tangent.y();

    T.middleRows(ie * n_trace, n_trace) =
        edge_trace_block(cc, ie, k + 3, n_qe, true, moment_map, value_map, deriv_map);
  }
  return T;
}

Eigen::MatrixXd pot_stokes_kp3_matrix(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SGrad, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_croly = croly_dim(k + 4);
  const int n_trace = edge_poly_dim(k + 3);

  const Eigen::MatrixXd G22 = pot_grad_kp2_matrix(cc) * sgrad_matrix(cc);
  const Eigen::MatrixXd trace = trace_kp3_matrix(cc);

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_croly, loc.dim());
  const int n_g = poly_dim(k + 2);
  for (int m = 0; m < n_croly; m++) {
    Eigen::RowVectorXd gx =
        cc.croly_x.row(m).cwiseProduct(cc.quad.weights.transpose()) * cc.sv.topRows(n_g).transpose();
    Eigen::RowVectorXd gy =
        cc.croly_y.row(m).cwiseProduct(cc.quad.weights.transpose()) * cc.sv.topRows(n_g).transpose();
    for (int i = 0; i < n_g; i++) {
      rhs.row(m) -= gx[i] * G22.row(2 * i + 0) + gy[i] * G22.row(2 * i + 1);
    }
  }
  for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
    const auto& ec = *cc.edge[ie];
    const Eigen::Vector2d nrm = cc.loop_edge(ie).normal;
    const Eigen::MatrixXd wn = nrm.x() * cc.croly_on_edge_x[ie].topRows(n_croly) +
                               nrm.y() * cc.croly_on_edge_y[ie].topRows(n_croly);
    const Eigen::MatrixXd M =
        wn * ec.quad.weights.asDiagonal() * ec.values.topRows(n_trace).transpose();
    rhs += cc.omega(ie) * M * trace.middleRows(ie * n_trace, n_trace);
  }
  return div_system_lu(cc, k + 3).solve(rhs);
}

//------------------------------------------------------------------------------

Eigen::MatrixXd interp_stokes_of_poly(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SGrad, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_in = poly_dim(k + 1);
  Eigen::MatrixXd I = Eigen::MatrixXd::Zero(loc.dim(), n_in);

  const auto& lv = cc.cell().vertex_loop;
  for (int i = 0; i < loc.nv; i++) {
    for (int j = 0; j < n_in; j++) {
      I(loc.vertex_offset(i) + 0, j) = cc.scalar_at_vertices(j, i);
      I(loc.vertex_offset(i) + 1, j) = cc.sgx_at_vertices(j, i);
      I(loc.vertex_offset(i) + 2, j) = cc.sgy_at_vertices(j, i);
    }
  }
  const int n_qe = edge_poly_dim(k - 1);
  const int n_gn = edge_poly_dim(k);
  for (int ie = 0; ie < loc.ne; ie++) {
    const auto& ec = *cc.edge[ie];
    const Eigen::Vector2d nrm = cc.loop_edge(ie).normal;
    // moments of the polynomial on the edge
    const Eigen::MatrixXd Mq = ec.values.topRows(n_qe) * ec.quad.weights.asDiagonal() *
                               cc.scalar_on_edge[ie].topRows(n_in).transpose();
    I.middleRows(loc.edge_offset(ie), n_qe) = Mq;
    // normal derivative moments
    Eigen::MatrixXd gx, gy;
    cc.scalar.gradients(ec.quad.points, gx, gy);
    const Eigen::MatrixXd gn = nrm.x() * gx.topRows(n_in) + nrm.y() * gy.topRows(n_in);
    const Eigen::MatrixXd Mg =
        ec.values.topRows(n_gn) * ec.quad.weights.asDiagonal() * gn.transpose();
    I.middleRows(loc.edge_offset(ie) + n_qe, n_gn) = Mg;
  }
  // cell moments: graded orthonormal basis makes the projection a truncation
  const int n_cell = poly_dim(k - 2);
  I.block(loc.cell_offset(), 0, n_cell, n_cell).setIdentity();
  (void)lv;
  return I;
}

Eigen::MatrixXd interp_srot_of_poly(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const int n_in_s = poly_dim(k);  // scalar basis functions per component
  Eigen::MatrixXd I = Eigen::MatrixXd::Zero(loc.dim(), 2 * n_in_s);

  for (int i = 0; i < loc.nv; i++) {
    for (int j = 0; j < n_in_s; j++) {
      for (int c = 0; c < 2; c++) {
        I(loc.vertex_offset(i) + c, 2 * j + c) = cc.scalar_at_vertices(j, i);
      }
    }
  }
  const int n_e = edge_poly_dim(k);
  for (int ie = 0; ie < loc.ne; ie++) {
    const auto& ec = *cc.edge[ie];
    const Eigen::MatrixXd M = ec.values.topRows(n_e) * ec.quad.weights.asDiagonal() *
                              cc.scalar_on_edge[ie].topRows(n_in_s).transpose();
    for (int i = 0; i < n_e; i++) {
      for (int j = 0; j < n_in_s; j++) {
        for (int c = 0; c < 2; c++) {
          I(loc.edge_offset(ie) + 2 * i + c, 2 * j + c) = M(i, j);
        }
      }
    }
  }
  const int n_cell = 2 * poly_dim(k - 1);
  I.block(loc.cell_offset(), 0, n_cell, n_cell).setIdentity();
  return I;
}

Eigen::VectorXd component_norm_sgrad(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SGrad, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const double hT = cc.cell().diameter;
  Eigen::VectorXd d(loc.dim());
  for (int i = 0; i < loc.nv; i++) {
    d[loc.vertex_offset(i) + 0] = hT * hT;
    d[loc.vertex_offset(i) + 1] = hT * hT * hT * hT;
    d[loc.vertex_offset(i) + 2] = hT * hT * hT * hT;
  }
  const int n_qe = edge_poly_dim(k - 1);
  const int n_gn = edge_poly_dim(k);
  for (int ie = 0; ie < loc.ne; ie++) {
    for (int i = 0; i < n_qe; i++) d[loc.edge_offset(ie) + i] = hT;
    for (int i = 0; i < n_gn; i++) d[loc.edge_offset(ie) + n_qe + i] = hT * hT * hT;
  }
  for (int i = 0; i < loc.per_cell; i++) d[loc.cell_offset() + i] = 1.;
  return d;
}

Eigen::VectorXd component_norm_srot(const CellContext& cc) {
  const int k = cc.k;
  const DofLayout proto = make_layout(Space::SRot, k, *cc.mesh);
  const LocalLayout loc = local_layout(proto, *cc.mesh, cc.t);
  const double hT = cc.cell().diameter;
  Eigen::VectorXd d(loc.dim());
  for (int i = 0; i < loc.nv; i++) {
    d[loc.vertex_offset(i) + 0] = hT * hT;
    d[loc.vertex_offset(i) + 1] = hT * hT;
  }
  for (int ie = 0; ie < loc.ne; ie++) {
    for (int i = 0; i < loc.per_edge; i++) d[loc.edge_offset(ie) + i] = hT;
  }
  for (int i = 0; i < loc.per_cell; i++) d[loc.cell_offset() + i] = 1.;
  return d;
}

LocalProducts local_products(const CellContext& cc) {
  LocalProducts out;

  const Eigen::MatrixXd P = pot_stokes_matrix(cc);
  const Eigen::MatrixXd I_P = interp_stokes_of_poly(cc) * P;
  const Eigen::VectorXd d2 = component_norm_sgrad(cc);
  Eigen::MatrixXd S = -I_P;
  S.diagonal().array() += 1.;
  out.sgrad.product = P.transpose() * P + S.transpose() * d2.asDiagonal() * S;
  out.sgrad.component_norm = d2;

  const Eigen::MatrixXd Pr = pot_rot_matrix(cc);
  const Eigen::MatrixXd I_Pr = interp_srot_of_poly(cc) * Pr;
  const Eigen::VectorXd dr = component_norm_srot(cc);
  Eigen::MatrixXd Sr = -I_Pr;
  Sr.diagonal().array() += 1.;
  out.srot.product = Pr.transpose() * Pr + Sr.transpose() * dr.asDiagonal() * Sr;
  out.srot.component_norm = dr;
  return out;
}

}  // namespace stokesbgg
