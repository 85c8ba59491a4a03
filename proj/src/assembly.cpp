#include "stokesbgg/assembly.hpp"

#include <stdexcept>

namespace stokesbgg {

std::string to_string(Op op) {
  switch (op) {
    case Op::SGrad: return "SGRAD";
    case Op::TGrad: return "tGRAD";
    case Op::SRot: return "SROT";
    case Op::TRot: return "tROT";
    case Op::Sskw: return "sskw";
    case Op::Hess: return "Hess";
    case Op::SymEmbed: return "sym_embed";
    case Op::TRotSym: return "tROT_sym";
    case Op::G0: return "G0";
    case Op::C0: return "C0";
    case Op::Pi0: return "pi0";
    case Op::RGrad: return "R_grad";
    case Op::RRot: return "R_rot";
    case Op::EGrad: return "E_grad";
    case Op::ERot: return "E_rot";
    case Op::Inj0: return "inj0";
    case Op::GramSGradComp: return "gram_sgrad_comp";
    case Op::GramSRotComp: return "gram_srot_comp";
    case Op::GramSGradProd: return "gram_sgrad_prod";
    case Op::GramSRotProd: return "gram_srot_prod";
  }
  return "?";
}

Op op_from_string(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(Op::GramSRotProd); i++) {
    if (to_string(static_cast<Op>(i)) == name) return static_cast<Op>(i);
  }
  throw std::invalid_argument("unknown operator tag: " + name);
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(Triplets& out, const Eigen::MatrixXd& local, const std::vector<int>& rows,
             const std::vector<int>& cols) {
  for (int i = 0; i < local.rows(); i++) {
    for (int j = 0; j < local.cols(); j++) {
      if (local(i, j) != 0.) out.emplace_back(rows[i], cols[j], local(i, j));
    }
  }
}

std::vector<int> block_indices(int offset, int n) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; i++) idx[i] = offset + i;
  return idx;
}

GlobalOperator make(const DofLayout& src, const DofLayout& dst, const Triplets& trip) {
  GlobalOperator op;
  op.source = src;
  op.target = dst;
  op.mat.resize(dst.dim(), src.dim());
  op.mat.setFromTriplets(trip.begin(), trip.end());
  return op;
}

GlobalOperator assemble_sgrad(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::SGrad, k, mesh);
  const DofLayout dst = make_layout(Space::SRot, k, mesh);
  Triplets trip;
  for (int v = 0; v < mesh.n_vertices(); v++) {
    trip.emplace_back(dst.vertex_offset(v) + 0, src.vertex_offset(v) + 1, 1.);
    trip.emplace_back(dst.vertex_offset(v) + 1, src.vertex_offset(v) + 2, 1.);
  }
  const int n_qe = edge_poly_dim(k - 1);
  const int n_gn = edge_poly_dim(k);
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& edge = mesh.edges[e];
    const Eigen::MatrixXd T = stokes_tangential_gradient_matrix(mc.edge(e), k);
    // columns of T: [q_a, q_b, q_E]; spread onto t_E, add the normal part
    for (int j = 0; j < n_gn; j++) {
      for (int c = 0; c < 2; c++) {
        const int row = dst.edge_offset(e) + 2 * j + c;
        trip.emplace_back(row, src.vertex_offset(edge.a), edge.tangent[c] * T(j, 0));
        trip.emplace_back(row, src.vertex_offset(edge.b), edge.tangent[c] * T(j, 1));
        for (int i = 0; i < n_qe; i++) {
          trip.emplace_back(row, src.edge_offset(e) + i, edge.tangent[c] * T(j, 2 + i));
        }
        trip.emplace_back(row, src.edge_offset(e) + n_qe + j, edge.normal[c]);
      }
    }
  }
  for (int t = 0; t < mesh.n_cells(); t++) {
    const CellContext cc = mc.cell(t);
    const Eigen::MatrixXd G = stokes_element_gradient_matrix(cc);
    if (G.rows() == 0) continue;
    scatter(trip, G, block_indices(dst.cell_offset(t), static_cast<int>(G.rows())),
            cell_dofs(src, mesh, t));
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_tgrad(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::SRot, k, mesh);
  const DofLayout dst = make_layout(Space::DdrRot, k, mesh);
  Triplets trip;
  for (int e = 0; e < mesh.n_edges(); e++) {
    const Eigen::MatrixXd B = ddr_edge_gradient_matrix(mc.edge(e), mesh, k);
    scatter(trip, B, block_indices(dst.edge_offset(e), static_cast<int>(B.rows())),
            edge_dofs(src, mesh, e));
  }
  for (int t = 0; t < mesh.n_cells(); t++) {
    const CellContext cc = mc.cell(t);
    const Eigen::MatrixXd G = ddr_element_gradient_matrix(cc);
    scatter(trip, G, block_indices(dst.cell_offset(t), static_cast<int>(G.rows())),
            cell_dofs(src, mesh, t));
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_srot(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::SRot, k, mesh);
  const DofLayout dst = make_layout(Space::Broken, k, mesh);
  Triplets trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    const CellContext cc = mc.cell(t);
    scatter(trip, srot_matrix(cc), block_indices(dst.cell_offset(t), dst.per_cell),
            cell_dofs(src, mesh, t));
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_trot(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::DdrRot, k, mesh);
  const DofLayout dst = make_layout(Space::BrokenVec, k + 1, mesh);
  Triplets trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    const CellContext cc = mc.cell(t);
    scatter(trip, ddr_element_rot_matrix(cc), block_indices(dst.cell_offset(t), dst.per_cell),
            cell_dofs(src, mesh, t));
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_sskw(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::DdrRot, k, mesh);
  const DofLayout dst = make_layout(Space::Broken, k, mesh);
  const Eigen::MatrixXd S = sskw_matrix(k);
  Triplets trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    scatter(trip, S, block_indices(dst.cell_offset(t), dst.per_cell),
            block_indices(src.cell_offset(t), src.per_cell));
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_sym_embed(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::DdrRotSym, k, mesh);
  const DofLayout dst = make_layout(Space::DdrRot, k, mesh);
  Triplets trip;
  const double r = 1. / std::sqrt(2.);
  for (int e = 0; e < mesh.n_edges(); e++) {
    for (int i = 0; i < src.per_edge; i++) {
      trip.emplace_back(dst.edge_offset(e) + i, src.edge_offset(e) + i, 1.);
    }
  }
  for (int t = 0; t < mesh.n_cells(); t++) {
    for (int i = 0; i < poly_dim(k); i++) {
      trip.emplace_back(dst.cell_offset(t) + 4 * i + 0, src.cell_offset(t) + 3 * i + 0, 1.);
      trip.emplace_back(dst.cell_offset(t) + 4 * i + 1, src.cell_offset(t) + 3 * i + 1, r);
      trip.emplace_back(dst.cell_offset(t) + 4 * i + 2, src.cell_offset(t) + 3 * i + 1, r);
      trip.emplace_back(dst.cell_offset(t) + 4 * i + 3, src.cell_offset(t) + 3 * i + 2, 1.);
    }
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_g0(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const DofLayout src = make_layout(Space::Ddr0Grad, 0, mesh);
  const DofLayout dst = make_layout(Space::Ddr0Curl, 0, mesh);
  Triplets trip;
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& edge = mesh.edges[e];
    trip.emplace_back(e, edge.a, -1. / edge.length);
    trip.emplace_back(e, edge.b, 1. / edge.length);
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_c0(const MeshContext& mc) {
  // into P^0(T_h) coefficients: the constant value scales by sqrt(|T|)
  const PolyMesh& mesh = mc.mesh();
  const DofLayout src = make_layout(Space::Ddr0Curl, 0, mesh);
  const DofLayout dst = make_layout(Space::Broken, 0, mesh);
  Triplets trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    const auto& cell = mesh.cells[t];
    for (size_t i = 0; i < cell.edge_loop.size(); i++) {
      const auto& edge = mesh.edges[cell.edge_loop[i]];
      trip.emplace_back(dst.cell_offset(t), cell.edge_loop[i],
                        -cell.edge_sign[i] * edge.length / std::sqrt(cell.area));
    }
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_pi0(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::Broken, k, mesh);
  const DofLayout dst = make_layout(Space::Broken, 0, mesh);
  Triplets trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    trip.emplace_back(dst.cell_offset(t), src.cell_offset(t), 1.);
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_inj0(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::Broken, 0, mesh);
  const DofLayout dst = make_layout(Space::Broken, k, mesh);
  Triplets trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    trip.emplace_back(dst.cell_offset(t), src.cell_offset(t), 1.);
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_rgrad(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::SGrad, k, mesh);
  const DofLayout dst = make_layout(Space::Ddr0Grad, 0, mesh);
  Triplets trip;
  for (int v = 0; v < mesh.n_vertices(); v++) {
    trip.emplace_back(v, src.vertex_offset(v), 1.);
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_rrot(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::SRot, k, mesh);
  const DofLayout dst = make_layout(Space::Ddr0Curl, 0, mesh);
  Triplets trip;
  const int n = edge_poly_dim(k);
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& ec = mc.edge(e);
    const auto& edge = mesh.edges[e];
    const Eigen::VectorXd avg = ec.values.topRows(n) * ec.quad.weights / edge.length;
    for (int i = 0; i < n; i++) {
      for (int c = 0; c < 2; c++) {
        trip.emplace_back(e, src.edge_offset(e) + 2 * i + c, edge.tangent[c] * avg[i]);
      }
    }
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_egrad(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::Ddr0Grad, 0, mesh);
  const DofLayout dst = make_layout(Space::SGrad, k, mesh);
  Triplets trip;
  for (int v = 0; v < mesh.n_vertices(); v++) {
    trip.emplace_back(dst.vertex_offset(v), v, 1.);
  }

  const int n_qe = edge_poly_dim(k - 1);
  // per-edge extension blocks over (q_a, q_b), reused by the cell stage
  std::vector<Eigen::MatrixXd> edge_blocks(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& ec = mc.edge(e);
    const auto& edge = mesh.edges[e];
    Eigen::MatrixXd block(n_qe, 2);
    if (n_qe > 0) {
      // moments against derivatives of the k-degree tests, constants excluded
      Eigen::MatrixXd M(n_qe, n_qe);
      Eigen::MatrixXd rhs(n_qe, 2);
      const Eigen::VectorXd ints = ec.values.topRows(k + 1) * ec.quad.weights;
      for (int j = 1; j <= n_qe; j++) {
        M.row(j - 1) = (ec.values.topRows(n_qe) * ec.quad.weights.asDiagonal() *
                        ec.derivs.row(j).transpose())
                           .transpose();
        // -int G0 r + sum omega q_V r(x_V) over (q_a, q_b)
        rhs(j - 1, 0) = ints[j] / edge.length - ec.end_values[0][j];
        rhs(j - 1, 1) = -ints[j] / edge.length + ec.end_values[1][j];
      }
      block = Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(rhs);
      for (int i = 0; i < n_qe; i++) {
        trip.emplace_back(dst.edge_offset(e) + i, edge.a, block(i, 0));
        trip.emplace_back(dst.edge_offset(e) + i, edge.b, block(i, 1));
      }
    }
    edge_blocks[e] = block;
  }

  const int n_cell = poly_dim(k - 2);
  if (n_cell > 0) {
    for (int t = 0; t < mesh.n_cells(); t++) {
      const CellContext cc = mc.cell(t);
      const auto& cell = mesh.cells[t];
      const int ne = cc.n_loop_edges();
      const int nv = static_cast<int>(cell.vertex_loop.size());

      // map cell vertex values to per-loop-edge lowest-order gradients
      Eigen::MatrixXd G0_loc = Eigen::MatrixXd::Zero(ne, nv);
      for (int ie = 0; ie < ne; ie++) {
        const auto& edge = mesh.edges[cell.edge_loop[ie]];
        for (int lv = 0; lv < nv; lv++) {
          if (cell.vertex_loop[lv] == edge.a) G0_loc(ie, lv) = -1. / edge.length;
          if (cell.vertex_loop[lv] == edge.b) G0_loc(ie, lv) = 1. / edge.length;
        }
      }
      const Eigen::MatrixXd gamma = gamma0_matrix(cc) * G0_loc;  // P^0(T)^2 coeffs over q_V

      const int n_croly = croly_dim(k - 1);
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_croly, nv);
      for (int m = 0; m < n_croly; m++) {
        // -int gamma0 . w_m
        const double gx = cc.croly_x.row(m)
                              .cwiseProduct(cc.sv.row(0))
                              .cwiseProduct(cc.quad.weights.transpose())
                              .sum();
        const double gy = cc.croly_y.row(m)
                              .cwiseProduct(cc.sv.row(0))
                              .cwiseProduct(cc.quad.weights.transpose())
                              .sum();
        rhs.row(m) -= gx * gamma.row(0) + gy * gamma.row(1);
      }
      for (int ie = 0; ie < ne; ie++) {
        const auto& ec = *cc.edge[ie];
        const auto& edge = cc.loop_edge(ie);
        const Eigen::Vector2d nrm = edge.normal;
        const Eigen::MatrixXd wn = nrm.x() * cc.croly_on_edge_x[ie].topRows(n_croly) +
                                   nrm.y() * cc.croly_on_edge_y[ie].topRows(n_croly);
        const Eigen::MatrixXd M =
            wn * ec.quad.weights.asDiagonal() * ec.values.topRows(n_qe).transpose();
        // spread the per-edge block of this edge onto (q_a, q_b)
        Eigen::MatrixXd per_vertex = Eigen::MatrixXd::Zero(n_croly, nv);
        const Eigen::MatrixXd ME = cc.omega(ie) * M * edge_blocks[cell.edge_loop[ie]];
        for (int lv = 0; lv < nv; lv++) {
          if (cell.vertex_loop[lv] == edge.a) per_vertex.col(lv) += ME.col(0);
          if (cell.vertex_loop[lv] == edge.b) per_vertex.col(lv) += ME.col(1);
        }
        rhs += per_vertex;
      }
      // divergence-moment system at degree k-2
      const Eigen::MatrixXd D = cc.croly_div.topRows(n_croly) * cc.quad.weights.asDiagonal() *
                                cc.sv.topRows(n_cell).transpose();
      const Eigen::MatrixXd block = Eigen::PartialPivLU<Eigen::MatrixXd>(D).solve(rhs);
      std::vector<int> cols(nv);
      for (int lv = 0; lv < nv; lv++) cols[lv] = cell.vertex_loop[lv];
      scatter(trip, block, block_indices(dst.cell_offset(t), n_cell), cols);
    }
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_erot(const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout src = make_layout(Space::Ddr0Curl, 0, mesh);
  const DofLayout dst = make_layout(Space::SRot, k, mesh);
  Triplets trip;
  for (int e = 0; e < mesh.n_edges(); e++) {
    const auto& edge = mesh.edges[e];
    const double c0 = std::sqrt(edge.length);  // coefficient of the constant edge function
    trip.emplace_back(dst.edge_offset(e) + 0, e, c0 * edge.tangent.x());
    trip.emplace_back(dst.edge_offset(e) + 1, e, c0 * edge.tangent.y());
  }
  const int n_cell = poly_dim(k - 1);
  if (n_cell > 0) {
    for (int t = 0; t < mesh.n_cells(); t++) {
      const CellContext cc = mc.cell(t);
      const auto& cell = mesh.cells[t];
      const int ne = cc.n_loop_edges();
      const int n_tests = poly_dim(k) - 1;
      const int n_croly = croly_dim(k - 1);
      const Eigen::MatrixXd gamma = gamma0_matrix(cc);  // over loop-edge values

      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_tests + n_croly, ne);
      for (int ie = 0; ie < ne; ie++) {
        // int_E v_E psi_j: constant v_E = 1 on this edge
        for (int j = 1; j <= n_tests; j++) {
          rhs(j - 1, ie) = cc.omega(ie) * cc.scalar_on_edge[ie].row(j).dot(cc.edge[ie]->quad.weights);
        }
      }
      for (int m = 0; m < n_croly; m++) {
        const double gx = cc.croly_x.row(m)
                              .cwiseProduct(cc.sv.row(0))
                              .cwiseProduct(cc.quad.weights.transpose())
                              .sum();
        const double gy = cc.croly_y.row(m)
                              .cwiseProduct(cc.sv.row(0))
                              .cwiseProduct(cc.quad.weights.transpose())
                              .sum();
        rhs.row(n_tests + m) = gx * gamma.row(0) + gy * gamma.row(1);
      }

      // mixed rot system at degree k-1
      const int n = poly_dim(k - 1);
      Eigen::MatrixXd L(n_tests + n_croly, 2 * n);
      for (int j = 1; j <= n_tests; j++) {
        for (int i = 0; i < n; i++) {
          L(j - 1, 2 * i + 0) = cc.sv.row(i)
                                    .cwiseProduct(cc.sgy.row(j))
                                    .cwiseProduct(cc.quad.weights.transpose())
                                    .sum();
          L(j - 1, 2 * i + 1) = -cc.sv.row(i)
                                     .cwiseProduct(cc.sgx.row(j))
                                     .cwiseProduct(cc.quad.weights.transpose())
                                     .sum();
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
      const Eigen::MatrixXd block = Eigen::PartialPivLU<Eigen::MatrixXd>(L).solve(rhs);
      std::vector<int> cols(ne);
      for (int ie = 0; ie < ne; ie++) cols[ie] = cell.edge_loop[ie];
      scatter(trip, block, block_indices(dst.cell_offset(t), 2 * n), cols);
    }
  }
  return make(src, dst, trip);
}

GlobalOperator assemble_gram_comp(const MeshContext& mc, Space space) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout layout = make_layout(space, k, mesh);
  Triplets trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    const CellContext cc = mc.cell(t);
    const Eigen::VectorXd d =
        space == Space::SGrad ? component_norm_sgrad(cc) : component_norm_srot(cc);
    const auto dofs = cell_dofs(layout, mesh, t);
    for (size_t i = 0; i < dofs.size(); i++) {
      trip.emplace_back(dofs[i], dofs[i], d[static_cast<int>(i)]);
    }
  }
  return make(layout, layout, trip);
}

GlobalOperator assemble_gram_prod(const MeshContext& mc, Space space) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const DofLayout layout = make_layout(space, k, mesh);
  Triplets trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    const CellContext cc = mc.cell(t);
    const LocalProducts lp = local_products(cc);
    const Eigen::MatrixXd& M = space == Space::SGrad ? lp.sgrad.product : lp.srot.product;
    const auto dofs = cell_dofs(layout, mesh, t);
    scatter(trip, M, dofs, dofs);
  }
  return make(layout, layout, trip);
}

GlobalOperator compose(const GlobalOperator& a, const GlobalOperator& b) {
  GlobalOperator out;
  out.source = b.source;
  out.target = a.target;
  out.mat = a.mat * b.mat;
  return out;
}

}  // namespace

GlobalOperator assemble(Op op, const MeshContext& mc) {
  switch (op) {
    case Op::SGrad: return assemble_sgrad(mc);
    case Op::TGrad: return assemble_tgrad(mc);
    case Op::SRot: return assemble_srot(mc);
    case Op::TRot: return assemble_trot(mc);
    case Op::Sskw: return assemble_sskw(mc);
    case Op::Hess: return compose(assemble_tgrad(mc), assemble_sgrad(mc));
    case Op::SymEmbed: return assemble_sym_embed(mc);
    case Op::TRotSym: return compose(assemble_trot(mc), assemble_sym_embed(mc));
    case Op::G0: return assemble_g0(mc);
    case Op::C0: return assemble_c0(mc);
    case Op::Pi0: return assemble_pi0(mc);
    case Op::RGrad: return assemble_rgrad(mc);
    case Op::RRot: return assemble_rrot(mc);
    case Op::EGrad: return assemble_egrad(mc);
    case Op::ERot: return assemble_erot(mc);
    case Op::Inj0: return assemble_inj0(mc);
    case Op::GramSGradComp: return assemble_gram_comp(mc, Space::SGrad);
    case Op::GramSRotComp: return assemble_gram_comp(mc, Space::SRot);
    case Op::GramSGradProd: return assemble_gram_prod(mc, Space::SGrad);
    case Op::GramSRotProd: return assemble_gram_prod(mc, Space::SRot);
  }
  throw std::invalid_argument("assemble: unknown op tag");
}

TwistedOperators twisted_operators(const MeshContext& mc) {
  const GlobalOperator sgrad = assemble(Op::SGrad, mc);
  const GlobalOperator tgrad = assemble(Op::TGrad, mc);
  const GlobalOperator srot = assemble(Op::SRot, mc);
  const GlobalOperator trot = assemble(Op::TRot, mc);
  const GlobalOperator sskw = assemble(Op::Sskw, mc);

  TwistedOperators out;
  const int n_sgrad = sgrad.source.dim();
  const int n_srot = sgrad.target.dim();
  const int n_drot = tgrad.target.dim();
  const int n_pk = srot.target.dim();
  const int n_pk1 = trot.target.dim();
  out.dim0 = n_sgrad + n_srot;
  out.dim1 = n_srot + n_drot;
  out.dim2 = n_pk + n_pk1;

  std::vector<Eigen::Triplet<double>> t0, t1;
  for (int j = 0; j < sgrad.mat.outerSize(); j++) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sgrad.mat, j); it; ++it) {
      t0.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < n_srot; i++) t0.emplace_back(i, n_sgrad + i, -1.);  // -Id
  for (int j = 0; j < tgrad.mat.outerSize(); j++) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(tgrad.mat, j); it; ++it) {
      t0.emplace_back(n_srot + it.row(), n_sgrad + it.col(), it.value());
    }
  }
  out.A0.resize(out.dim1, out.dim0);
  out.A0.setFromTriplets(t0.begin(), t0.end());

  for (int j = 0; j < srot.mat.outerSize(); j++) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(srot.mat, j); it; ++it) {
      t1.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int j = 0; j < sskw.mat.outerSize(); j++) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sskw.mat, j); it; ++it) {
      t1.emplace_back(it.row(), n_srot + it.col(), -it.value());
    }
  }
  for (int j = 0; j < trot.mat.outerSize(); j++) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(trot.mat, j); it; ++it) {
      t1.emplace_back(n_pk + it.row(), n_srot + it.col(), it.value());
    }
  }
  out.A1.resize(out.dim2, out.dim1);
  out.A1.setFromTriplets(t1.begin(), t1.end());
  return out;
}

}  // namespace stokesbgg
