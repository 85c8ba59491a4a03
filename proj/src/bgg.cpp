#include "stokesbgg/bgg.hpp"

#include <sstream>

namespace stokesbgg {

Eigen::MatrixXd hess_local(const CellContext& cc) {
  const int k = cc.k;
  const PolyMesh& mesh = *cc.mesh;
  const Eigen::MatrixXd G = sgrad_matrix(cc);  // X_Sgrad|_T -> X_Srot|_T
  const DofLayout rot_proto = make_layout(Space::SRot, k, mesh);
  const DofLayout drot_proto = make_layout(Space::DdrRot, k, mesh);
  const LocalLayout mid = local_layout(rot_proto, mesh, cc.t);
  const LocalLayout dst = local_layout(drot_proto, mesh, cc.t);

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dst.dim(), G.cols());
  // edge rows: the edge gradient consumes the edge closure of the mid vector
  for (int ie = 0; ie < mid.ne; ie++) {
    const auto& edge = cc.loop_edge(ie);
    const Eigen::MatrixXd B = ddr_edge_gradient_matrix(*cc.edge[ie], mesh, k);
    const bool along = edge.a == cc.cell().vertex_loop[ie];
    const int tail_loop = along ? ie : (ie + 1) % mid.nv;
    const int head_loop = along ? (ie + 1) % mid.nv : ie;
    Eigen::MatrixXd mid_rows(B.cols(), G.cols());
    mid_rows.topRows(2) = G.middleRows(mid.vertex_offset(tail_loop), 2);
    mid_rows.middleRows(2, 2) = G.middleRows(mid.vertex_offset(head_loop), 2);
    mid_rows.bottomRows(mid.per_edge) = G.middleRows(mid.edge_offset(ie), mid.per_edge);
    H.middleRows(dst.edge_offset(ie), dst.per_edge) = B * mid_rows;
  }
  H.bottomRows(dst.per_cell) = ddr_element_gradient_matrix(cc) * G;
  return H;
}

double verify_anticommutativity(const MeshContext& mc) {
  const GlobalOperator sskw = assemble(Op::Sskw, mc);
  const GlobalOperator tgrad = assemble(Op::TGrad, mc);
  const GlobalOperator srot = assemble(Op::SRot, mc);
  const Eigen::SparseMatrix<double> resid = sskw.mat * tgrad.mat + srot.mat;
  return resid.coeffs().size() ? Eigen::MatrixXd(resid).cwiseAbs().maxCoeff() : 0.;
}

namespace {

std::string certify_note(const RankResult& r) {
  std::ostringstream s;
  s << "gap " << r.gap;
  return s.str();
}

}  // namespace

VerificationReport cohomology_report(const MeshContext& mc, double rank_tol) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();
  const auto [b0, b1] = betti_numbers(mesh);

  VerificationReport report;
  report.k = k;

  const GlobalOperator sgrad = assemble(Op::SGrad, mc);
  const GlobalOperator srot = assemble(Op::SRot, mc);
  const RankResult r_sgrad = numerical_rank(sgrad.mat, rank_tol);
  const RankResult r_srot = numerical_rank(srot.mat, rank_tol);

  const auto add_dim = [&](const std::string& name, long measured, long expected,
                           bool certified, const std::string& note) {
    report.add_status(name, static_cast<double>(measured), static_cast<double>(expected),
                      !certified ? "uncertified"
                                 : (measured == expected ? "pass" : "fail"),
                      note);
  };

  add_dim("ds_h0", sgrad.source.dim() - r_sgrad.rank, b0, r_sgrad.certified,
          certify_note(r_sgrad));
  add_dim("ds_h1", (srot.source.dim() - r_srot.rank) - r_sgrad.rank, b1,
          r_sgrad.certified && r_srot.certified, certify_note(r_srot));
  add_dim("ds_h2", srot.target.dim() - r_srot.rank, 0, r_srot.certified, certify_note(r_srot));

  const GlobalOperator hess = assemble(Op::Hess, mc);
  const GlobalOperator trot_sym = assemble(Op::TRotSym, mc);
  const RankResult r_hess = numerical_rank(hess.mat, rank_tol);
  const RankResult r_tsym = numerical_rank(trot_sym.mat, rank_tol);

  add_dim("dh_kernel", hess.source.dim() - r_hess.rank, 3 * b0, r_hess.certified,
          certify_note(r_hess));
  add_dim("dh_h1", (trot_sym.source.dim() - r_tsym.rank) - r_hess.rank, 3 * b1,
          r_hess.certified && r_tsym.certified, certify_note(r_tsym));
  add_dim("dh_tail_surjective", trot_sym.target.dim() - r_tsym.rank, 0, r_tsym.certified,
          certify_note(r_tsym));

  const TwistedOperators tw = twisted_operators(mc);
  const RankResult r_a0 = numerical_rank(tw.A0, rank_tol);
  const RankResult r_a1 = numerical_rank(tw.A1, rank_tol);
  add_dim("twisted_h0", tw.dim0 - r_a0.rank, 3 * b0, r_a0.certified, certify_note(r_a0));
  add_dim("twisted_h1", (tw.dim1 - r_a1.rank) - r_a0.rank, 3 * b1,
          r_a0.certified && r_a1.certified, certify_note(r_a1));
  add_dim("twisted_h2", tw.dim2 - r_a1.rank, 0, r_a1.certified, certify_note(r_a1));

  // alternating-sum identity, exact integer arithmetic
  const long alt = static_cast<long>(hess.source.dim()) - trot_sym.source.dim() +
                   trot_sym.target.dim();
  const long euler = 3L * (mesh.n_vertices() - mesh.n_edges() + mesh.n_cells());
  add_dim("euler_alternating_sum", alt, euler, true, "integer identity");

  return report;
}

DofCounts ds_counts(int k, int slot) {
  switch (slot) {
    case 0: return {3, 2 * k + 1, static_cast<long>(k - 1) * k / 2};
    case 1: return {2, 2 * (k + 1), static_cast<long>(k) * (k + 1)};
    default: return {0, 0, static_cast<long>(k + 1) * (k + 2) / 2};
  }
}

DofCounts fn_counts(int k, int slot) {
  switch (slot) {
    case 0: return {6, 2 * k - 5, static_cast<long>(k - 3) * (k - 2) / 2};
    case 1: return {6, 2 * (k - 2), static_cast<long>(k - 1) * k};
    default: return {1, 0, static_cast<long>(k + 1) * (k + 2) / 2 - 3};
  }
}

DofCounts dh_counts(int k, int slot) {
  switch (slot) {
    case 0: return ds_counts(k, 0);
    case 1: return {0, 2 * k + 4, 3L * (k + 1) * (k + 2) / 2};
    default: return {0, 0, static_cast<long>(k + 2) * (k + 3)};
  }
}

DofCounts hz_counts(int k, int slot) {
  switch (slot) {
    case 0: return {6, 2 * k - 1, static_cast<long>(k - 1) * k / 2};
    case 1: return {3, 2 * k + 2, 3L * (k + 1) * (k + 2) / 2};
    default: return {0, 0, static_cast<long>(k + 2) * (k + 3)};
  }
}

VerificationReport dof_table_report(int k_max) {
  const PolyMesh tri = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  VerificationReport report;
  report.mesh = "single_triangle";
  report.k = k_max;

  for (int k = 0; k <= k_max; k++) {
    const DofLayout sg = make_layout(Space::SGrad, k, tri);
    const DofLayout sr = make_layout(Space::SRot, k, tri);
    const DofLayout pk = make_layout(Space::Broken, k, tri);
    const DofLayout sym = make_layout(Space::DdrRotSym, k, tri);
    const DofLayout pk1v = make_layout(Space::BrokenVec, k + 1, tri);

    const auto check = [&](const std::string& name, long formula, long layout) {
      report.add_pass_fail(name, static_cast<double>(layout), static_cast<double>(formula), 0.);
    };
    const std::string kk = "k" + std::to_string(k);
    check("ds_" + kk + "_head_total", ds_counts(k, 0).total(), sg.dim());
    check("ds_" + kk + "_head_per_vertex", ds_counts(k, 0).per_vertex, sg.per_vertex);
    check("ds_" + kk + "_head_per_edge", ds_counts(k, 0).per_edge, sg.per_edge);
    check("ds_" + kk + "_head_interior", ds_counts(k, 0).interior, sg.per_cell);
    check("ds_" + kk + "_mid_total", ds_counts(k, 1).total(), sr.dim());
    check("ds_" + kk + "_tail_total", ds_counts(k, 2).total(), pk.dim());
    check("dh_" + kk + "_mid_total", dh_counts(k, 1).total(), sym.dim());
    check("dh_" + kk + "_tail_total", dh_counts(k, 2).total(), pk1v.dim());
  }
  // reference values quoted for the lowest orders
  report.add_pass_fail("ds0_totals_12_12_1",
                       ds_counts(0, 0).total() * 10000 + ds_counts(0, 1).total() * 100 +
                           ds_counts(0, 2).total(),
                       120000 + 1200 + 1, 0.);
  report.add_pass_fail("dh1_totals_12_15_6",
                       dh_counts(0, 0).total() * 10000 + dh_counts(0, 1).total() * 100 +
                           dh_counts(0, 2).total(),
                       120000 + 1500 + 6, 0.);
  report.add_pass_fail("fn3_totals_21_30_10",
                       fn_counts(3, 0).total() * 10000 + fn_counts(3, 1).total() * 100 +
                           fn_counts(3, 2).total(),
                       210000 + 3000 + 10, 0.);
  return report;
}

std::string dof_table_markdown(int k_max) {
  std::ostringstream out;
  out << "Per-triangle DOF counts (total / per vertex / per edge / interior)\n\n";
  const auto row = [&](const std::string& name, DofCounts c) {
    out << "| " << name << " | " << c.total() << " | " << c.per_vertex << " | " << c.per_edge
        << " | " << c.interior << " |\n";
  };
  out << "| space | total | per vertex | per edge | interior |\n|---|---|---|---|---|\n";
  for (int k = 0; k <= k_max; k++) {
    const std::string kk = std::to_string(k);
    row("DS(" + kk + ") head", ds_counts(k, 0));
    row("DS(" + kk + ") middle", ds_counts(k, 1));
    row("DS(" + kk + ") tail", ds_counts(k, 2));
    row("DH(" + kk + "+1) head", dh_counts(k, 0));
    row("DH(" + kk + "+1) middle", dh_counts(k, 1));
    row("DH(" + kk + "+1) tail", dh_counts(k, 2));
    if (k >= 3) {
      row("FN(" + kk + ") head", fn_counts(k, 0));
      row("FN(" + kk + ") middle", fn_counts(k, 1));
      row("FN(" + kk + ") tail", fn_counts(k, 2));
    }
    if (k >= 1) {
      row("HZ(" + kk + "+1) head", hz_counts(k, 0));
      row("HZ(" + kk + "+1) middle", hz_counts(k, 1));
      row("HZ(" + kk + "+1) tail", hz_counts(k, 2));
    }
  }
  return out.str();
}

}  // namespace stokesbgg
