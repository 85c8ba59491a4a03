#include "stokesbgg/cochain.hpp"

#include <algorithm>
#include <cstdint>

namespace stokesbgg {

namespace {

double max_abs(const Eigen::SparseMatrix<double>& M) {
  double m = 0.;
  for (int j = 0; j < M.outerSize(); j++) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, j); it; ++it) {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

Eigen::SparseMatrix<double> sparse_identity(int n) {
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  return I;
}

// portable deterministic uniforms for probe generation
struct Xorshift {
  std::uint64_t state;
  explicit Xorshift(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  double uniform() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return 2. * (static_cast<double>(state >> 11) * 0x1.0p-53) - 1.;
  }
};

}  // namespace

double CochainResiduals::max() const {
  return std::max({red_grad, red_rot, ext_grad, ext_rot, re_grad, re_rot});
}

CochainResiduals verify_cochain(const MeshContext& mc) {
  const GlobalOperator sgrad = assemble(Op::SGrad, mc);
  const GlobalOperator srot = assemble(Op::SRot, mc);
  const GlobalOperator g0 = assemble(Op::G0, mc);
  const GlobalOperator c0 = assemble(Op::C0, mc);
  const GlobalOperator pi0 = assemble(Op::Pi0, mc);
  const GlobalOperator inj0 = assemble(Op::Inj0, mc);
  const GlobalOperator rg = assemble(Op::RGrad, mc);
  const GlobalOperator rr = assemble(Op::RRot, mc);
  const GlobalOperator eg = assemble(Op::EGrad, mc);
  const GlobalOperator er = assemble(Op::ERot, mc);

  CochainResiduals out;
  out.red_grad = max_abs(g0.mat * rg.mat - rr.mat * sgrad.mat);
  out.red_rot = max_abs(c0.mat * rr.mat - pi0.mat * srot.mat);
  out.ext_grad = max_abs(sgrad.mat * eg.mat - er.mat * g0.mat);
  out.ext_rot = max_abs(srot.mat * er.mat - inj0.mat * c0.mat);
  out.re_grad = max_abs(rg.mat * eg.mat - sparse_identity(rg.target.dim()));
  out.re_rot = max_abs(rr.mat * er.mat - sparse_identity(rr.target.dim()));
  return out;
}

GlobalOperator gram_ddr0_grad(const PolyMesh& mesh) {
  GlobalOperator op;
  op.source = op.target = make_layout(Space::Ddr0Grad, 0, mesh);
  std::vector<Eigen::Triplet<double>> trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    const double w = mesh.cells[t].diameter * mesh.cells[t].diameter;
    for (int v : mesh.cells[t].vertex_loop) trip.emplace_back(v, v, w);
  }
  op.mat.resize(mesh.n_vertices(), mesh.n_vertices());
  op.mat.setFromTriplets(trip.begin(), trip.end());
  return op;
}

GlobalOperator gram_ddr0_curl(const PolyMesh& mesh) {
  GlobalOperator op;
  op.source = op.target = make_layout(Space::Ddr0Curl, 0, mesh);
  std::vector<Eigen::Triplet<double>> trip;
  for (int t = 0; t < mesh.n_cells(); t++) {
    for (int e : mesh.cells[t].edge_loop) {
      trip.emplace_back(e, e, mesh.cells[t].diameter * mesh.edges[e].length);
    }
  }
  op.mat.resize(mesh.n_edges(), mesh.n_edges());
  op.mat.setFromTriplets(trip.begin(), trip.end());
  return op;
}

PoincareTransfer poincare_transfer(const Eigen::SparseMatrix<double>& D,
                                   const Eigen::SparseMatrix<double>& D_hat,
                                   const Eigen::SparseMatrix<double>& E0,
                                   const Eigen::SparseMatrix<double>& E1,
                                   const Eigen::SparseMatrix<double>& R0,
                                   const Eigen::SparseMatrix<double>& R1,
                                   const Eigen::SparseMatrix<double>& gram0,
                                   const Eigen::SparseMatrix<double>& gram1,
                                   const Eigen::SparseMatrix<double>& gram_hat0,
                                   const Eigen::SparseMatrix<double>& gram_hat1,
                                   long seed, int n_probes) {
  PoincareTransfer out;
  const GsvResult direct = generalized_singular_values(D, gram0, gram1);
  out.direct = 1. / direct.sigma_min;
  out.c_hat = 1. / generalized_singular_values(D_hat, gram_hat0, gram_hat1).sigma_min;
  out.norm_e0 = operator_norm(E0, gram_hat0, gram0);
  out.norm_e1 = operator_norm(E1, gram_hat1, gram1);
  out.norm_r1 = operator_norm(R1, gram1, gram_hat1);

  // probe the reduced-image constant: random directions plus the direction
  // attaining the direct constant
  Xorshift rng(static_cast<std::uint64_t>(seed));
  std::vector<Eigen::VectorXd> probes;
  for (int p = 0; p < n_probes; p++) {
    Eigen::VectorXd x(D.cols());
    for (int i = 0; i < x.size(); i++) x[i] = rng.uniform();
    probes.push_back(x);
  }
  probes.push_back(direct.min_vector);
  out.probes = static_cast<int>(probes.size());

  const Eigen::SparseMatrix<double> ER = E0 * R0;
  for (const auto& x : probes) {
    const Eigen::VectorXd rhs = D * (ER * x - x);
    if (rhs.norm() < 1e-14 * std::max(1., x.norm())) continue;
    const Eigen::VectorXd z = min_norm_solve(D, gram0, rhs);
    const double num = std::sqrt(z.dot(gram0 * z));
    const Eigen::VectorXd dz = D * z;
    const double den = std::sqrt(dz.dot(gram1 * dz));
    if (den > 0.) out.c_probe = std::max(out.c_probe, num / den);
  }

  out.transferred = out.c_hat * out.norm_e0 * out.norm_r1 +
                    out.c_probe * (out.norm_e1 * out.norm_r1 + 1.);
  out.pass = out.direct <= out.transferred * (1. + 1e-9);
  return out;
}

PoincareTransfer poincare_transfer_grad(const MeshContext& mc, long seed) {
  const GlobalOperator D = assemble(Op::SGrad, mc);
  const GlobalOperator D_hat = assemble(Op::G0, mc);
  const GlobalOperator E0 = assemble(Op::EGrad, mc);
  const GlobalOperator E1 = assemble(Op::ERot, mc);
  const GlobalOperator R0 = assemble(Op::RGrad, mc);
  const GlobalOperator R1 = assemble(Op::RRot, mc);
  const GlobalOperator g0 = assemble(Op::GramSGradComp, mc);
  const GlobalOperator g1 = assemble(Op::GramSRotComp, mc);
  const GlobalOperator gh0 = gram_ddr0_grad(mc.mesh());
  const GlobalOperator gh1 = gram_ddr0_curl(mc.mesh());
  return poincare_transfer(D.mat, D_hat.mat, E0.mat, E1.mat, R0.mat, R1.mat, g0.mat, g1.mat,
                           gh0.mat, gh1.mat, seed);
}

PoincareTransfer poincare_transfer_rot(const MeshContext& mc, long seed) {
  // rot slice: D = SROT with the L2 target Gram, reduced D = C0
  const GlobalOperator D = assemble(Op::SRot, mc);
  const GlobalOperator D_hat = assemble(Op::C0, mc);
  const GlobalOperator E1 = assemble(Op::ERot, mc);
  const GlobalOperator R1 = assemble(Op::RRot, mc);
  const GlobalOperator g0 = assemble(Op::GramSRotComp, mc);
  const GlobalOperator gh0 = gram_ddr0_curl(mc.mesh());

  const int n_pk = D.target.dim();
  const int n_p0 = D_hat.target.dim();
  // L2 Grams on the broken targets are identities in the orthonormal bases;
  // the tail maps of the diagram are the projection/injection pair
  const GlobalOperator pi0 = assemble(Op::Pi0, mc);
  const GlobalOperator inj0 = assemble(Op::Inj0, mc);
  Eigen::SparseMatrix<double> I_pk(n_pk, n_pk), I_p0(n_p0, n_p0);
  I_pk.setIdentity();
  I_p0.setIdentity();
  return poincare_transfer(D.mat, D_hat.mat, E1.mat, inj0.mat, R1.mat, pi0.mat, g0.mat, I_pk,
                           gh0.mat, I_p0, seed);
}

}  // namespace stokesbgg
