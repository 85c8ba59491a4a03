// Reduction/extension cochain maps between the degree-k Stokes complex and
// the lowest-order de Rham complex, the cochain identity audit, and the
// abstract transfer of Poincaré inequalities along such diagrams.

#ifndef STOKESBGG_COCHAIN_HPP
#define STOKESBGG_COCHAIN_HPP

#include "stokesbgg/assembly.hpp"
#include "stokesbgg/spectral.hpp"

namespace stokesbgg {

struct CochainResiduals {
  double red_grad;   // G0 R_grad - R_rot SGRAD
  double red_rot;    // C0 R_rot - pi0 SROT
  double ext_grad;   // SGRAD E_grad - E_rot G0
  double ext_rot;    // SROT E_rot - inj0 C0
  double re_grad;    // R_grad E_grad - Id
  double re_rot;     // R_rot E_rot - Id
  double max() const;
};

CochainResiduals verify_cochain(const MeshContext& mc);

/// Component-norm Grams of the lowest-order spaces (diagonal, h_T-weighted).
GlobalOperator gram_ddr0_grad(const PolyMesh& mesh);
GlobalOperator gram_ddr0_curl(const PolyMesh& mesh);

struct PoincareTransfer {
  double c_hat = 0.;        // Poincaré constant of the reduced complex
  double c_probe = 0.;      // probe estimate of the reduced-image constant
  double norm_e0 = 0., norm_e1 = 0., norm_r1 = 0.;
  double transferred = 0.;  // c_hat |E0| |R1| + c_probe (|E1| |R1| + 1)
  double direct = 0.;       // Poincaré constant of the rich complex
  int probes = 0;
  bool pass = false;        // direct <= transferred
};

/// Generic transfer certificate over a two-row diagram with cochain maps.
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
                                   long seed, int n_probes = 20);

/// The two slices of the diagram on a given mesh.
PoincareTransfer poincare_transfer_grad(const MeshContext& mc, long seed);
PoincareTransfer poincare_transfer_rot(const MeshContext& mc, long seed);

}  // namespace stokesbgg

#endif
