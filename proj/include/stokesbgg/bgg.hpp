// Outputs of the discrete diagram: the Hessian operator and complex, the
// twisted complex, anti-commutativity audits, cohomology dimension checks
// against Betti numbers, and the per-triangle DOF count formulas.

#ifndef STOKESBGG_BGG_HPP
#define STOKESBGG_BGG_HPP

#include "stokesbgg/assembly.hpp"
#include "stokesbgg/report.hpp"
#include "stokesbgg/spectral.hpp"

namespace stokesbgg {

/// Cell-local Hessian: X_Sgrad|_T -> X_ddr_rot|_T through the identity
/// relabelling of the middle space.
Eigen::MatrixXd hess_local(const CellContext& cc);

/// Max-entry of sskw_h . tGRAD_h + SROT_h (zero for an anti-commutative diagram).
double verify_anticommutativity(const MeshContext& mc);

/// Cohomology dimension audit: discrete Stokes, Hessian and twisted complexes
/// against the Betti-number predictions, with certified ranks.
VerificationReport cohomology_report(const MeshContext& mc, double rank_tol = 1e-10);

struct DofCounts {
  long per_vertex = 0;
  long per_edge = 0;
  long interior = 0;
  long total() const { return 3 * per_vertex + 3 * per_edge + interior; }
};

// closed-form per-triangle counts, slot 0/1/2 along each complex
DofCounts ds_counts(int k, int slot);
DofCounts fn_counts(int k, int slot);   // valid for k >= 3
DofCounts dh_counts(int k, int slot);   // the DH(k+1) complex
DofCounts hz_counts(int k, int slot);   // the HZ(k+1) complex, k >= 1

/// Formula-vs-layout audit on a single triangle for k = 0..k_max.
VerificationReport dof_table_report(int k_max);
std::string dof_table_markdown(int k_max);

}  // namespace stokesbgg

#endif
