// Potential reconstructions on the discrete Stokes spaces: consistent
// liftings, the vector potential of the rot operator, boundary traces, the
// scalar potentials of degree k+1 and k+3, the tensorised potential on the
// rot space, and the stabilised local scalar products.
//
// Every reconstruction is a dense matrix acting on cell-local DOF vectors.

#ifndef STOKESBGG_POTENTIALS_HPP
#define STOKESBGG_POTENTIALS_HPP

#include "stokesbgg/context.hpp"
#include "stokesbgg/ddr.hpp"
#include "stokesbgg/stokes.hpp"

namespace stokesbgg {

/// Consistent lifting of the middle-space data to P^k(T)^2: matches the cell
/// moments and minimises the h_E^{-1}-weighted edge misfit against the full
/// vector edge data. Identity on interpolates of P^k(T)^2 fields.
Eigen::MatrixXd lifting_matrix(const CellContext& cc);

/// Choice of the complement-moment source in the rot potential: the
/// consistent lifting (default) or plain inclusion of the cell component
/// (diagnostic; the curl-image projection of the result is unaffected).
enum class RotLifting { Consistent, CellInclusion };

/// Vector potential associated with the scalar rot: X_Srot|_T -> P^k(T)^2.
Eigen::MatrixXd pot_rot_matrix(const CellContext& cc,
                               RotLifting choice = RotLifting::Consistent);

/// Boundary trace: X_Sgrad|_T -> stacked per-edge P^{k+1}(E) coefficients,
/// matching the edge moments and vertex values (loop edge order).
Eigen::MatrixXd trace_matrix(const CellContext& cc);

/// Scalar potential: X_Sgrad|_T -> P^{k+1}(T) coefficients.
Eigen::MatrixXd pot_stokes_matrix(const CellContext& cc);

/// Componentwise potential of degree k+2 on the middle space:
/// X_Srot|_T -> P^{k+2}(T)^2 coefficients (interleaved).
Eigen::MatrixXd pot_grad_kp2_matrix(const CellContext& cc);

/// Row-wise tensor potential on the tensor rot space:
/// X_ddr_rot|_T -> P^{k+1}(T)^{2x2} coefficients (slots 4i+s).
Eigen::MatrixXd pot_rot_tensor_matrix(const CellContext& cc);

/// Higher-order trace matching edge moments, vertex values and vertex
/// tangential derivatives: stacked per-edge P^{k+3}(E) coefficients.
Eigen::MatrixXd trace_kp3_matrix(const CellContext& cc);

/// Higher-order scalar potential: X_Sgrad|_T -> P^{k+3}(T) coefficients.
Eigen::MatrixXd pot_stokes_kp3_matrix(const CellContext& cc);

/// Interpolation of a polynomial given by coefficients: P^{k+1}(T) -> X_Sgrad|_T
/// and P^k(T)^2 -> X_Srot|_T. Used by the stabilisation forms.
Eigen::MatrixXd interp_stokes_of_poly(const CellContext& cc);
Eigen::MatrixXd interp_srot_of_poly(const CellContext& cc);

/// Component-norm Gram diagonals of the L2-like norms on both spaces.
Eigen::VectorXd component_norm_sgrad(const CellContext& cc);
Eigen::VectorXd component_norm_srot(const CellContext& cc);

struct LocalInnerProduct {
  Eigen::MatrixXd product;         // potential part + stabilisation
  Eigen::VectorXd component_norm;  // diagonal Gram of the component norm
};

struct LocalProducts {
  LocalInnerProduct sgrad;
  LocalInnerProduct srot;
};

LocalProducts local_products(const CellContext& cc);

}  // namespace stokesbgg

#endif
