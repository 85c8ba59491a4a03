// Discrete Stokes complex of degree k: the scalar head space with vertex
// values/gradients, edge moments and normal derivatives, its interpolator,
// the full discrete gradient into the vector space, and the scalar rot.

#ifndef STOKESBGG_STOKES_HPP
#define STOKESBGG_STOKES_HPP

#include "stokesbgg/context.hpp"
#include "stokesbgg/ddr.hpp"

namespace stokesbgg {

/// Tangential gradient on an edge: [q_a, q_b, q_E(k)] -> P^k(E) coefficients.
Eigen::MatrixXd stokes_tangential_gradient_matrix(const EdgeContext& ec, int k);

/// Element gradient: X_Sgrad cell-local vector -> P^{k-1}(T)^2 coefficients.
Eigen::MatrixXd stokes_element_gradient_matrix(const CellContext& cc);

/// Full discrete gradient on one cell: X_Sgrad|_T -> X_Srot|_T.
Eigen::MatrixXd sgrad_matrix(const CellContext& cc);

/// Scalar rot on one cell: X_Srot|_T -> P^k(T) coefficients.
Eigen::MatrixXd srot_matrix(const CellContext& cc);

/// Interpolator onto the head space; needs the function and its gradient.
Eigen::VectorXd interpolate_stokes(const MeshContext& mc, const ScalarField& q,
                                   const VectorField& grad_q);

}  // namespace stokesbgg

#endif
