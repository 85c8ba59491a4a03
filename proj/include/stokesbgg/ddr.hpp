// Tensorised discrete de Rham operators of degree k+1: edge/element gradients
// on the vector gradient space, element rot on the tensor space, the skew map,
// interpolators, and the lowest-order (vertex/edge) de Rham complex.

#ifndef STOKESBGG_DDR_HPP
#define STOKESBGG_DDR_HPP

#include <Eigen/Sparse>
#include <functional>

#include "stokesbgg/context.hpp"

namespace stokesbgg {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;
using MatrixField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

// -- local operators ----------------------------------------------------------

/// Edge gradient: [v_a(2), v_b(2), v_E(2(k+1))] -> P^{k+1}(E)^2 coefficients.
Eigen::MatrixXd ddr_edge_gradient_matrix(const EdgeContext& ec, const PolyMesh& mesh, int k);

/// Element gradient: X_Srot cell-local vector -> P^k(T)^{2x2} coefficients.
Eigen::MatrixXd ddr_element_gradient_matrix(const CellContext& cc);

/// Element rot: X_ddr_rot cell-local vector -> P^{k+1}(T)^2 coefficients.
Eigen::MatrixXd ddr_element_rot_matrix(const CellContext& cc);

/// Skew part of the element component: cell block of X_ddr_rot -> P^k(T).
Eigen::MatrixXd sskw_matrix(int k);

// -- interpolators ------------------------------------------------------------

Eigen::VectorXd interpolate_ddr_grad(const MeshContext& mc, const VectorField& v);
Eigen::VectorXd interpolate_ddr_rot(const MeshContext& mc, const MatrixField& tau);

// -- lowest-order complex -----------------------------------------------------

struct Ddr0Ops {
  Eigen::SparseMatrix<double> grad;  // vertex values -> per-edge values
  Eigen::SparseMatrix<double> curl;  // per-edge values -> per-cell values
};

Ddr0Ops ddr0_ops(const PolyMesh& mesh);
Eigen::VectorXd interpolate_ddr0_grad(const PolyMesh& mesh, const ScalarField& q);
Eigen::VectorXd interpolate_ddr0_curl(const PolyMesh& mesh, const VectorField& v);

/// Vector potential of the lowest-order complex on one cell:
/// per-edge tangential values on the cell boundary -> P^0(T)^2 coefficients.
Eigen::MatrixXd gamma0_matrix(const CellContext& cc);

}  // namespace stokesbgg

#endif
