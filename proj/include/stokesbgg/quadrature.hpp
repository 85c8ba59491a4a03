// Quadrature on polygonal cells and straight edges.
//
// Cell rules triangulate the cell as a fan from the inner point x_T and map a
// tensor Gauss rule (collapsed square) onto each sub-triangle; edge rules are
// Gauss-Legendre. Exactness is by construction for the declared degree.

#ifndef STOKESBGG_QUADRATURE_HPP
#define STOKESBGG_QUADRATURE_HPP

#include <Eigen/Core>
#include <vector>

#include "stokesbgg/mesh.hpp"

namespace stokesbgg {

struct QuadRule {
  Eigen::Matrix2Xd points;   // one column per node
  Eigen::VectorXd weights;
  int exactness = 0;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre nodes/weights on [-1, 1], exact to degree 2n-1.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Rule on cell `t`, exact for bivariate polynomials of total degree <= degree.
QuadRule cell_quadrature(const PolyMesh& mesh, int t, int degree);

/// Same for an arbitrary CCW polygon with prescribed fan center.
QuadRule polygon_quadrature(const std::vector<Eigen::Vector2d>& polygon,
                            const Eigen::Vector2d& center, int degree);

/// Rule on edge `e`, exact for univariate polynomials of degree <= degree.
QuadRule edge_quadrature(const PolyMesh& mesh, int e, int degree);

}  // namespace stokesbgg

#endif
