// Polynomial bases on cells and edges.
//
// All bases are L2-orthonormalised scaled monomials ((x-x_T)/h_T)^alpha,
// graded by total degree: the orthonormalisation transform is kept lower
// triangular, so the first dim P^l functions of a degree-L basis form an
// orthonormal basis of P^l for every l <= L. Vector/matrix/symmetric-matrix
// spaces tensorise a scalar basis with component interleaving, which keeps
// the same prefix property.

#ifndef STOKESBGG_BASIS_HPP
#define STOKESBGG_BASIS_HPP

#include <Eigen/Dense>
#include <vector>

#include "stokesbgg/mesh.hpp"
#include "stokesbgg/quadrature.hpp"

namespace stokesbgg {

inline int poly_dim(int l) { return l < 0 ? 0 : (l + 1) * (l + 2) / 2; }
inline int edge_poly_dim(int l) { return l < 0 ? 0 : l + 1; }
inline int roly_dim(int l) { return l < 0 ? 0 : poly_dim(l + 1) - 1; }
inline int croly_dim(int l) { return poly_dim(l - 1); }

/// Exponent pairs of total degree <= l, graded then lexicographic.
const std::vector<Eigen::Vector2i>& monomial_powers(int l);

/// A diag(w) B^T for value matrices sampled at common quadrature points.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const Eigen::VectorXd& w);

/// Lower-triangular transform T with (T V) diag(w) (T V)^T = Id; V is replaced
/// by T V. One extra pass is applied when the first Gram deviates from the
/// identity by more than 1e-10.
Eigen::MatrixXd orthonormalize(Eigen::MatrixXd& values, const Eigen::VectorXd& w);

//------------------------------------------------------------------------------

/// Orthonormal scalar basis on a cell.
class CellScalarBasis {
public:
  CellScalarBasis() = default;
  CellScalarBasis(const PolyMesh& mesh, int t, int degree, const QuadRule& rule);

  int dim() const { return static_cast<int>(coef_.rows()); }
  int degree() const { return degree_; }

  Eigen::MatrixXd values(const Eigen::Matrix2Xd& pts) const;
  void gradients(const Eigen::Matrix2Xd& pts, Eigen::MatrixXd& gx, Eigen::MatrixXd& gy) const;

  const Eigen::Vector2d& center() const { return center_; }
  double scale() const { return scale_; }
  const Eigen::MatrixXd& coef() const { return coef_; }

private:
  Eigen::Vector2d center_;
  double scale_ = 1.;
  int degree_ = -1;
  Eigen::MatrixXd coef_;  // basis functions over scaled monomials
};

Eigen::MatrixXd monomial_values(const Eigen::Vector2d& center, double scale, int degree,
                                const Eigen::Matrix2Xd& pts);

/// Orthonormal vector-valued basis on a cell stored componentwise over scaled
/// monomials; used for the curl-image space Roly^l and its Koszul complement.
class CellVectorBasis {
public:
  enum class Kind { Roly, RolyCompl };
  CellVectorBasis() = default;
  CellVectorBasis(const PolyMesh& mesh, int t, Kind kind, int degree, const QuadRule& rule);

  int dim() const { return static_cast<int>(coef_x_.rows()); }
  void values(const Eigen::Matrix2Xd& pts, Eigen::MatrixXd& vx, Eigen::MatrixXd& vy) const;
  Eigen::MatrixXd divergence_values(const Eigen::Matrix2Xd& pts) const;

  /// Sub-basis of the same kind and lower degree (graded prefix).
  int prefix_dim(int l) const;

  const Eigen::MatrixXd& coef_x() const { return coef_x_; }
  const Eigen::MatrixXd& coef_y() const { return coef_y_; }
  int mono_degree() const { return mono_degree_; }

private:
  Eigen::Vector2d center_;
  double scale_ = 1.;
  Kind kind_ = Kind::Roly;
  int degree_ = -1;
  int mono_degree_ = -1;
  Eigen::MatrixXd coef_x_, coef_y_;  // components over scaled monomials
};

/// Orthonormal scalar basis on an edge over powers of the arclength coordinate
/// s in [-1, 1].
class EdgeScalarBasis {
public:
  EdgeScalarBasis() = default;
  EdgeScalarBasis(const PolyMesh& mesh, int e, int degree, const QuadRule& rule);

  int dim() const { return static_cast<int>(coef_.rows()); }
  int degree() const { return degree_; }

  Eigen::MatrixXd values(const Eigen::Matrix2Xd& pts) const;
  /// Derivative along the edge tangent, per unit physical arclength.
  Eigen::MatrixXd derivatives(const Eigen::Matrix2Xd& pts) const;
  /// Values/derivatives at an endpoint (0: tail of the tangent, 1: head).
  Eigen::VectorXd endpoint_values(int which) const;
  Eigen::VectorXd endpoint_derivatives(int which) const;
  const Eigen::MatrixXd& coef() const { return coef_; }

private:
  Eigen::VectorXd param(const Eigen::Matrix2Xd& pts) const;
  Eigen::Vector2d mid_, tangent_;
  double length_ = 0.;
  int degree_ = -1;
  Eigen::MatrixXd coef_;
};

//------------------------------------------------------------------------------
// Generic basis surface: one factory covering every (entity, value kind,
// space kind, degree) combination, with componentwise evaluation.

enum class ValueKind { Scalar, Vector, Matrix, SymMatrix };
enum class SpaceKind { Full, ZeroAverage, Roly, RolyCompl };

struct PolySpaceBasis {
  ValueKind value_kind;
  SpaceKind space_kind;
  int degree;
  int dim;
  int components;  // 1 (scalar), 2 (vector), 4 (matrix, row-major; sym stored full)
  /// comp[c]: (dim x npts) values of component c at the given points
  std::vector<Eigen::MatrixXd> evaluate(const Eigen::Matrix2Xd& pts) const;

  // internal representation over scaled scalar monomials
  Eigen::Vector2d center;
  double scale;
  int mono_degree;
  std::vector<Eigen::MatrixXd> comp_coef;
  bool on_edge = false;
  Eigen::Vector2d edge_tangent;  // set when on_edge
};

PolySpaceBasis cell_basis_for_space(const PolyMesh& mesh, int t, ValueKind vk, SpaceKind sk,
                                    int degree);
PolySpaceBasis edge_basis_for_space(const PolyMesh& mesh, int e, ValueKind vk, int degree);

/// Coefficients of the L2 projection of samples onto an orthonormal basis.
/// `samples` holds one row per component, sampled at the rule points.
Eigen::VectorXd l2_project(const PolySpaceBasis& basis, const Eigen::MatrixXd& samples,
                           const QuadRule& rule);

}  // namespace stokesbgg

#endif
