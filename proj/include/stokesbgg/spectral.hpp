// Dense spectral computations at desk scale: certified numerical ranks,
// generalized singular values against SPD Grams, nullspace bases, and
// minimum-norm solves. Sparse inputs are densified; sizes beyond the desk
// threshold are refused rather than approximated.

#ifndef STOKESBGG_SPECTRAL_HPP
#define STOKESBGG_SPECTRAL_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace stokesbgg {

inline constexpr int kDenseLimit = 20000;

struct RankResult {
  int rank = 0;
  double gap = 0.;        // sigma_rank / sigma_{rank+1}
  bool certified = false;  // gap >= 1e3
  Eigen::VectorXd singular_values;
};

RankResult numerical_rank(const Eigen::SparseMatrix<double>& M, double rel_tol = 1e-10);

/// Orthonormal basis of the kernel (columns), using the same rank cut.
Eigen::MatrixXd nullspace_basis(const Eigen::SparseMatrix<double>& M, double rel_tol = 1e-10);

/// Smallest nonzero and largest generalized singular values of D with SPD
/// Grams on source and target; vectors are reported in source coordinates.
struct GsvResult {
  double sigma_min = 0.;  // smallest nonzero
  double sigma_max = 0.;
  int rank = 0;
  Eigen::VectorXd min_vector;  // attains sigma_min
};

GsvResult generalized_singular_values(const Eigen::SparseMatrix<double>& D,
                                      const Eigen::SparseMatrix<double>& gram_src,
                                      const Eigen::SparseMatrix<double>& gram_tgt,
                                      double rel_tol = 1e-10);

/// 1 / (smallest nonzero generalized singular value).
double poincare_constant(const Eigen::SparseMatrix<double>& D,
                         const Eigen::SparseMatrix<double>& gram_src,
                         const Eigen::SparseMatrix<double>& gram_tgt);

/// Generalized spectral norm sup ||D x||_tgt / ||x||_src.
double operator_norm(const Eigen::SparseMatrix<double>& D,
                     const Eigen::SparseMatrix<double>& gram_src,
                     const Eigen::SparseMatrix<double>& gram_tgt);

/// Minimum-(source-Gram)-norm solution of D z = rhs; rhs must be in the range
/// (checked to a relative tolerance, throws otherwise).
Eigen::VectorXd min_norm_solve(const Eigen::SparseMatrix<double>& D,
                               const Eigen::SparseMatrix<double>& gram_src,
                               const Eigen::VectorXd& rhs);

}  // namespace stokesbgg

#endif
