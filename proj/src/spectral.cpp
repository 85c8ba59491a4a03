#include "stokesbgg/spectral.hpp"

#include <stdexcept>

namespace stokesbgg {

namespace {

void check_size(const Eigen::SparseMatrix<double>& M) {
  if (M.rows() > kDenseLimit || M.cols() > kDenseLimit) {
    throw std::runtime_error("spectral: matrix beyond the desk-scale dense limit");
  }
}

int rank_cut(const Eigen::VectorXd& sv, double rel_tol) {
  if (sv.size() == 0 || sv[0] == 0.) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); i++) {
    if (sv[i] > rel_tol * sv[0]) r++;
  }
  return r;
}

}  // namespace

RankResult numerical_rank(const Eigen::SparseMatrix<double>& M, double rel_tol) {
  check_size(M);
  RankResult out;
  if (M.rows() == 0 || M.cols() == 0) {
    out.certified = true;
    out.gap = std::numeric_limits<double>::infinity();
    return out;
  }
  const Eigen::MatrixXd dense(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
  out.singular_values = svd.singularValues();
  out.rank = rank_cut(out.singular_values, rel_tol);
  if (out.rank == out.singular_values.size() ||
      out.singular_values[out.rank] == 0.) {
    out.gap = std::numeric_limits<double>::infinity();
  } else if (out.rank == 0) {
    out.gap = out.singular_values[0] == 0. ? std::numeric_limits<double>::infinity() : 0.;
  } else {
    out.gap = out.singular_values[out.rank - 1] / out.singular_values[out.rank];
  }
  out.certified = out.gap >= 1e3;
  return out;
}

Eigen::MatrixXd nullspace_basis(const Eigen::SparseMatrix<double>& M, double rel_tol) {
  check_size(M);
  const Eigen::MatrixXd dense(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeFullV);
  const int r = rank_cut(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(M.cols() - r);
}

GsvResult generalized_singular_values(const Eigen::SparseMatrix<double>& D,
                                      const Eigen::SparseMatrix<double>& gram_src,
                                      const Eigen::SparseMatrix<double>& gram_tgt,
                                      double rel_tol) {
  check_size(D);
  const Eigen::MatrixXd Ms(gram_src);
  const Eigen::MatrixXd Mt(gram_tgt);
  Eigen::LLT<Eigen::MatrixXd> llt_s(Ms);
  Eigen::LLT<Eigen::MatrixXd> llt_t(Mt);
  if (llt_s.info() != Eigen::Success || llt_t.info() != Eigen::Success) {
    throw std::runtime_error("generalized_singular_values: Gram not positive definite");
  }
  // B = L_t^T D L_s^{-T}
  const Eigen::MatrixXd Lt = llt_t.matrixL();
  Eigen::MatrixXd B = Lt.transpose() * Eigen::MatrixXd(D);
  llt_s.matrixL().transpose().solveInPlace<Eigen::OnTheRight>(B);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  GsvResult out;
  out.rank = rank_cut(sv, rel_tol);
  if (out.rank == 0) {
    throw std::runtime_error("generalized_singular_values: zero operator");
  }
  out.sigma_max = sv[0];
  out.sigma_min = sv[out.rank - 1];
  // back to source coordinates: x = L_s^{-T} y
  Eigen::VectorXd y = svd.matrixV().col(out.rank - 1);
  out.min_vector = llt_s.matrixL().transpose().solve(y);
  return out;
}

double poincare_constant(const Eigen::SparseMatrix<double>& D,
                         const Eigen::SparseMatrix<double>& gram_src,
                         const Eigen::SparseMatrix<double>& gram_tgt) {
  return 1. / generalized_singular_values(D, gram_src, gram_tgt).sigma_min;
}

double operator_norm(const Eigen::SparseMatrix<double>& D,
                     const Eigen::SparseMatrix<double>& gram_src,
                     const Eigen::SparseMatrix<double>& gram_tgt) {
  return generalized_singular_values(D, gram_src, gram_tgt).sigma_max;
}

Eigen::VectorXd min_norm_solve(const Eigen::SparseMatrix<double>& D,
                               const Eigen::SparseMatrix<double>& gram_src,
                               const Eigen::VectorXd& rhs) {
  check_size(D);
  const Eigen::MatrixXd Ms(gram_src);
  Eigen::LLT<Eigen::MatrixXd> llt_s(Ms);
  // minimise |L_s^T z| subject to D z = rhs: z = L_s^{-T} y, y = pinv(D L_s^{-T}) rhs
  Eigen::MatrixXd B(D);
  llt_s.matrixL().transpose().solveInPlace<Eigen::OnTheRight>(B);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const Eigen::VectorXd y = svd.solve(rhs);
  const double resid = (B * y - rhs).norm();
  if (resid > 1e-8 * std::max(1., rhs.norm())) {
    throw std::runtime_error("min_norm_solve: right-hand side not in the range");
  }
  return llt_s.matrixL().transpose().solve(y);
}

}  // namespace stokesbgg
