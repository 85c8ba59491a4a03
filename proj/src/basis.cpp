#include "stokesbgg/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace stokesbgg {

const std::vector<Eigen::Vector2i>& monomial_powers(int l) {
  static std::mutex mutex;
  static std::map<int, std::vector<Eigen::Vector2i>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(l);
  if (it == cache.end()) {
    std::vector<Eigen::Vector2i> powers;
    for (int d = 0; d <= l; d++) {
      for (int a = d; a >= 0; a--) powers.emplace_back(a, d - a);
    }
    it = cache.emplace(l, std::move(powers)).first;
  }
  return it->second;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const Eigen::VectorXd& w) {
  return A * w.asDiagonal() * B.transpose();
}

Eigen::MatrixXd orthonormalize(Eigen::MatrixXd& values, const Eigen::VectorXd& w) {
  const int n = static_cast<int>(values.rows());
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(n, n);
  for (int pass = 0; pass < 2; pass++) {
    const Eigen::MatrixXd M = gram_matrix(values, values, w);
    if (pass > 0 && (M - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10) {
      break;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("orthonormalize: mass matrix numerically singular");
    }
    const Eigen::MatrixXd Tp =
        llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
    values = Tp * values;
    T = Tp * T;
  }
  return T;
}

Eigen::MatrixXd monomial_values(const Eigen::Vector2d& center, double scale, int degree,
                                const Eigen::Matrix2Xd& pts) {
  const auto& powers = monomial_powers(degree);
  const int npts = static_cast<int>(pts.cols());
  Eigen::MatrixXd V(powers.size(), npts);
  for (int p = 0; p < npts; p++) {
    const double X = (pts(0, p) - center.x()) / scale;
    const double Y = (pts(1, p) - center.y()) / scale;
    for (size_t i = 0; i < powers.size(); i++) {
      V(static_cast<int>(i), p) = std::pow(X, powers[i][0]) * std::pow(Y, powers[i][1]);
    }
  }
  return V;
}

namespace {

void monomial_gradient_values(const Eigen::Vector2d& center, double scale, int degree,
                              const Eigen::Matrix2Xd& pts, Eigen::MatrixXd& gx,
                              Eigen::MatrixXd& gy) {
  const auto& powers = monomial_powers(degree);
  const int npts = static_cast<int>(pts.cols());
  gx.resize(powers.size(), npts);
  gy.resize(powers.size(), npts);
  for (int p = 0; p < npts; p++) {
    const double X = (pts(0, p) - center.x()) / scale;
    const double Y = (pts(1, p) - center.y()) / scale;
    for (size_t i = 0; i < powers.size(); i++) {
      const int a = powers[i][0], b = powers[i][1];
      gx(static_cast<int>(i), p) =
          a == 0 ? 0. : a / scale * std::pow(X, a - 1) * std::pow(Y, b);
      gy(static_cast<int>(i), p) =
          b == 0 ? 0. : b / scale * std::pow(X, a) * std::pow(Y, b - 1);
    }
  }
}

int mono_index(int a, int b) {
  const int d = a + b;
  // graded start + offset within degree block (a descending)
  return d * (d + 1) / 2 + (d - a);
}

}  // namespace

CellScalarBasis::CellScalarBasis(const PolyMesh& mesh, int t, int degree, const QuadRule& rule) {
  const auto& cell = mesh.cells[t];
  center_ = cell.inner_point;
  scale_ = cell.diameter;
  degree_ = degree;
  Eigen::MatrixXd V = monomial_values(center_, scale_, degree, rule.points);
  coef_ = orthonormalize(V, rule.weights);
}

Eigen::MatrixXd CellScalarBasis::values(const Eigen::Matrix2Xd& pts) const {
  return coef_ * monomial_values(center_, scale_, degree_, pts);
}

void CellScalarBasis::gradients(const Eigen::Matrix2Xd& pts, Eigen::MatrixXd& gx,
                                Eigen::MatrixXd& gy) const {
  Eigen::MatrixXd mx, my;
  monomial_gradient_values(center_, scale_, degree_, pts, mx, my);
  gx = coef_ * mx;
  gy = coef_ * my;
}

CellVectorBasis::CellVectorBasis(const PolyMesh& mesh, int t, Kind kind, int degree,
                                 const QuadRule& rule) {
  const auto& cell = mesh.cells[t];
  center_ = cell.inner_point;
  scale_ = cell.diameter;
  kind_ = kind;
  degree_ = degree;
  mono_degree_ = std::max(degree, 0);
  const int n_mono = poly_dim(mono_degree_);
  const int n = kind == Kind::Roly ? roly_dim(degree) : croly_dim(degree);
  coef_x_ = Eigen::MatrixXd::Zero(n, n_mono);
  coef_y_ = Eigen::MatrixXd::Zero(n, n_mono);
  if (kind == Kind::Roly) {
    // generators: rotated gradients of non-constant scaled monomials up to degree+1
    const auto& powers = monomial_powers(degree + 1);
    int row = 0;
    for (size_t i = 1; i < powers.size(); i++, row++) {
      const int a = powers[i][0], b = powers[i][1];
      if (b > 0) coef_x_(row, mono_index(a, b - 1)) = b / scale_;
      if (a > 0) coef_y_(row, mono_index(a - 1, b)) = -a / scale_;
    }
  } else {
    // generators: (x - x_T) m_beta, |beta| <= degree - 1
    const auto& powers = monomial_powers(degree - 1);
    for (size_t i = 0; i < powers.size(); i++) {
      const int a = powers[i][0], b = powers[i][1];
      coef_x_(static_cast<int>(i), mono_index(a + 1, b)) = scale_;
      coef_y_(static_cast<int>(i), mono_index(a, b + 1)) = scale_;
    }
  }
  if (n == 0) return;
  const Eigen::MatrixXd mono = monomial_values(center_, scale_, mono_degree_, rule.points);
  Eigen::MatrixXd vx = coef_x_ * mono;
  Eigen::MatrixXd vy = coef_y_ * mono;
  // stacked-component Gram: orthonormalise in the vector L2 sense
  Eigen::MatrixXd M = gram_matrix(vx, vx, rule.weights) + gram_matrix(vy, vy, rule.weights);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("CellVectorBasis: mass matrix numerically singular");
  }
  Eigen::MatrixXd T = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
  // one refinement pass
  vx = T * vx;
  vy = T * vy;
  const Eigen::MatrixXd M2 =
      gram_matrix(vx, vx, rule.weights) + gram_matrix(vy, vy, rule.weights);
  if ((M2 - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
    Eigen::LLT<Eigen::MatrixXd> llt2(M2);
    T = llt2.matrixL().solve(Eigen::MatrixXd::Identity(n, n)) * T;
  }
  coef_x_ = T * coef_x_;
  coef_y_ = T * coef_y_;
}

void CellVectorBasis::values(const Eigen::Matrix2Xd& pts, Eigen::MatrixXd& vx,
                             Eigen::MatrixXd& vy) const {
  if (dim() == 0) {
    vx.resize(0, pts.cols());
    vy.resize(0, pts.cols());
    return;
  }
  const Eigen::MatrixXd mono = monomial_values(center_, scale_, mono_degree_, pts);
  vx = coef_x_ * mono;
  vy = coef_y_ * mono;
}

int CellVectorBasis::prefix_dim(int l) const {
  return kind_ == Kind::Roly ? roly_dim(std::min(l, degree_)) : croly_dim(std::min(l, degree_));
}

Eigen::MatrixXd CellVectorBasis::divergence_values(const Eigen::Matrix2Xd& pts) const {
  if (dim() == 0) return Eigen::MatrixXd(0, pts.cols());
  Eigen::MatrixXd mx, my;
  monomial_gradient_values(center_, scale_, mono_degree_, pts, mx, my);
  return coef_x_ * mx + coef_y_ * my;
}

EdgeScalarBasis::EdgeScalarBasis(const PolyMesh& mesh, int e, int degree, const QuadRule& rule) {
  const auto& edge = mesh.edges[e];
  mid_ = edge.midpoint;
  tangent_ = edge.tangent;
  length_ = edge.length;
  degree_ = degree;
  const Eigen::VectorXd s = param(rule.points);
  Eigen::MatrixXd V(degree + 1, s.size());
  for (int i = 0; i <= degree; i++) {
    V.row(i) = s.array().pow(i).transpose();
  }
  coef_ = orthonormalize(V, rule.weights);
}

Eigen::VectorXd EdgeScalarBasis::param(const Eigen::Matrix2Xd& pts) const {
  Eigen::VectorXd s(pts.cols());
  for (int p = 0; p < pts.cols(); p++) {
    s[p] = (pts.col(p) - mid_).dot(tangent_) / (0.5 * length_);
  }
  return s;
}

Eigen::MatrixXd EdgeScalarBasis::values(const Eigen::Matrix2Xd& pts) const {
  const Eigen::VectorXd s = param(pts);
  Eigen::MatrixXd V(degree_ + 1, s.size());
  for (int i = 0; i <= degree_; i++) V.row(i) = s.array().pow(i).transpose();
  return coef_ * V;
}

Eigen::MatrixXd EdgeScalarBasis::derivatives(const Eigen::Matrix2Xd& pts) const {
  const Eigen::VectorXd s = param(pts);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(degree_ + 1, s.size());
  for (int i = 1; i <= degree_; i++) {
    D.row(i) = (i / (0.5 * length_)) * s.array().pow(i - 1).transpose();
  }
  return coef_ * D;
}

Eigen::VectorXd EdgeScalarBasis::endpoint_values(int which) const {
  const double s = which == 0 ? -1. : 1.;
  Eigen::VectorXd m(degree_ + 1);
  for (int i = 0; i <= degree_; i++) m[i] = std::pow(s, i);
  return coef_ * m;
}

Eigen::VectorXd EdgeScalarBasis::endpoint_derivatives(int which) const {
  const double s = which == 0 ? -1. : 1.;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(degree_ + 1);
  for (int i = 1; i <= degree_; i++) m[i] = i / (0.5 * length_) * std::pow(s, i - 1);
  return coef_ * m;
}

//------------------------------------------------------------------------------

std::vector<Eigen::MatrixXd> PolySpaceBasis::evaluate(const Eigen::Matrix2Xd& pts) const {
  Eigen::MatrixXd mono;
  if (on_edge) {
    Eigen::VectorXd s(pts.cols());
    for (int p = 0; p < pts.cols(); p++) {
      s[p] = (pts.col(p) - center).dot(edge_tangent) / (0.5 * scale);
    }
    mono.resize(mono_degree + 1, s.size());
    for (int i = 0; i <= mono_degree; i++) mono.row(i) = s.array().pow(i).transpose();
  } else {
    mono = monomial_values(center, scale, mono_degree, pts);
  }
  std::vector<Eigen::MatrixXd> out;
  out.reserve(comp_coef.size());
  for (const auto& c : comp_coef) out.push_back(c * mono);
  return out;
}

namespace {

PolySpaceBasis tensorize(const Eigen::MatrixXd& scalar_coef, ValueKind vk, bool drop_constant) {
  PolySpaceBasis basis;
  const int n0 = static_cast<int>(scalar_coef.rows()) - (drop_constant ? 1 : 0);
  const Eigen::MatrixXd sc = scalar_coef.bottomRows(n0);
  const int n_mono = static_cast<int>(scalar_coef.cols());
  int ncomp = 0;
  std::vector<Eigen::Matrix2d> frames;  // value of each tensor component slot
  switch (vk) {
    case ValueKind::Scalar: ncomp = 1; break;
    case ValueKind::Vector: ncomp = 2; break;
    case ValueKind::Matrix: ncomp = 4; break;
    case ValueKind::SymMatrix: ncomp = 3; break;
  }
  const int stored = vk == ValueKind::Scalar ? 1 : (vk == ValueKind::Vector ? 2 : 4);
  basis.components = stored;
  basis.dim = n0 * ncomp;
  basis.comp_coef.assign(stored, Eigen::MatrixXd::Zero(basis.dim, n_mono));
  const double r = 1. / std::sqrt(2.);
  for (int i = 0; i < n0; i++) {
    for (int m = 0; m < ncomp; m++) {
      const int row = i * ncomp + m;
      if (vk == ValueKind::Scalar) {
        basis.comp_coef[0].row(row) = sc.row(i);
      } else if (vk == ValueKind::Vector) {
        basis.comp_coef[m].row(row) = sc.row(i);
      } else if (vk == ValueKind::Matrix) {
        basis.comp_coef[m].row(row) = sc.row(i);  // row-major slots 00,01,10,11
      } else {
        // symmetric slots: E00, (E01+E10)/sqrt(2), E11
        if (m == 0) basis.comp_coef[0].row(row) = sc.row(i);
        if (m == 1) {
          basis.comp_coef[1].row(row) = r * sc.row(i);
          basis.comp_coef[2].row(row) = r * sc.row(i);
        }
        if (m == 2) basis.comp_coef[3].row(row) = sc.row(i);
      }
    }
  }
  return basis;
}

}  // namespace

PolySpaceBasis cell_basis_for_space(const PolyMesh& mesh, int t, ValueKind vk, SpaceKind sk,
                                    int degree) {
  PolySpaceBasis basis;
  basis.value_kind = vk;
  basis.space_kind = sk;
  basis.degree = degree;
  basis.center = mesh.cells[t].inner_point;
  basis.scale = mesh.cells[t].diameter;
  basis.on_edge = false;

  if (sk == SpaceKind::Roly || sk == SpaceKind::RolyCompl) {
    if (vk != ValueKind::Vector) {
      throw std::invalid_argument("Roly/RolyCompl spaces are vector-valued");
    }
    const int dim = sk == SpaceKind::Roly ? roly_dim(degree) : croly_dim(degree);
    basis.mono_degree = std::max(degree, 0);
    basis.components = 2;
    basis.dim = dim;
    if (dim == 0) {
      basis.comp_coef.assign(2, Eigen::MatrixXd::Zero(0, poly_dim(basis.mono_degree)));
      return basis;
    }
    const QuadRule rule = cell_quadrature(mesh, t, 2 * std::max(degree, 1));
    const CellVectorBasis vb(mesh, t,
                             sk == SpaceKind::Roly ? CellVectorBasis::Kind::Roly
                                                   : CellVectorBasis::Kind::RolyCompl,
                             degree, rule);
    basis.comp_coef = {vb.coef_x(), vb.coef_y()};
    return basis;
  }

  if (degree < 0) {
    basis.mono_degree = 0;
    basis.dim = 0;
    const int stored = vk == ValueKind::Scalar ? 1 : (vk == ValueKind::Vector ? 2 : 4);
    basis.components = stored;
    basis.comp_coef.assign(stored, Eigen::MatrixXd::Zero(0, 1));
    return basis;
  }
  const QuadRule rule = cell_quadrature(mesh, t, 2 * std::max(degree, 1));
  const CellScalarBasis sb(mesh, t, degree, rule);
  PolySpaceBasis out = tensorize(sb.coef(), vk, sk == SpaceKind::ZeroAverage);
  out.value_kind = vk;
  out.space_kind = sk;
  out.degree = degree;
  out.center = basis.center;
  out.scale = basis.scale;
  out.mono_degree = degree;
  out.on_edge = false;
  return out;
}

PolySpaceBasis edge_basis_for_space(const PolyMesh& mesh, int e, ValueKind vk, int degree) {
  if (vk != ValueKind::Scalar && vk != ValueKind::Vector) {
    throw std::invalid_argument("edge bases are scalar or vector valued");
  }
  PolySpaceBasis basis;
  basis.value_kind = vk;
  basis.space_kind = SpaceKind::Full;
  basis.degree = degree;
  basis.center = mesh.edges[e].midpoint;
  basis.scale = mesh.edges[e].length;
  basis.edge_tangent = mesh.edges[e].tangent;
  basis.on_edge = true;
  const int stored = vk == ValueKind::Scalar ? 1 : 2;
  basis.components = stored;
  if (degree < 0) {
    basis.mono_degree = 0;
    basis.dim = 0;
    basis.comp_coef.assign(stored, Eigen::MatrixXd::Zero(0, 1));
    return basis;
  }
  const QuadRule rule = edge_quadrature(mesh, e, 2 * degree);
  const EdgeScalarBasis eb(mesh, e, degree, rule);
  basis.mono_degree = degree;
  const Eigen::MatrixXd& scalar_coef = eb.coef();
  basis.dim = (degree + 1) * stored;
  basis.comp_coef.assign(stored, Eigen::MatrixXd::Zero(basis.dim, degree + 1));
  for (int i = 0; i <= degree; i++) {
    for (int c = 0; c < stored; c++) {
      basis.comp_coef[c].row(i * stored + c) = scalar_coef.row(i);
    }
  }
  return basis;
}

Eigen::VectorXd l2_project(const PolySpaceBasis& basis, const Eigen::MatrixXd& samples,
                           const QuadRule& rule) {
  if (basis.dim == 0) return Eigen::VectorXd();
  const auto values = basis.evaluate(rule.points);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(basis.dim);
  for (size_t c = 0; c < values.size(); c++) {
    coeffs += values[c] * rule.weights.asDiagonal() * samples.row(static_cast<int>(c)).transpose();
  }
  return coeffs;
}

}  // namespace stokesbgg
