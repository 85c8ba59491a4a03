// Shared helpers for operator tests: field adapters around the polynomial
// oracle, local DOF gathering, and quadrature-based reference projections.

#ifndef STOKESBGG_TESTS_FIXTURES_HPP
#define STOKESBGG_TESTS_FIXTURES_HPP

#include "stokesbgg/context.hpp"
#include "stokesbgg/ddr.hpp"
#include "stokesbgg/spaces.hpp"
#include "support/poly2.hpp"

namespace testsupport {

inline stokesbgg::ScalarField field(const Poly2& p) {
  return [p](const Eigen::Vector2d& x) { return p(x); };
}
inline stokesbgg::VectorField field(const PolyVec2& v) {
  return [v](const Eigen::Vector2d& x) { return v(x); };
}
inline stokesbgg::MatrixField field(const PolyMat2& t) {
  return [t](const Eigen::Vector2d& x) { return t(x); };
}
inline stokesbgg::VectorField grad_field(const Poly2& p) {
  const Poly2 px = p.dx(), py = p.dy();
  return [px, py](const Eigen::Vector2d& x) { return Eigen::Vector2d(px(x), py(x)); };
}
inline stokesbgg::MatrixField grad_field(const PolyVec2& v) {
  const Poly2 xx = v.x.dx(), xy = v.x.dy(), yx = v.y.dx(), yy = v.y.dy();
  return [=](const Eigen::Vector2d& p) {
    Eigen::Matrix2d g;
    g << xx(p), xy(p), yx(p), yy(p);
    return g;
  };
}
inline stokesbgg::MatrixField hess_field(const Poly2& q) {
  const Poly2 xx = q.dx().dx(), xy = q.dx().dy(), yy = q.dy().dy();
  return [=](const Eigen::Vector2d& p) {
    Eigen::Matrix2d h;
    h << xx(p), xy(p), xy(p), yy(p);
    return h;
  };
}

inline Eigen::VectorXd gather(const Eigen::VectorXd& global, const std::vector<int>& dofs) {
  Eigen::VectorXd out(dofs.size());
  for (size_t i = 0; i < dofs.size(); i++) out[static_cast<int>(i)] = global[dofs[i]];
  return out;
}

/// Reference projection of a scalar field onto the first n cell basis functions.
inline Eigen::VectorXd project_cell_scalar(const stokesbgg::CellContext& cc,
                                           const stokesbgg::ScalarField& f, int n) {
  Eigen::VectorXd samples(cc.quad.size());
  for (int p = 0; p < cc.quad.size(); p++) samples[p] = f(cc.quad.points.col(p));
  return cc.sv.topRows(n) * cc.quad.weights.asDiagonal() * samples;
}

/// Interleaved projection of a vector field (slots 2i+c).
inline Eigen::VectorXd project_cell_vector(const stokesbgg::CellContext& cc,
                                           const stokesbgg::VectorField& f, int n) {
  Eigen::MatrixXd samples(2, cc.quad.size());
  for (int p = 0; p < cc.quad.size(); p++) samples.col(p) = f(cc.quad.points.col(p));
  Eigen::VectorXd out(2 * n);
  for (int c = 0; c < 2; c++) {
    const Eigen::VectorXd coeffs =
        cc.sv.topRows(n) * cc.quad.weights.asDiagonal() * samples.row(c).transpose();
    for (int i = 0; i < n; i++) out[2 * i + c] = coeffs[i];
  }
  return out;
}

/// Interleaved projection of a matrix field (slots 4i+s, row-major).
inline Eigen::VectorXd project_cell_matrix(const stokesbgg::CellContext& cc,
                                           const stokesbgg::MatrixField& f, int n) {
  Eigen::MatrixXd samples(4, cc.quad.size());
  for (int p = 0; p < cc.quad.size(); p++) {
    const Eigen::Matrix2d m = f(cc.quad.points.col(p));
    samples.col(p) << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  }
  Eigen::VectorXd out(4 * n);
  for (int s = 0; s < 4; s++) {
    const Eigen::VectorXd coeffs =
        cc.sv.topRows(n) * cc.quad.weights.asDiagonal() * samples.row(s).transpose();
    for (int i = 0; i < n; i++) out[4 * i + s] = coeffs[i];
  }
  return out;
}

/// Interleaved projection of a vector field on an edge (slots 2i+c).
inline Eigen::VectorXd project_edge_vector(const stokesbgg::EdgeContext& ec,
                                           const stokesbgg::VectorField& f, int n) {
  Eigen::MatrixXd samples(2, ec.quad.size());
  for (int p = 0; p < ec.quad.size(); p++) samples.col(p) = f(ec.quad.points.col(p));
  Eigen::VectorXd out(2 * n);
  for (int c = 0; c < 2; c++) {
    const Eigen::VectorXd coeffs =
        ec.values.topRows(n) * ec.quad.weights.asDiagonal() * samples.row(c).transpose();
    for (int i = 0; i < n; i++) out[2 * i + c] = coeffs[i];
  }
  return out;
}

inline Eigen::VectorXd project_edge_scalar(const stokesbgg::EdgeContext& ec,
                                           const stokesbgg::ScalarField& f, int n) {
  Eigen::VectorXd samples(ec.quad.size());
  for (int p = 0; p < ec.quad.size(); p++) samples[p] = f(ec.quad.points.col(p));
  return ec.values.topRows(n) * ec.quad.weights.asDiagonal() * samples;
}

inline double mesh_extent(const stokesbgg::PolyMesh& mesh) {
  double ext = 1.;
  for (const auto& v : mesh.vertices) ext = std::max({ext, std::abs(v.x()), std::abs(v.y())});
  return ext;
}

inline std::vector<stokesbgg::MeshFamily> all_families() {
  using stokesbgg::MeshFamily;
  return {MeshFamily::Cartesian,       MeshFamily::SplitTriangles,
          MeshFamily::DistortedQuads,  MeshFamily::AgglomeratedNonconvex,
          MeshFamily::RingOneHole,     MeshFamily::RingTwoHoles};
}

}  // namespace testsupport

#endif
