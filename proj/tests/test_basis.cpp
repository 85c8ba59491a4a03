#include <doctest.h>

#include "stokesbgg/basis.hpp"
#include "stokesbgg/context.hpp"
#include "support/poly2.hpp"

using namespace stokesbgg;

namespace {

PolyMesh one_cell(const std::vector<Eigen::Vector2d>& poly) {
  std::vector<int> loop(poly.size());
  for (size_t i = 0; i < poly.size(); i++) loop[i] = static_cast<int>(i);
  return build_mesh(poly, {loop});
}

PolyMesh pentagon() {
  return one_cell({{0, 0}, {1.1, -0.1}, {1.4, 0.8}, {0.6, 1.2}, {-0.2, 0.7}});
}

}  // namespace

TEST_CASE("space dimensions") {
  CHECK(poly_dim(-1) == 0);
  CHECK(poly_dim(0) == 1);
  CHECK(poly_dim(3) == 10);
  CHECK(edge_poly_dim(-1) == 0);
  CHECK(edge_poly_dim(2) == 3);
  for (int l = 0; l <= 5; l++) {
    CHECK(roly_dim(l) == (l + 2) * (l + 3) / 2 - 1);
    CHECK(croly_dim(l) == l * (l + 1) / 2);
    CHECK(roly_dim(l) + croly_dim(l) == (l + 1) * (l + 2));
  }
}

TEST_CASE("orthonormality of every constructed basis") {
  const PolyMesh mesh = pentagon();
  const QuadRule rule = cell_quadrature(mesh, 0, 16);

  const CellScalarBasis sb(mesh, 0, 8, rule);
  const Eigen::MatrixXd V = sb.values(rule.points);
  const Eigen::MatrixXd G = gram_matrix(V, V, rule.weights);
  CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-10);

  for (auto kind : {CellVectorBasis::Kind::Roly, CellVectorBasis::Kind::RolyCompl}) {
    const CellVectorBasis vb(mesh, 0, kind, 4, rule);
    Eigen::MatrixXd vx, vy;
    vb.values(rule.points, vx, vy);
    const Eigen::MatrixXd Gv =
        gram_matrix(vx, vx, rule.weights) + gram_matrix(vy, vy, rule.weights);
    CHECK((Gv - Eigen::MatrixXd::Identity(Gv.rows(), Gv.cols())).cwiseAbs().maxCoeff() < 1e-10);
  }

  const QuadRule erule = edge_quadrature(mesh, 0, 16);
  const EdgeScalarBasis eb(mesh, 0, 7, erule);
  const Eigen::MatrixXd Ve = eb.values(erule.points);
  const Eigen::MatrixXd Ge = gram_matrix(Ve, Ve, erule.weights);
  CHECK((Ge - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("roly basis spans curls and croly the complement") {
  const PolyMesh mesh = pentagon();
  const QuadRule rule = cell_quadrature(mesh, 0, 12);
  const int l = 3;
  const CellVectorBasis roly(mesh, 0, CellVectorBasis::Kind::Roly, l, rule);
  const CellVectorBasis croly(mesh, 0, CellVectorBasis::Kind::RolyCompl, l, rule);
  CHECK(roly.dim() == roly_dim(l));
  CHECK(croly.dim() == croly_dim(l));

  // stacked values have full rank 2*dim P^l
  Eigen::MatrixXd rx, ry, cx, cy;
  roly.values(rule.points, rx, ry);
  croly.values(rule.points, cx, cy);
  Eigen::MatrixXd stacked(roly.dim() + croly.dim(), 2 * rule.size());
  stacked << rx, ry, cx, cy;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  CHECK(svd.singularValues().minCoeff() > 1e-8);

  // roly functions are curls: zero divergence (checked against projections)
  // via the defining property: constants are curls of affine functions
  const CellVectorBasis roly0(mesh, 0, CellVectorBasis::Kind::Roly, 0, rule);
  CHECK(roly0.dim() == 2);
}

TEST_CASE("croly^1 is spanned by x - x_T") {
  const PolyMesh mesh = pentagon();
  const QuadRule rule = cell_quadrature(mesh, 0, 8);
  const CellVectorBasis croly(mesh, 0, CellVectorBasis::Kind::RolyCompl, 1, rule);
  REQUIRE(croly.dim() == 1);
  Eigen::MatrixXd cx, cy;
  croly.values(rule.points, cx, cy);
  const Eigen::Vector2d xT = mesh.cells[0].inner_point;
  for (int p = 0; p < rule.size(); p += 7) {
    const Eigen::Vector2d d = rule.points.col(p) - xT;
    const Eigen::Vector2d v(cx(0, p), cy(0, p));
    // parallel vectors
    CHECK(std::abs(d.x() * v.y() - d.y() * v.x()) < 1e-12);
  }
}

TEST_CASE("l2 projection reproduces members and best-fits outsiders") {
  const PolyMesh mesh = pentagon();
  testsupport::Rng rng(3);

  // member reproduction, pointwise
  const auto basis = cell_basis_for_space(mesh, 0, ValueKind::Scalar, SpaceKind::Full, 3);
  const testsupport::Poly2 f = testsupport::random_poly(rng, 3);
  const QuadRule rule = cell_quadrature(mesh, 0, 10);
  Eigen::MatrixXd samples(1, rule.size());
  for (int p = 0; p < rule.size(); p++) samples(0, p) = f(rule.points.col(p));
  const Eigen::VectorXd coef = l2_project(basis, samples, rule);
  const auto vals = basis.evaluate(rule.points);
  for (int p = 0; p < rule.size(); p += 11) {
    const double got = (coef.transpose() * vals[0].col(p))(0);
    CHECK(got == doctest::Approx(f(rule.points.col(p))).epsilon(1e-11));
  }

  // projection of x^3 on P^1 of the unit edge [0,1]: normal-equations oracle
  const PolyMesh square = one_cell({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto ebasis = edge_basis_for_space(square, 0, ValueKind::Scalar, 1);
  const QuadRule erule = edge_quadrature(square, 0, 8);
  Eigen::MatrixXd es(1, erule.size());
  for (int p = 0; p < erule.size(); p++) es(0, p) = std::pow(erule.points(0, p), 3);
  const Eigen::VectorXd ecoef = l2_project(ebasis, es, erule);
  // oracle: minimize ∫ (x^3 - a x - b)^2 over [0,1] by dense normal equations
  Eigen::Matrix2d N;
  N << 1., 1. / 2, 1. / 2, 1. / 3;
  Eigen::Vector2d rhs(1. / 4, 1. / 5);
  const Eigen::Vector2d ab = N.ldlt().solve(rhs);  // (b, a)
  CHECK(ab[1] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(ab[0] == doctest::Approx(-0.2).epsilon(1e-12));
  const auto evals = ebasis.evaluate(erule.points);
  for (int p = 0; p < erule.size(); p++) {
    const double got = (ecoef.transpose() * evals[0].col(p))(0);
    const double expect = ab[1] * erule.points(0, p) + ab[0];
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  }

  // degenerate target
  const auto empty = cell_basis_for_space(mesh, 0, ValueKind::Scalar, SpaceKind::Full, -1);
  CHECK(l2_project(empty, Eigen::MatrixXd::Zero(1, rule.size()), rule).size() == 0);
}

TEST_CASE("roly projector: idempotence, orthogonality, least-squares oracle") {
  const PolyMesh mesh = pentagon();
  const int l = 2;
  const QuadRule rule = cell_quadrature(mesh, 0, 12);
  const auto roly = cell_basis_for_space(mesh, 0, ValueKind::Vector, SpaceKind::Roly, l);
  const auto full = cell_basis_for_space(mesh, 0, ValueKind::Vector, SpaceKind::Full, l);

  testsupport::Rng rng(11);
  const testsupport::PolyVec2 v = testsupport::random_poly_vec(rng, l);
  Eigen::MatrixXd samples(2, rule.size());
  for (int p = 0; p < rule.size(); p++) samples.col(p) = v(rule.points.col(p));

  const Eigen::VectorXd proj = l2_project(roly, samples, rule);

  // dense least-squares oracle over roly values
  const auto rvals = roly.evaluate(rule.points);
  Eigen::MatrixXd A(roly.dim, roly.dim);
  Eigen::VectorXd b(roly.dim);
  for (int i = 0; i < roly.dim; i++) {
    for (int j = 0; j < roly.dim; j++) {
      A(i, j) = (rvals[0].row(i).cwiseProduct(rvals[0].row(j)) +
                 rvals[1].row(i).cwiseProduct(rvals[1].row(j)))
                    .cwiseProduct(rule.weights.transpose())
                    .sum();
    }
    b[i] = (rvals[0].row(i).cwiseProduct(samples.row(0)) +
            rvals[1].row(i).cwiseProduct(samples.row(1)))
               .cwiseProduct(rule.weights.transpose())
               .sum();
  }
  const Eigen::VectorXd oracle = A.ldlt().solve(b);
  CHECK((proj - oracle).cwiseAbs().maxCoeff() < 1e-11);

  // idempotence: re-projecting the projection is stable
  Eigen::MatrixXd proj_samples = Eigen::MatrixXd::Zero(2, rule.size());
  for (int c = 0; c < 2; c++) proj_samples.row(c) = proj.transpose() * rvals[c];
  const Eigen::VectorXd twice = l2_project(roly, proj_samples, rule);
  CHECK((twice - proj).cwiseAbs().maxCoeff() < 1e-11);

  // residual orthogonal to the roly space
  Eigen::MatrixXd resid = samples - proj_samples;
  for (int i = 0; i < roly.dim; i++) {
    const double dot = (rvals[0].row(i).cwiseProduct(resid.row(0)) +
                        rvals[1].row(i).cwiseProduct(resid.row(1)))
                           .cwiseProduct(rule.weights.transpose())
                           .sum();
    CHECK(std::abs(dot) < 1e-11);
  }
  (void)full;
}

TEST_CASE("tensor-valued bases") {
  const PolyMesh mesh = pentagon();
  for (int l : {0, 2}) {
    const auto mat = cell_basis_for_space(mesh, 0, ValueKind::Matrix, SpaceKind::Full, l);
    const auto sym = cell_basis_for_space(mesh, 0, ValueKind::SymMatrix, SpaceKind::Full, l);
    CHECK(mat.dim == 4 * poly_dim(l));
    CHECK(sym.dim == 3 * poly_dim(l));
    // sym basis is orthonormal in the Frobenius L2 sense
    const QuadRule rule = cell_quadrature(mesh, 0, 2 * std::max(l, 1));
    const auto vals = sym.evaluate(rule.points);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(sym.dim, sym.dim);
    for (const auto& comp : vals) G += gram_matrix(comp, comp, rule.weights);
    CHECK((G - Eigen::MatrixXd::Identity(sym.dim, sym.dim)).cwiseAbs().maxCoeff() < 1e-10);
  }
}
