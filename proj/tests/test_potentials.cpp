#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "stokesbgg/potentials.hpp"
#include "support/fixtures.hpp"

using namespace stokesbgg;
using namespace testsupport;

namespace {

PolyMesh test_polygons() {
  // triangle, square, distorted pentagon, L-shaped hexagon as separate meshes
  // would complicate loops; use the blended agglomerated mesh which has a
  // nonconvex cell, a hanging-node cell, and plain squares
  return generate_mesh(MeshFamily::AgglomeratedNonconvex, 1);
}

Eigen::VectorXd eval_vector_poly(const CellContext& cc, const Eigen::VectorXd& coef, int n,
                                 const Eigen::Vector2d& pt) {
  Eigen::Matrix2Xd p(2, 1);
  p.col(0) = pt;
  const Eigen::MatrixXd v = cc.scalar.values(p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < n; i++) {
    out[0] += coef[2 * i + 0] * v(i, 0);
    out[1] += coef[2 * i + 1] * v(i, 0);
  }
  return out;
}

}  // namespace

TEST_CASE("consistent lifting reproduces members") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1, 2, 3}) {
    const MeshContext mc(mesh, k);
    const DofLayout layout = make_layout(Space::SRot, k, mesh);
    Rng rng(21 + k);

    for (int t = 0; t < mesh.n_cells(); t++) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd L = lifting_matrix(cc);

      // zero data -> zero minimiser
      CHECK((L * Eigen::VectorXd::Zero(L.cols())).norm() == 0.);

      for (int trial = 0; trial < (t == 0 ? 20 : 3); trial++) {
        const PolyVec2 p = random_poly_vec(rng, k, mesh_extent(mesh));
        const Eigen::VectorXd ph = interpolate_ddr_grad(mc, field(p));
        const Eigen::VectorXd got = L * gather(ph, cell_dofs(layout, mesh, t));
        const Eigen::VectorXd expect = project_cell_vector(cc, field(p), poly_dim(k));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("rot potential: polynomial consistency and decomposition") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1, 2}) {
    const MeshContext mc(mesh, k);
    const DofLayout layout = make_layout(Space::SRot, k, mesh);
    Rng rng(31 + k);

    for (int t = 0; t < mesh.n_cells(); t += 2) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd P = pot_rot_matrix(cc);

      for (int trial = 0; trial < 20; trial++) {
        const PolyVec2 p = random_poly_vec(rng, k, mesh_extent(mesh));
        const Eigen::VectorXd ph = interpolate_ddr_grad(mc, field(p));
        const Eigen::VectorXd got = P * gather(ph, cell_dofs(layout, mesh, t));
        const Eigen::VectorXd expect = project_cell_vector(cc, field(p), poly_dim(k));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-9);
      }

      // curl-image projection is independent of the lifting choice
      const Eigen::MatrixXd P_alt = pot_rot_matrix(cc, RotLifting::CellInclusion);
      Eigen::VectorXd random_input(P.cols());
      for (int i = 0; i < P.cols(); i++) random_input[i] = rng.uniform();
      const Eigen::VectorXd a = P * random_input;
      const Eigen::VectorXd b = P_alt * random_input;
      // project both onto the orthonormal curl-image basis
      const int n_roly = roly_dim(k);
      Eigen::VectorXd proj_a = Eigen::VectorXd::Zero(n_roly);
      Eigen::VectorXd proj_b = Eigen::VectorXd::Zero(n_roly);
      const int n = poly_dim(k);
      for (int m = 0; m < n_roly; m++) {
        for (int i = 0; i < n; i++) {
          const double gx = cc.roly_x.row(m)
                                .cwiseProduct(cc.sv.row(i))
                                .cwiseProduct(cc.quad.weights.transpose())
                                .sum();
          const double gy = cc.roly_y.row(m)
                                .cwiseProduct(cc.sv.row(i))
                                .cwiseProduct(cc.quad.weights.transpose())
                                .sum();
          proj_a[m] += gx * a[2 * i + 0] + gy * a[2 * i + 1];
          proj_b[m] += gx * b[2 * i + 0] + gy * b[2 * i + 1];
        }
      }
      CHECK((proj_a - proj_b).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("boundary trace: exactness and derivative identity") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1, 2}) {
    const MeshContext mc(mesh, k);
    const DofLayout layout = make_layout(Space::SGrad, k, mesh);
    Rng rng(41 + k);

    // q = 1 -> trace 1 on the whole boundary
    const ScalarField one = [](const Eigen::Vector2d&) { return 1.; };
    const VectorField zero = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero(); };
    const Eigen::VectorXd oneh = interpolate_stokes(mc, one, zero);

    for (int t = 0; t < mesh.n_cells(); t++) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd T = trace_matrix(cc);
      const int n_trace = edge_poly_dim(k + 1);
      const Eigen::VectorXd tr = T * gather(oneh, cell_dofs(layout, mesh, t));
      for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
        const auto& ec = *cc.edge[ie];
        const Eigen::VectorXd vals =
            ec.values.topRows(n_trace).transpose() * tr.segment(ie * n_trace, n_trace);
        CHECK((vals.array() - 1.).abs().maxCoeff() < 1e-12);
      }

      // trace exactness on interpolates of degree k+1 polynomials, and the
      // derivative identity against the tangential gradient
      for (int trial = 0; trial < 20; trial++) {
        const Poly2 q = random_poly(rng, k + 1, mesh_extent(mesh));
        const Eigen::VectorXd qh = interpolate_stokes(mc, field(q), grad_field(q));
        const Eigen::VectorXd local = gather(qh, cell_dofs(layout, mesh, t));
        const Eigen::VectorXd trq = T * local;
        for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
          const auto& ec = *cc.edge[ie];
          // values match q on the edge
          const Eigen::VectorXd vals =
              ec.values.topRows(n_trace).transpose() * trq.segment(ie * n_trace, n_trace);
          for (int p = 0; p < ec.quad.size(); p++) {
            CHECK(vals[p] == doctest::Approx(q(ec.quad.points.col(p))).epsilon(1e-10));
          }
          // derivative identity
          const Eigen::MatrixXd Tg = stokes_tangential_gradient_matrix(ec, k);
          const auto& edge = cc.loop_edge(ie);
          const auto& loop = cc.cell().vertex_loop;
          const DofLayout proto = make_layout(Space::SGrad, k, mesh);
          const LocalLayout loc = local_layout(proto, mesh, t);
          const bool along = edge.a == loop[ie];
          Eigen::VectorXd elocal(2 + edge_poly_dim(k - 1));
          elocal[0] = local[loc.vertex_offset(along ? ie : (ie + 1) % loc.nv)];
          elocal[1] = local[loc.vertex_offset(along ? (ie + 1) % loc.nv : ie)];
          for (int i = 0; i < edge_poly_dim(k - 1); i++) {
            elocal[2 + i] = local[loc.edge_offset(ie) + i];
          }
          const Eigen::VectorXd gt = Tg * elocal;
          const Eigen::VectorXd dvals =
              ec.derivs.topRows(n_trace).transpose() * trq.segment(ie * n_trace, n_trace);
          const Eigen::VectorXd gvals =
              ec.values.topRows(edge_poly_dim(k)).transpose() * gt;
          CHECK((dvals - gvals).cwiseAbs().maxCoeff() < 1e-11);
        }
      }
    }
  }
}

TEST_CASE("scalar potential of degree k+1") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1, 2}) {
    const MeshContext mc(mesh, k);
    const DofLayout layout = make_layout(Space::SGrad, k, mesh);
    Rng rng(51 + k);

    for (int t = 0; t < mesh.n_cells(); t += 2) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd P = pot_stokes_matrix(cc);

      for (int trial = 0; trial < 20; trial++) {
        const Poly2 q = random_poly(rng, k + 1, mesh_extent(mesh));
        const Eigen::VectorXd qh = interpolate_stokes(mc, field(q), grad_field(q));
        const Eigen::VectorXd got = P * gather(qh, cell_dofs(layout, mesh, t));
        const Eigen::VectorXd expect = project_cell_scalar(cc, field(q), poly_dim(k + 1));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-9);
      }

      // extension of the divergence-moment relation to curl-image tests:
      // residual of the same identity vanishes for w in the curl image
      const Eigen::MatrixXd G = sgrad_matrix(cc);
      const Eigen::MatrixXd Prot_G = pot_rot_matrix(cc) * G;
      const Eigen::MatrixXd trace = trace_matrix(cc);
      const int n_trace = edge_poly_dim(k + 1);
      const int n_roly = roly_dim(k);
      const int n = poly_dim(k);
      for (int trial = 0; trial < 10; trial++) {
        Eigen::VectorXd v(G.cols());
        for (int i = 0; i < v.size(); i++) v[i] = rng.uniform();
        const Eigen::VectorXd pg = Prot_G * v;
        const Eigen::VectorXd tr = trace * v;
        for (int m = 0; m < n_roly; m++) {
          double resid = 0.;
          for (int i = 0; i < n; i++) {
            const double gx = cc.roly_x.row(m)
                                  .cwiseProduct(cc.sv.row(i))
                                  .cwiseProduct(cc.quad.weights.transpose())
                                  .sum();
            const double gy = cc.roly_y.row(m)
                                  .cwiseProduct(cc.sv.row(i))
                                  .cwiseProduct(cc.quad.weights.transpose())
                                  .sum();
            resid -= gx * pg[2 * i + 0] + gy * pg[2 * i + 1];
          }
          for (int ie = 0; ie < cc.n_loop_edges(); ie++) {
            const auto& ec = *cc.edge[ie];
            const Eigen::Vector2d nrm = cc.loop_edge(ie).normal;
            const Eigen::VectorXd wn =
                (nrm.x() * cc.roly_on_edge_x[ie].row(m) + nrm.y() * cc.roly_on_edge_y[ie].row(m))
                    .transpose();
            const Eigen::VectorXd tvals =
                ec.values.topRows(n_trace).transpose() * tr.segment(ie * n_trace, n_trace);
            resid += cc.omega(ie) * wn.cwiseProduct(ec.quad.weights).dot(tvals);
          }
          CHECK(std::abs(resid) < 1e-11);
        }
      }
    }
  }
}

TEST_CASE("componentwise potential of degree k+2") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1}) {
    const MeshContext mc(mesh, k);
    const DofLayout layout = make_layout(Space::SRot, k, mesh);
    Rng rng(61 + k);
    for (int t = 0; t < mesh.n_cells(); t += 3) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd P = pot_grad_kp2_matrix(cc);
      for (int trial = 0; trial < 20; trial++) {
        const PolyVec2 p = random_poly_vec(rng, k + 2, mesh_extent(mesh));
        const Eigen::VectorXd ph = interpolate_ddr_grad(mc, field(p));
        const Eigen::VectorXd got = P * gather(ph, cell_dofs(layout, mesh, t));
        const Eigen::VectorXd expect = project_cell_vector(cc, field(p), poly_dim(k + 2));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("tensor potential of degree k+1") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1}) {
    const MeshContext mc(mesh, k);
    const DofLayout layout = make_layout(Space::DdrRot, k, mesh);
    Rng rng(71 + k);
    for (int t = 0; t < mesh.n_cells(); t += 3) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd P = pot_rot_tensor_matrix(cc);
      for (int trial = 0; trial < 20; trial++) {
        const PolyMat2 tau = random_poly_mat(rng, k + 1, mesh_extent(mesh));
        const Eigen::VectorXd th = interpolate_ddr_rot(mc, field(tau));
        const Eigen::VectorXd got = P * gather(th, cell_dofs(layout, mesh, t));
        const Eigen::VectorXd expect = project_cell_matrix(cc, field(tau), poly_dim(k + 1));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("higher-order potential of degree k+3") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1}) {
    const MeshContext mc(mesh, k);
    const DofLayout layout = make_layout(Space::SGrad, k, mesh);
    Rng rng(81 + k);
    for (int t = 0; t < mesh.n_cells(); t += 3) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd P = pot_stokes_kp3_matrix(cc);
      for (int trial = 0; trial < 20; trial++) {
        const Poly2 q = random_poly(rng, k + 3, mesh_extent(mesh));
        const Eigen::VectorXd qh = interpolate_stokes(mc, field(q), grad_field(q));
        const Eigen::VectorXd got = P * gather(qh, cell_dofs(layout, mesh, t));
        const Eigen::VectorXd expect = project_cell_scalar(cc, field(q), poly_dim(k + 3));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }

  // k = 0 on a triangle: cubics are reproduced while the degree-1 potential
  // only reproduces affine functions; the gap shows on q = x^3
  const PolyMesh tri = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const MeshContext mc(tri, 0);
  const DofLayout layout = make_layout(Space::SGrad, 0, tri);
  const ScalarField cubic = [](const Eigen::Vector2d& x) { return x.x() * x.x() * x.x(); };
  const VectorField gcubic = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(3 * x.x() * x.x(), 0.);
  };
  const Eigen::VectorXd qh = interpolate_stokes(mc, cubic, gcubic);
  const CellContext cc = mc.cell(0);
  const Eigen::VectorXd local = gather(qh, cell_dofs(layout, tri, 0));
  const Eigen::VectorXd hi = pot_stokes_kp3_matrix(cc) * local;
  const Eigen::VectorXd hi_expect = project_cell_scalar(cc, cubic, poly_dim(3));
  CHECK((hi - hi_expect).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::VectorXd lo = pot_stokes_matrix(cc) * local;
  const Eigen::VectorXd lo_expect = project_cell_scalar(cc, cubic, poly_dim(1));
  CHECK((lo - lo_expect).cwiseAbs().maxCoeff() > 1e-3);  // the gap is real
}

TEST_CASE("gradient consistency through the rot potential") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1, 2}) {
    const MeshContext mc(mesh, k);
    const DofLayout layout = make_layout(Space::SGrad, k, mesh);
    Rng rng(91 + k);
    for (int t = 0; t < mesh.n_cells(); t += 2) {
      const CellContext cc = mc.cell(t);
      const Eigen::MatrixXd PG = pot_rot_matrix(cc) * sgrad_matrix(cc);
      for (int trial = 0; trial < 10; trial++) {
        const Poly2 q = random_poly(rng, k + 1, mesh_extent(mesh));
        const Eigen::VectorXd qh = interpolate_stokes(mc, field(q), grad_field(q));
        const Eigen::VectorXd got = PG * gather(qh, cell_dofs(layout, mesh, t));
        const Eigen::VectorXd expect = project_cell_vector(cc, grad_field(q), poly_dim(k));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("local products: stabilisation consistency, SPD, norm equivalence") {
  const PolyMesh mesh = test_polygons();
  for (int k : {0, 1, 2}) {
    const MeshContext mc(mesh, k);
    const DofLayout sgrad_layout = make_layout(Space::SGrad, k, mesh);
    const DofLayout srot_layout = make_layout(Space::SRot, k, mesh);
    Rng rng(101 + k);

    for (int t = 0; t < mesh.n_cells(); t += 3) {
      const CellContext cc = mc.cell(t);
      const LocalProducts lp = local_products(cc);

      // stabilisation vanishes on interpolates of polynomials
      const Poly2 q = random_poly(rng, k + 1, mesh_extent(mesh));
      const Eigen::VectorXd qh = interpolate_stokes(mc, field(q), grad_field(q));
      const Eigen::VectorXd lq = gather(qh, cell_dofs(sgrad_layout, mesh, t));
      const Eigen::MatrixXd P = pot_stokes_matrix(cc);
      const Eigen::MatrixXd IP = interp_stokes_of_poly(cc) * P;
      const Eigen::VectorXd s = lq - IP * lq;
      const double s_norm2 = s.dot(lp.sgrad.component_norm.asDiagonal() * s);
      const double q_norm2 = lq.dot(lp.sgrad.component_norm.asDiagonal() * lq);
      CHECK(s_norm2 <= 1e-20 * q_norm2);

      const PolyVec2 v = random_poly_vec(rng, k, mesh_extent(mesh));
      const Eigen::VectorXd vh = interpolate_ddr_grad(mc, field(v));
      const Eigen::VectorXd lv = gather(vh, cell_dofs(srot_layout, mesh, t));
      const Eigen::MatrixXd Pr = pot_rot_matrix(cc);
      const Eigen::MatrixXd IPr = interp_srot_of_poly(cc) * Pr;
      const Eigen::VectorXd sr = lv - IPr * lv;
      const double sr_norm2 = sr.dot(lp.srot.component_norm.asDiagonal() * sr);
      const double v_norm2 = lv.dot(lp.srot.component_norm.asDiagonal() * lv);
      CHECK(sr_norm2 <= 1e-20 * v_norm2);

      // SPD
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(lp.sgrad.product);
      CHECK(es2.eigenvalues().minCoeff() > 0.);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esr(lp.srot.product);
      CHECK(esr.eigenvalues().minCoeff() > 0.);
    }
  }
}

TEST_CASE("norm equivalence and boundedness ratios across refinement") {
  // same cell shape at two sizes: the spectral ratios stay within a factor
  const auto ratios = [](const PolyMesh& mesh, int k) {
    const MeshContext mc(mesh, k);
    const CellContext cc = mc.cell(0);
    const LocalProducts lp = local_products(cc);
    // generalized eigenvalues of (product, component norm)
    const Eigen::MatrixXd D2 = lp.sgrad.component_norm.asDiagonal();
    const Eigen::MatrixXd W = D2.inverse().cwiseSqrt();
    const Eigen::MatrixXd A = W * lp.sgrad.product * W;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double equiv = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();

    // boundedness: ||potential|| and h ||| sgrad ||| against the component norm
    const Eigen::MatrixXd P = pot_stokes_matrix(cc);
    const Eigen::MatrixXd G = sgrad_matrix(cc);
    const Eigen::VectorXd dr = component_norm_srot(cc);
    const double hT = mesh.cells[0].diameter;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(W * (P.transpose() * P) * W);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e2(
        W * (hT * hT * G.transpose() * dr.asDiagonal() * G) * W);
    return std::array<double, 3>{equiv, std::sqrt(e1.eigenvalues().maxCoeff()),
                                 std::sqrt(e2.eigenvalues().maxCoeff())};
  };

  std::vector<Eigen::Vector2d> penta = {{0, 0}, {1.1, -0.1}, {1.4, 0.8}, {0.6, 1.2}, {-0.2, 0.7}};
  std::vector<Eigen::Vector2d> penta_half = penta;
  for (auto& v : penta_half) v *= 0.5;
  std::vector<int> loop = {0, 1, 2, 3, 4};
  const PolyMesh coarse = build_mesh(penta, {loop});
  const PolyMesh fine = build_mesh(penta_half, {loop});

  for (int k : {0, 1, 2}) {
    const auto a = ratios(coarse, k);
    const auto b = ratios(fine, k);
    CHECK(a[0] / b[0] < 10.);
    CHECK(b[0] / a[0] < 10.);
    CHECK(a[1] / b[1] < 2.);
    CHECK(b[1] / a[1] < 2.);
    CHECK(a[2] / b[2] < 2.);
    CHECK(b[2] / a[2] < 2.);
  }
}
