#include "stokesbgg/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace stokesbgg {

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::Potential: return "potential";
    case StudyKind::Gradient: return "gradient";
    case StudyKind::Rot: return "rot";
    case StudyKind::ProductGrad: return "product_grad";
    case StudyKind::ProductRot: return "product_rot";
    case StudyKind::AdjointGrad: return "adjoint_grad";
    case StudyKind::AdjointRot: return "adjoint_rot";
  }
  return "?";
}

StudyKind study_kind_from_string(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(StudyKind::AdjointRot); i++) {
    if (to_string(static_cast<StudyKind>(i)) == name) return static_cast<StudyKind>(i);
  }
  throw std::invalid_argument("unknown study kind: " + name);
}

namespace {

Eigen::VectorXd gather_cell(const Eigen::VectorXd& global, const DofLayout& layout,
                            const PolyMesh& mesh, int t) {
  const auto dofs = cell_dofs(layout, mesh, t);
  Eigen::VectorXd out(dofs.size());
  for (size_t i = 0; i < dofs.size(); i++) out[static_cast<int>(i)] = global[dofs[i]];
  return out;
}

// squared L2 error of a coefficient expansion against sampled values
double l2_error_sq_scalar(const CellContext& cc, const Eigen::VectorXd& coefs, int n,
                          const ScalarField& exact) {
  Eigen::VectorXd diff(cc.quad.size());
  for (int p = 0; p < cc.quad.size(); p++) {
    double val = 0.;
    for (int i = 0; i < n; i++) val += coefs[i] * cc.sv(i, p);
    diff[p] = val - exact(cc.quad.points.col(p));
  }
  return diff.cwiseAbs2().dot(cc.quad.weights);
}

double l2_error_sq_vector(const CellContext& cc, const Eigen::VectorXd& coefs, int n,
                          const VectorField& exact) {
  double err = 0.;
  for (int p = 0; p < cc.quad.size(); p++) {
    Eigen::Vector2d val = Eigen::Vector2d::Zero();
    for (int i = 0; i < n; i++) {
      val.x() += coefs[2 * i + 0] * cc.sv(i, p);
      val.y() += coefs[2 * i + 1] * cc.sv(i, p);
    }
    err += cc.quad.weights[p] * (val - exact(cc.quad.points.col(p))).squaredNorm();
  }
  return err;
}

double study_error(StudyKind kind, const SmoothScalar& q, const SmoothVector& v,
                   const MeshContext& mc) {
  const PolyMesh& mesh = mc.mesh();
  const int k = mc.degree();

  switch (kind) {
    case StudyKind::Potential: {
      const Eigen::VectorXd qh = interpolate_stokes(mc, q.value, q.gradient);
      const DofLayout layout = make_layout(Space::SGrad, k, mesh);
      double err = 0.;
      for (int t = 0; t < mesh.n_cells(); t++) {
        const CellContext cc = mc.cell(t);
        const Eigen::VectorXd p = pot_stokes_matrix(cc) * gather_cell(qh, layout, mesh, t);
        err += l2_error_sq_scalar(cc, p, poly_dim(k + 1), q.value);
      }
      return std::sqrt(err);
    }
    case StudyKind::Gradient: {
      const Eigen::VectorXd qh = interpolate_stokes(mc, q.value, q.gradient);
      const DofLayout layout = make_layout(Space::SGrad, k, mesh);
      double err = 0.;
      for (int t = 0; t < mesh.n_cells(); t++) {
        const CellContext cc = mc.cell(t);
        const Eigen::VectorXd g =
            pot_rot_matrix(cc) * sgrad_matrix(cc) * gather_cell(qh, layout, mesh, t);
        err += l2_error_sq_vector(cc, g, poly_dim(k), q.gradient);
      }
      return mesh.mesh_size * std::sqrt(err);
    }
    case StudyKind::Rot: {
      const Eigen::VectorXd vh = interpolate_ddr_grad(mc, v.value);
      const DofLayout layout = make_layout(Space::SRot, k, mesh);
      double err = 0.;
      for (int t = 0; t < mesh.n_cells(); t++) {
        const CellContext cc = mc.cell(t);
        const Eigen::VectorXd r = srot_matrix(cc) * gather_cell(vh, layout, mesh, t);
        err += l2_error_sq_scalar(cc, r, poly_dim(k), v.rot);
      }
      return std::sqrt(err);
    }
    case StudyKind::ProductGrad: {
      const Eigen::VectorXd rh = interpolate_stokes(mc, q.value, q.gradient);
      const DofLayout layout = make_layout(Space::SGrad, k, mesh);
      double err = 0.;
      for (int t = 0; t < mesh.n_cells(); t++) {
        const CellContext cc = mc.cell(t);
        const Eigen::MatrixXd P = pot_stokes_matrix(cc);
        const Eigen::MatrixXd IP = interp_stokes_of_poly(cc) * P;
        const Eigen::VectorXd d2 = component_norm_sgrad(cc);
        Eigen::MatrixXd S = -IP;
        S.diagonal().array() += 1.;
        const Eigen::MatrixXd M2 = P.transpose() * P + S.transpose() * d2.asDiagonal() * S;
        // moments of the smooth field against the potential basis
        Eigen::VectorXd m(poly_dim(k + 1));
        for (int i = 0; i < m.size(); i++) {
          double s = 0.;
          for (int p = 0; p < cc.quad.size(); p++) {
            s += cc.quad.weights[p] * q.value(cc.quad.points.col(p)) * cc.sv(i, p);
          }
          m[i] = s;
        }
        const Eigen::VectorXd b =
            P.transpose() * m - M2 * gather_cell(rh, layout, mesh, t);
        err += b.dot(Eigen::LDLT<Eigen::MatrixXd>(M2).solve(b));
      }
      return std::sqrt(err);
    }
    case StudyKind::ProductRot: {
      const Eigen::VectorXd wh = interpolate_ddr_grad(mc, v.value);
      const DofLayout layout = make_layout(Space::SRot, k, mesh);
      double err = 0.;
      for (int t = 0; t < mesh.n_cells(); t++) {
        const CellContext cc = mc.cell(t);
        const Eigen::MatrixXd P = pot_rot_matrix(cc);
        const Eigen::MatrixXd IP = interp_srot_of_poly(cc) * P;
        const Eigen::VectorXd dr = component_norm_srot(cc);
        Eigen::MatrixXd S = -IP;
        S.diagonal().array() += 1.;
        const Eigen::MatrixXd Mr = P.transpose() * P + S.transpose() * dr.asDiagonal() * S;
        Eigen::VectorXd m(2 * poly_dim(k));
        for (int i = 0; i < poly_dim(k); i++) {
          Eigen::Vector2d s = Eigen::Vector2d::Zero();
          for (int p = 0; p < cc.quad.size(); p++) {
            s += cc.quad.weights[p] * v.value(cc.quad.points.col(p)) * cc.sv(i, p);
          }
          m[2 * i + 0] = s.x();
          m[2 * i + 1] = s.y();
        }
        const Eigen::VectorXd b =
            P.transpose() * m - Mr * gather_cell(wh, layout, mesh, t);
        err += b.dot(Eigen::LDLT<Eigen::MatrixXd>(Mr).solve(b));
      }
      return std::sqrt(err);
    }
    case StudyKind::AdjointGrad: {
      // dual norm of q_h -> E(v, q_h) against the seminorm |SGRAD q|_{rot,h}
      const Eigen::VectorXd vh = interpolate_ddr_grad(mc, v.value);
      const DofLayout qlayout = make_layout(Space::SGrad, k, mesh);
      const DofLayout vlayout = make_layout(Space::SRot, k, mesh);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(qlayout.dim());
      for (int t = 0; t < mesh.n_cells(); t++) {
        const CellContext cc = mc.cell(t);
        const LocalProducts lp = local_products(cc);
        const Eigen::MatrixXd G = sgrad_matrix(cc);
        const Eigen::VectorXd iv = gather_cell(vh, vlayout, mesh, t);
        Eigen::VectorXd b_loc = G.transpose() * (lp.srot.product * iv);
        // + moments of div v against the potential
        const Eigen::MatrixXd P = pot_stokes_matrix(cc);
        Eigen::VectorXd m(poly_dim(k + 1));
        for (int i = 0; i < m.size(); i++) {
          double s = 0.;
          for (int p = 0; p < cc.quad.size(); p++) {
            s += cc.quad.weights[p] * v.div(cc.quad.points.col(p)) * cc.sv(i, p);
          }
          m[i] = s;
        }
        b_loc += P.transpose() * m;
        const auto dofs = cell_dofs(qlayout, mesh, t);
        for (size_t i = 0; i < dofs.size(); i++) b[dofs[i]] += b_loc[static_cast<int>(i)];
      }
      const GlobalOperator sgrad = assemble(Op::SGrad, mc);
      const GlobalOperator gram = assemble(Op::GramSRotProd, mc);
      const Eigen::MatrixXd A =
          Eigen::MatrixXd(sgrad.mat.transpose() * gram.mat * sgrad.mat);
      // pseudo-solve: the functional vanishes on the kernel of the seminorm
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      const Eigen::VectorXd ev = es.eigenvalues();
      const Eigen::VectorXd c = es.eigenvectors().transpose() * b;
      double dual_sq = 0.;
      for (int i = 0; i < ev.size(); i++) {
        if (ev[i] > 1e-12 * ev[ev.size() - 1]) dual_sq += c[i] * c[i] / ev[i];
      }
      return std::sqrt(dual_sq);
    }
    case StudyKind::AdjointRot: {
      // dual norm of v_h -> E(r, v_h) against the product norm on the middle space
      const DofLayout layout = make_layout(Space::SRot, k, mesh);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(layout.dim());
      for (int t = 0; t < mesh.n_cells(); t++) {
        const CellContext cc = mc.cell(t);
        const Eigen::MatrixXd R = srot_matrix(cc);
        const Eigen::MatrixXd P = pot_rot_matrix(cc);
        // moments of the smooth field and its rotated gradient
        Eigen::VectorXd mr(poly_dim(k));
        for (int i = 0; i < mr.size(); i++) {
          double s = 0.;
          for (int p = 0; p < cc.quad.size(); p++) {
            s += cc.quad.weights[p] * q.value(cc.quad.points.col(p)) * cc.sv(i, p);
          }
          mr[i] = s;
        }
        Eigen::VectorXd mc_curl(2 * poly_dim(k));
        for (int i = 0; i < poly_dim(k); i++) {
          Eigen::Vector2d s = Eigen::Vector2d::Zero();
          for (int p = 0; p < cc.quad.size(); p++) {
            const Eigen::Vector2d g = q.gradient(cc.quad.points.col(p));
            s += cc.quad.weights[p] * Eigen::Vector2d(g.y(), -g.x()) * cc.sv(i, p);
          }
          mc_curl[2 * i + 0] = s.x();
          mc_curl[2 * i + 1] = s.y();
        }
        const Eigen::VectorXd b_loc = R.transpose() * mr - P.transpose() * mc_curl;
        const auto dofs = cell_dofs(layout, mesh, t);
        for (size_t i = 0; i < dofs.size(); i++) b[dofs[i]] += b_loc[static_cast<int>(i)];
      }
      const GlobalOperator gram = assemble(Op::GramSRotProd, mc);
      const Eigen::MatrixXd A(gram.mat);
      const Eigen::VectorXd x = Eigen::LDLT<Eigen::MatrixXd>(A).solve(b);
      return std::sqrt(b.dot(x));
    }
  }
  throw std::invalid_argument("study_error: unknown kind");
}

}  // namespace

RateStudy consistency_study(StudyKind kind, const SmoothScalar& q, const SmoothVector& v,
                            const std::vector<PolyMesh>& meshes, int k) {
  if (meshes.size() < 3) {
    throw std::invalid_argument("consistency_study: mesh family too short (< 3)");
  }
  RateStudy study;
  study.kind = kind;
  switch (kind) {
    case StudyKind::Potential:
    case StudyKind::Gradient:
    case StudyKind::ProductGrad:
      study.target = k + 2;
      break;
    default:
      study.target = k + 1;
      break;
  }
  for (const auto& mesh : meshes) {
    const MeshContext mc(mesh, k);
    const double err = study_error(kind, q, v, mc);
    const MeshContext mc_fine(mesh, k, default_quad_degree(k) + 4);
    const double err_fine = study_error(kind, q, v, mc_fine);
    study.h.push_back(mesh.mesh_size);
    study.error.push_back(err);
    study.quad_delta.push_back(std::abs(err - err_fine));
  }

  for (double e : study.error) {
    if (e < 1e-13) study.degenerate = true;
  }
  if (!study.degenerate) {
    const int n = static_cast<int>(study.h.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; i++) {
      A(i, 0) = std::log(study.h[i]);
      A(i, 1) = 1.;
      b[i] = std::log(study.error[i]);
    }
    const Eigen::Vector2d fit = (A.transpose() * A).ldlt().solve(A.transpose() * b);
    study.slope = fit[0];
    study.fit_residual = (A * fit - b).norm() / std::sqrt(n);
  }
  return study;
}

}  // namespace stokesbgg
