#include "stokesbgg/quadrature.hpp"

#include <cmath>
#include <map>

namespace stokesbgg {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  // Newton on Legendre polynomials, symmetric nodes
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; i++) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.;
    for (int it = 0; it < 100; it++) {
      double p0 = 1., p1 = x;
      for (int m = 2; m <= n; m++) {
        const double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2. / ((1. - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.;
}

namespace {

// rule on the triangle (a, b, c) via the Duffy map of a tensor Gauss rule;
// the collapsed direction raises the required 1D degree by one
void append_triangle_rule(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                          const Eigen::Vector2d& c, int degree,
                          std::vector<Eigen::Vector2d>& pts, std::vector<double>& wts) {
  const int n = (degree + 3) / 2 + 1;
  Eigen::VectorXd gx, gw;
  gauss_legendre(n, gx, gw);
  const double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  for (int i = 0; i < n; i++) {
    const double u = 0.5 * (gx[i] + 1.);
    for (int j = 0; j < n; j++) {
      const double v = 0.5 * (gx[j] + 1.);
      const double l1 = u, l2 = v * (1. - u);
      pts.push_back(a + l1 * (b - a) + l2 * (c - a));
      wts.push_back(0.25 * gw[i] * gw[j] * (1. - u) * area2);
    }
  }
}

}  // namespace

QuadRule polygon_quadrature(const std::vector<Eigen::Vector2d>& polygon,
                            const Eigen::Vector2d& center, int degree) {
  std::vector<Eigen::Vector2d> pts;
  std::vector<double> wts;
  const int n = static_cast<int>(polygon.size());
  for (int i = 0; i < n; i++) {
    const Eigen::Vector2d& a = polygon[i];
    const Eigen::Vector2d& b = polygon[(i + 1) % n];
    const double area2 = (a - center).x() * (b - center).y() - (a - center).y() * (b - center).x();
    if (area2 <= 0.) {
      throw MeshError("cell_quadrature: inverted fan triangle (bad inner point)");
    }
    append_triangle_rule(center, a, b, degree, pts, wts);
  }
  QuadRule rule;
  rule.exactness = degree;
  rule.points.resize(2, static_cast<int>(pts.size()));
  rule.weights.resize(static_cast<int>(pts.size()));
  for (size_t i = 0; i < pts.size(); i++) {
    rule.points.col(static_cast<int>(i)) = pts[i];
    rule.weights[static_cast<int>(i)] = wts[i];
  }
  return rule;
}

QuadRule cell_quadrature(const PolyMesh& mesh, int t, int degree) {
  const auto& cell = mesh.cells[t];
  std::vector<Eigen::Vector2d> poly;
  for (int v : cell.vertex_loop) poly.push_back(mesh.vertices[v]);
  return polygon_quadrature(poly, cell.inner_point, degree);
}

QuadRule edge_quadrature(const PolyMesh& mesh, int e, int degree) {
  const auto& edge = mesh.edges[e];
  const int n = std::max(1, (degree + 2) / 2);
  Eigen::VectorXd gx, gw;
  gauss_legendre(n, gx, gw);
  QuadRule rule;
  rule.exactness = 2 * n - 1;
  rule.points.resize(2, n);
  rule.weights.resize(n);
  const Eigen::Vector2d a = mesh.vertices[edge.a];
  for (int i = 0; i < n; i++) {
    rule.points.col(i) = a + 0.5 * (gx[i] + 1.) * edge.length * edge.tangent;
    rule.weights[i] = 0.5 * edge.length * gw[i];
  }
  return rule;
}

}  // namespace stokesbgg
