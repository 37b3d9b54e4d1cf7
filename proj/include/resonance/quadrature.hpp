// Gauss-Legendre quadrature and tensor-product quadrature on spheres.
//
// The sphere S^n is parameterized recursively: nu = (cos th, sin th * nu'),
// nu' in S^{n-1}, th in [0, pi], with surface measure sin^{n-1}(th) dth dS'.
// Each angular integral uses Gauss-Legendre nodes; integrands in this project
// are smooth, so convergence is spectral and adaptive order-doubling to a
// fixed agreement tolerance is cheap.

#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace reso {

using Vec = Eigen::VectorXd;

struct QuadRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline const QuadRule& gauss_legendre(int order) {
  static std::map<int, QuadRule> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1) throw std::invalid_argument("gauss_legendre: order < 1");
  QuadRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

struct SphereNode {
  Vec nu;         // point on S^n, as an (n+1)-vector
  double weight;  // surface-measure weight
};

/// Tensor-product quadrature on S^n (n >= 1) with `order` nodes per angle.
inline std::vector<SphereNode> sphere_quadrature(int n, int order) {
  if (n < 1) throw std::invalid_argument("sphere_quadrature: n < 1");
  if (n == 1) {
    // Periodic trapezoid on the circle: exact for trigonometric polynomials.
    std::vector<SphereNode> nodes;
    const int m = 2 * order;
    nodes.reserve(m);
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * std::numbers::pi * i / m;
      Vec nu(2);
      nu << std::cos(th), std::sin(th);
      nodes.push_back({nu, 2.0 * std::numbers::pi / m});
    }
    return nodes;
  }
  const auto inner = sphere_quadrature(n - 1, order);
  const auto& gl = gauss_legendre(order);
  std::vector<SphereNode> nodes;
  nodes.reserve(inner.size() * gl.nodes.size());
  for (size_t a = 0; a < gl.nodes.size(); ++a) {
    // Map [-1,1] -> [0,pi].
    const double th = 0.5 * std::numbers::pi * (gl.nodes[a] + 1.0);
    const double wth = 0.5 * std::numbers::pi * gl.weights[a];
    const double c = std::cos(th), s = std::sin(th);
    const double jac = std::pow(s, n - 1);
    for (const auto& q : inner) {
      Vec nu(n + 1);
      nu[0] = c;
      nu.tail(n) = s * q.nu;
      nodes.push_back({nu, wth * jac * q.weight});
    }
  }
  return nodes;
}

/// Default quadrature order; RESONANCE_QUAD_ORDER overrides it.
inline int default_quad_order() {
  if (const char* env = std::getenv("RESONANCE_QUAD_ORDER")) {
    const int v = std::atoi(env);
    if (v >= 2) return v;
  }
  return 48;
}

/// Integrate a smooth scalar function over S^n adaptively: double the order
/// until two successive levels agree to `tol` (absolute, relative to scale).
template <class F>
double integrate_sphere(int n, F&& f, double tol = 1e-10, int order = -1) {
  if (order < 0) order = default_quad_order();
  double prev = 0.0;
  bool have_prev = false;
  for (int q = order; q <= 16 * order; q *= 2) {
    double sum = 0.0;
    for (const auto& node : sphere_quadrature(n, q)) sum += node.weight * f(node.nu);
    if (have_prev && std::abs(sum - prev) <= tol * std::max(1.0, std::abs(sum))) return sum;
    prev = sum;
    have_prev = true;
  }
  return prev;
}

/// Adaptive 1-D integral over [a,b] (Gauss-Legendre with order doubling).
template <class F>
double integrate_interval(F&& f, double a, double b, double tol = 1e-10, int order = 32) {
  double prev = 0.0;
  bool have_prev = false;
  for (int q = order; q <= 64 * order; q *= 2) {
    const auto& gl = gauss_legendre(q);
    double sum = 0.0;
    for (size_t i = 0; i < gl.nodes.size(); ++i) {
      const double x = 0.5 * (b - a) * gl.nodes[i] + 0.5 * (a + b);
      sum += 0.5 * (b - a) * gl.weights[i] * f(x);
    }
    if (have_prev && std::abs(sum - prev) <= tol * std::max(1.0, std::abs(sum))) return sum;
    prev = sum;
    have_prev = true;
  }
  return prev;
}

}  // namespace reso
