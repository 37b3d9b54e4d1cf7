// Minkowski space R^{1,n+1}, the isometry group G = PSO(1,n+1) and its Lie
// algebra, the hyperboloid/ball/half-space models, the geodesic flow, and the
// conformal-boundary maps Phi_pm, B_pm, xi_pm, P(x,nu), (N_gamma, L_gamma).
//
// Conventions: coordinates are (x_0, ..., x_{n+1}); the Minkowski form is
// <x,y>_M = x_0 y_0 - sum_{j>=1} x_j y_j.  The hyperboloid is <x,x>_M = 1,
// x_0 > 0; unit tangents satisfy <xi,xi>_M = -1, <x,xi>_M = 0.
//
// The Lie algebra basis and all brackets are kept in exact integer matrices;
// exponentials use per-generator closed forms (boost / rotation / nilpotent).

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reso {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// ---------------------------------------------------------------------------
// Minkowski basics
// ---------------------------------------------------------------------------

/// <x,y>_M = x0 y0 - x' . y'
inline double minkowski_inner(const Vec& x, const Vec& y) {
  double s = x[0] * y[0];
  for (int j = 1; j < x.size(); ++j) s -= x[j] * y[j];
  return s;
}

/// The matrix J = diag(1, -1, ..., -1) of the form, size (n+2).
inline Mat minkowski_J(int n) {
  Vec d = -Vec::Ones(n + 2);
  d[0] = 1.0;
  return d.asDiagonal();
}

/// A point (x,xi) of the unit tangent bundle S H^{n+1}.
struct UnitTangent {
  Vec x;   // hyperboloid point, <x,x>_M = 1, x0 > 0
  Vec xi;  // unit tangent, <xi,xi>_M = -1, <x,xi>_M = 0

  int n() const { return int(x.size()) - 2; }

  /// Construct with drift control: project xi onto <x,.>_M = 0, rescale both.
  /// Rejects inputs whose pre-normalization violation exceeds `max_violation`.
  static UnitTangent make(Vec x, Vec xi, double max_violation = 1e-6) {
    const double xx = minkowski_inner(x, x);
    if (xx <= 0.0 || x[0] <= 0.0) throw std::invalid_argument("UnitTangent: x not timelike future");
    const double xxi = minkowski_inner(x, xi);
    const double xixi = minkowski_inner(xi, xi);
    if (std::abs(xx - 1.0) > max_violation || std::abs(xxi) > max_violation ||
        std::abs(xixi + 1.0) > max_violation) {
      throw std::invalid_argument("UnitTangent: constraint violation too large");
    }
    x /= std::sqrt(xx);
    xi -= minkowski_inner(x, xi) * x;  // <x,x>_M = 1 projection
    const double nn = -minkowski_inner(xi, xi);
    if (nn <= 0.0) throw std::invalid_argument("UnitTangent: xi not spacelike");
    xi /= std::sqrt(nn);
    return UnitTangent{std::move(x), std::move(xi)};
  }
};

/// Validates M^T J M = J, det = 1, M00 > 0 within `tol`.
inline bool is_group_element(const Mat& M, double tol = 1e-9) {
  const int n = int(M.rows()) - 2;
  const Mat J = minkowski_J(n);
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff() <= tol &&
         std::abs(M.determinant() - 1.0) <= tol && M(0, 0) > 0.0;
}

// ---------------------------------------------------------------------------
// Lie algebra so(1, n+1), exact integer matrices
// ---------------------------------------------------------------------------

enum class GenTag { X, A, R, UPlus, UMinus, Generic };

struct AlgebraElement {
  IMat mat;     // (n+2) x (n+2), integer entries; satisfies M^T J + J M = 0
  GenTag tag = GenTag::Generic;
  int i = 0, j = 0;  // generator indices where applicable

  int n() const { return int(mat.rows()) - 2; }
};

namespace detail {
inline IMat elem(int dim, int r, int c) {
  IMat E = IMat::Zero(dim, dim);
  E(r, c) = 1;
  return E;
}
}  // namespace detail

/// X = E_{01} + E_{10} (the geodesic vector field generator).
inline AlgebraElement alg_X(int n) {
  const int d = n + 2;
  return {detail::elem(d, 0, 1) + detail::elem(d, 1, 0), GenTag::X, 0, 0};
}

/// A_k = E_{0k} + E_{k0}, 2 <= k <= n+1.
inline AlgebraElement alg_A(int n, int k) {
  if (k < 2 || k > n + 1) throw std::invalid_argument("alg_A: k out of range");
  const int d = n + 2;
  return {detail::elem(d, 0, k) + detail::elem(d, k, 0), GenTag::A, k, 0};
}

/// R_ij = E_{ij} - E_{ji}, 1 <= i < j <= n+1 (rotations).
inline AlgebraElement alg_R(int n, int i, int j) {
  if (i < 1 || j <= i || j > n + 1) throw std::invalid_argument("alg_R: indices out of range");
  const int d = n + 2;
  return {detail::elem(d, i, j) - detail::elem(d, j, i), GenTag::R, i, j};
}

/// U_i^pm = -A_{i+1} -+ R_{1,i+1}, 1 <= i <= n (horocyclic generators).
inline AlgebraElement alg_U(int n, int i, int sign) {
  if (i < 1 || i > n) throw std::invalid_argument("alg_U: i out of range");
  if (sign != 1 && sign != -1) throw std::invalid_argument("alg_U: sign must be +-1");
  IMat M = -alg_A(n, i + 1).mat;
  if (sign > 0)
    M -= alg_R(n, 1, i + 1).mat;
  else
    M += alg_R(n, 1, i + 1).mat;
  return {std::move(M), sign > 0 ? GenTag::UPlus : GenTag::UMinus, i, 0};
}

/// The documented spanning set: X, A_k, R_ij, U_i^pm.  The first
/// 1 + n + n(n+1)/2 entries (X, A, R) are the independent basis; the U_i^pm
/// are the combinations used throughout the horocyclic calculus.
inline std::vector<AlgebraElement> algebra_basis(int n) {
  if (n < 1) throw std::invalid_argument("algebra_basis: n < 1");
  std::vector<AlgebraElement> out;
  out.push_back(alg_X(n));
  for (int k = 2; k <= n + 1; ++k) out.push_back(alg_A(n, k));
  for (int i = 1; i <= n + 1; ++i)
    for (int j = i + 1; j <= n + 1; ++j) out.push_back(alg_R(n, i, j));
  for (int i = 1; i <= n; ++i) out.push_back(alg_U(n, i, +1));
  for (int i = 1; i <= n; ++i) out.push_back(alg_U(n, i, -1));
  return out;
}

/// Exact commutator [a,b] = ab - ba in integer arithmetic.
inline AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.mat.rows() != b.mat.rows()) throw std::invalid_argument("bracket: dimension mismatch");
  return {a.mat * b.mat - b.mat * a.mat, GenTag::Generic, 0, 0};
}

// ---------------------------------------------------------------------------
// Exponentials
// ---------------------------------------------------------------------------

/// Generic matrix exponential: scaling and squaring with a Taylor series.
inline Mat expm_generic(const Mat& M) {
  const double nrm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (nrm / std::pow(2.0, s) > 0.25) ++s;
  const Mat A = M / std::pow(2.0, s);
  Mat term = Mat::Identity(M.rows(), M.cols());
  Mat sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * A / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

/// exp(t a) with per-tag closed forms:
///  - X, A_k: hyperbolic rotation (boost) in the (0,k) plane,
///  - R_ij: planar rotation,
///  - U_i^pm: nilpotent of order 3, exp is I + tM + t^2 M^2 / 2 exactly,
///  - generic: scaling and squaring.
inline Mat exp_basis(const AlgebraElement& a, double t) {
  const int d = int(a.mat.rows());
  Mat M = a.mat.cast<double>();
  switch (a.tag) {
    case GenTag::X:
    case GenTag::A: {
      const int k = (a.tag == GenTag::X) ? 1 : a.i;
      Mat E = Mat::Identity(d, d);
      E(0, 0) = std::cosh(t);
      E(k, k) = std::cosh(t);
      E(0, k) = std::sinh(t);
      E(k, 0) = std::sinh(t);
      return E;
    }
    case GenTag::R: {
      Mat E = Mat::Identity(d, d);
      E(a.i, a.i) = std::cos(t);
      E(a.j, a.j) = std::cos(t);
      E(a.i, a.j) = std::sin(t);
      E(a.j, a.i) = -std::sin(t);
      return E;
    }
    case GenTag::UPlus:
    case GenTag::UMinus:
      return Mat::Identity(d, d) + t * M + 0.5 * t * t * (M * M);
    case GenTag::Generic:
      return expm_generic(t * M);
  }
  return expm_generic(t * M);  // unreachable
}

// ---------------------------------------------------------------------------
// Geodesic flow
// ---------------------------------------------------------------------------

/// phi_t(x, xi) = (x cosh t + xi sinh t, x sinh t + xi cosh t).
inline UnitTangent geodesic_flow(double t, const UnitTangent& rho) {
  const double c = std::cosh(t), s = std::sinh(t);
  return UnitTangent::make(c * rho.x + s * rho.xi, s * rho.x + c * rho.xi);
}

// ---------------------------------------------------------------------------
// Models of hyperbolic space
// ---------------------------------------------------------------------------

enum class Model { Hyperboloid, Ball, Halfspace };

struct ModelPoint {
  Model model;
  Vec coords;           // hyperboloid: (n+2); ball: (n+1), |y|<1; halfspace: (z0, z1..zn)
  bool near_boundary = false;  // flagged when |y| > 1 - 1e-12 in ball coordinates
};

/// psi: hyperboloid -> ball, y = x' / (x0 + 1).
inline Vec psi_ball(const Vec& x) { return x.tail(x.size() - 1) / (x[0] + 1.0); }

/// psi^{-1}: ball -> hyperboloid, x = (1+|y|^2, 2y) / (1-|y|^2).
inline Vec psi_ball_inv(const Vec& y) {
  const double r2 = y.squaredNorm();
  Vec x(y.size() + 1);
  x[0] = (1.0 + r2);
  x.tail(y.size()) = 2.0 * y;
  return x / (1.0 - r2);
}

/// psi_1: ball -> half-space, (z0, z) = (1-|y|^2, 2y') / (1 + |y|^2 - 2 y_1).
inline Vec psi_half(const Vec& y) {
  const double r2 = y.squaredNorm();
  const double den = 1.0 + r2 - 2.0 * y[0];
  Vec z(y.size());
  z[0] = 1.0 - r2;
  z.tail(y.size() - 1) = 2.0 * y.tail(y.size() - 1);
  return z / den;
}

/// psi_1^{-1}: half-space -> ball, y = (z0^2 + |z|^2 - 1, 2z) / ((1+z0)^2 + |z|^2).
inline Vec psi_half_inv(const Vec& zfull) {
  const double z0 = zfull[0];
  const Vec z = zfull.tail(zfull.size() - 1);
  const double den = (1.0 + z0) * (1.0 + z0) + z.squaredNorm();
  Vec y(zfull.size());
  y[0] = z0 * z0 + z.squaredNorm() - 1.0;
  y.tail(z.size()) = 2.0 * z;
  return y / den;
}

/// Geodesic boundary defining function rho0 = 2 (1-|y|)/(1+|y|) (ball coords).
inline double rho0(const ModelPoint& p);

/// Convert between the three models (identity when target == source).
inline ModelPoint model_convert(const ModelPoint& p, Model target) {
  if (p.model == target) return p;
  // Route through ball coordinates.
  Vec y;
  switch (p.model) {
    case Model::Ball: y = p.coords; break;
    case Model::Hyperboloid: y = psi_ball(p.coords); break;
    case Model::Halfspace: y = psi_half_inv(p.coords); break;
  }
  const bool flag = y.norm() > 1.0 - 1e-12;
  switch (target) {
    case Model::Ball: return {Model::Ball, y, flag};
    case Model::Hyperboloid: return {Model::Hyperboloid, psi_ball_inv(y), flag};
    case Model::Halfspace: return {Model::Halfspace, psi_half(y), flag};
  }
  throw std::logic_error("model_convert: unreachable");
}

inline double rho0(const ModelPoint& p) {
  const Vec y = model_convert(p, Model::Ball).coords;
  const double r = y.norm();
  return 2.0 * (1.0 - r) / (1.0 + r);
}

// ---------------------------------------------------------------------------
// Conformal boundary
// ---------------------------------------------------------------------------

/// x +- xi = Phi_pm (1, B_pm): endpoint data of the geodesic through (x,xi).
struct BoundaryMaps {
  double phi_minus, phi_plus;
  Vec b_minus, b_plus;  // unit (n+1)-vectors on S^n
};

inline BoundaryMaps boundary_maps(const UnitTangent& rho) {
  BoundaryMaps out;
  const Vec plus = rho.x + rho.xi;
  const Vec minus = rho.x - rho.xi;
  out.phi_plus = plus[0];
  out.phi_minus = minus[0];
  out.b_plus = plus.tail(plus.size() - 1) / plus[0];
  out.b_minus = minus.tail(minus.size() - 1) / minus[0];
  return out;
}

/// Poisson kernel P(x, nu) = (x0 - x' . nu)^{-1}.
inline double poisson_kernel(const Vec& x, const Vec& nu) {
  return 1.0 / (x[0] - x.tail(x.size() - 1).dot(nu));
}

/// xi_pm(x, nu) = -+ x +- P(x,nu) (1, nu): the unit tangent at x pointing to
/// (sign=+1) or away from (sign=-1) the boundary point nu.
inline UnitTangent xi_pm(const Vec& x, const Vec& nu, int sign) {
  const double P = poisson_kernel(x, nu);
  Vec onenu(x.size());
  onenu[0] = 1.0;
  onenu.tail(nu.size()) = nu;
  const Vec xi = (sign > 0) ? Vec(-x + P * onenu) : Vec(x - P * onenu);
  return UnitTangent::make(x, xi);
}

/// gamma . (1, nu) = N_gamma(nu) (1, L_gamma(nu)): conformal boundary action.
struct BoundaryAction {
  double N;
  Vec L;
};

inline BoundaryAction boundary_action(const Mat& gamma, const Vec& nu) {
  Vec onenu(gamma.rows());
  onenu[0] = 1.0;
  onenu.tail(nu.size()) = nu;
  const Vec img = gamma * onenu;
  return {img[0], img.tail(nu.size()) / img[0]};
}

/// Group action on the unit tangent bundle.
inline UnitTangent act(const Mat& gamma, const UnitTangent& rho) {
  return UnitTangent::make(gamma * rho.x, gamma * rho.xi);
}

// ---------------------------------------------------------------------------
// PSL(2,R) -> PSO(1,2)  (n = 1 only)
// ---------------------------------------------------------------------------

/// The explicit 3x3 image of [[a,b],[c,d]], ad - bc = 1.
inline Mat psl2_embed(double a, double b, double c, double d) {
  if (std::abs(a * d - b * c - 1.0) > 1e-12)
    throw std::invalid_argument("psl2_embed: input not unimodular");
  Mat M(3, 3);
  M << (a * a + b * b + c * c + d * d) / 2, (a * a - b * b + c * c - d * d) / 2, -a * b - c * d,
      (a * a + b * b - c * c - d * d) / 2, (a * a - b * b - c * c + d * d) / 2, c * d - a * b,
      -a * c - b * d, b * d - a * c, a * d + b * c;
  return M;
}

// ---------------------------------------------------------------------------
// Sections of pi_S: frames
// ---------------------------------------------------------------------------

/// Some gamma in G with gamma e0 = x, gamma e1 = xi; columns 2..n+1 complete
/// a Minkowski-orthonormal spacelike frame of the orthogonal complement via
/// Gram-Schmidt seeded by e2, ..., e_{n+1} (deterministic, non-canonical).
inline Mat frame_at(const UnitTangent& rho) {
  const int d = int(rho.x.size());
  Mat M(d, d);
  M.col(0) = rho.x;
  M.col(1) = rho.xi;
  int col = 2;
  // Seeds: canonical basis vectors, permuted on degeneracy.
  for (int seed = 0; seed < d && col < d; ++seed) {
    Vec v = Vec::Zero(d);
    v[(seed + 2) % d] = 1.0;
    // Minkowski Gram-Schmidt against existing columns (x timelike, rest spacelike).
    v -= minkowski_inner(v, M.col(0)) * M.col(0);
    for (int k = 1; k < col; ++k) v += minkowski_inner(v, M.col(k)) * M.col(k);
    const double nn = -minkowski_inner(v, v);
    if (nn < 1e-12) continue;  // degenerate seed, skip
    M.col(col++) = v / std::sqrt(nn);
  }
  if (col < d) throw std::runtime_error("frame_at: Gram-Schmidt failed");
  if (M.determinant() < 0.0) M.col(d - 1) *= -1.0;  // land in SO(1,n+1)
  return M;
}

}  // namespace reso
