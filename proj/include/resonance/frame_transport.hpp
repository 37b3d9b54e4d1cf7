// The vector bundle E over the unit tangent bundle of hyperbolic space:
// fibers E(x,xi) = { eta : eta perp_M x, xi }, the stable/unstable splitting
// of the tangent space with the geodesic-flow contraction, the transport
// maps A_pm between boundary tangent spaces and E-fibers, boundary tensor
// pullbacks Q_pm, the twist C_eta, and the pairing change of variables Psi
// with its Jacobian 2^n (1+|eta|^2)^{-n}.

#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "resonance/lorentz.hpp"
#include "resonance/sym_tensor.hpp"

namespace reso {

// ---------------------------------------------------------------------------
// E-fiber bases
// ---------------------------------------------------------------------------

/// A Riemannian-orthonormal basis of E(x,xi), taken from the completion
/// frame at rho (columns 2..n+1 of frame_at).
struct EFiberBasis {
  UnitTangent base;
  Mat vectors;  // (n+2) x n, columns span E(rho), g_H-orthonormal

  int n() const { return int(vectors.cols()); }

  /// Fiber coordinates of an ambient vector u in E(rho):
  /// c_i = -<u, e_i>_M (the Riemannian inner product on E).
  Vec coords(const Vec& u) const {
    Vec c(n());
    for (int i = 0; i < n(); ++i) c[i] = -minkowski_inner(u, vectors.col(i));
    return c;
  }
  Vec ambient(const Vec& c) const { return vectors * c; }
};

inline EFiberBasis fiber_basis(const UnitTangent& rho) {
  const Mat F = frame_at(rho);
  EFiberBasis b;
  b.base = rho;
  b.vectors = F.rightCols(F.cols() - 2);
  return b;
}

/// Riemannian inner product on E (and on tangent spaces of the hyperboloid):
/// the negative of the Minkowski form restricted to spacelike directions.
inline double fiber_inner(const Vec& u, const Vec& v) { return -minkowski_inner(u, v); }

// ---------------------------------------------------------------------------
// Stable/unstable splitting
// ---------------------------------------------------------------------------

/// Tangent vector to S H^{n+1} at rho, as a pair (v_x, v_xi) of ambient
/// Minkowski vectors.
using TangentPair = std::pair<Vec, Vec>;

struct SplitBasis {
  UnitTangent base;
  TangentPair E0;               // flow direction (xi, x)
  std::vector<TangentPair> Es;  // stable: (v, -v), v in E(rho)
  std::vector<TangentPair> Eu;  // unstable: (v, v)
};

inline SplitBasis stable_unstable(const UnitTangent& rho) {
  const EFiberBasis fib = fiber_basis(rho);
  SplitBasis out;
  out.base = rho;
  out.E0 = {rho.xi, rho.x};
  for (int i = 0; i < fib.n(); ++i) {
    const Vec v = fib.vectors.col(i);
    out.Es.push_back({v, -v});
    out.Eu.push_back({v, v});
  }
  return out;
}

/// d(phi_t) in ambient coordinates: the flow is linear, so its differential
/// acts by the same hyperbolic rotation on each slot pair.
inline TangentPair flow_push(const UnitTangent&, double t, const TangentPair& w) {
  const double c = std::cosh(t), s = std::sinh(t);
  return {w.first * c + w.second * s, w.first * s + w.second * c};
}

/// Sasaki-type norm of a tangent pair with spacelike slots.
inline double tangent_pair_norm(const TangentPair& w) {
  return std::sqrt(fiber_inner(w.first, w.first) + fiber_inner(w.second, w.second));
}

// ---------------------------------------------------------------------------
// Transport maps A_pm
// ---------------------------------------------------------------------------

/// A_pm(rho) zeta = (0,zeta) - <(0,zeta), x>_M (x pm xi), for zeta tangent to
/// the sphere at B_pm(rho).  Non-tangent zeta is projected; `corrected` (if
/// given) reports whether the projection moved zeta by more than 1e-8.
inline Vec transport_A(const UnitTangent& rho, int sign, Vec zeta, bool* corrected = nullptr) {
  const auto bm = boundary_maps(rho);
  const Vec& B = (sign > 0) ? bm.b_plus : bm.b_minus;
  const double drift = zeta.dot(B);
  if (corrected) *corrected = std::abs(drift) > 1e-8;
  zeta -= drift * B;
  const int d = int(rho.x.size());
  Vec lift = Vec::Zero(d);
  lift.tail(d - 1) = zeta;
  const double ip = minkowski_inner(lift, rho.x);
  return lift - ip * (rho.x + double(sign) * rho.xi);
}

/// Inverse transport: u |-> u' - u_0 B_pm(rho).  Defined on all ambient
/// vectors (this extension is what the boundary pairing uses).
inline Vec transport_A_inv(const UnitTangent& rho, int sign, const Vec& u) {
  const auto bm = boundary_maps(rho);
  const Vec& B = (sign > 0) ? bm.b_plus : bm.b_minus;
  return u.tail(u.size() - 1) - u[0] * B;
}

// ---------------------------------------------------------------------------
// Boundary pullback Q_pm
// ---------------------------------------------------------------------------

/// A boundary field of symmetric m-tensors on S^n: callable on a point nu
/// and a list of m tangent vectors at nu.
using BoundaryTensorField =
    std::function<double(const Vec& nu, const std::vector<Vec>& tangents)>;

/// (Q_pm w)(eta_1,...,eta_m) = w(B_pm(rho))(A_pm^{-1} eta_1, ...), expressed
/// in the fiber basis at rho.
inline SymTensor<double> pullback_Q(int m, const BoundaryTensorField& w, int sign,
                                    const UnitTangent& rho) {
  const EFiberBasis fib = fiber_basis(rho);
  const auto bm = boundary_maps(rho);
  const Vec& B = (sign > 0) ? bm.b_plus : bm.b_minus;
  SymTensor<double> out(std::max(fib.n(), 1), m);
  std::vector<Vec> pulled(fib.n());
  for (int i = 0; i < fib.n(); ++i)
    pulled[i] = transport_A_inv(rho, sign, Vec(fib.vectors.col(i)));
  for (const auto& K : out.indices()) {
    std::vector<Vec> args;
    args.reserve(m);
    for (int k : K) args.push_back(pulled[k]);
    out.at(K) = w(B, args);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The twist C_eta
// ---------------------------------------------------------------------------

/// C_eta as a matrix in fiber coordinates:
/// C_eta(v) = v - (2 / (1 + |eta|^2)) (v . eta) eta.
inline Mat eta_twist_C(const Vec& eta_coords) {
  const int n = int(eta_coords.size());
  const double s = eta_coords.squaredNorm();
  return Mat::Identity(n, n) - (2.0 / (1.0 + s)) * eta_coords * eta_coords.transpose();
}

/// Pullback of a symmetric m-tensor under a linear map M on the fiber:
/// (M* u)(v_1,...,v_m) = u(M v_1, ..., M v_m).
inline SymTensor<double> tensor_pullback(const SymTensor<double>& u, const Mat& M) {
  const int N = u.dim(), m = u.order();
  SymTensor<double> out(N, m);
  for (const auto& K : out.indices()) {
    std::vector<std::vector<double>> args;
    args.reserve(m);
    for (int k : K) {
      std::vector<double> col(N);
      for (int r = 0; r < N; ++r) col[r] = M(r, k);
      args.push_back(std::move(col));
    }
    out.at(K) = u.eval(args);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The change of variables Psi
// ---------------------------------------------------------------------------

struct PsiImage {
  Vec y;          // hyperboloid point
  Vec eta_minus;  // unit tangent at y
  Vec eta_plus;   // unit tangent at y
};

/// Raw formula: applies the 3x3 block matrix A(s), s = |eta|^2 (Riemannian).
inline PsiImage psi_map(const UnitTangent& rho, const Vec& eta) {
  const double s = fiber_inner(eta, eta);
  const double rt = std::sqrt(s + 1.0);
  PsiImage im;
  im.y = rt * rho.x + eta;
  im.eta_minus = (s / rt) * rho.x + (1.0 / rt) * rho.xi + eta;
  im.eta_plus = -(s / rt) * rho.x + (1.0 / rt) * rho.xi - eta;
  return im;
}

/// Inverse of Psi; rejects the singular set |eta_+ + eta_-| < 1e-8.
inline std::pair<UnitTangent, Vec> psi_inv(const PsiImage& im) {
  const Vec sum = im.eta_plus + im.eta_minus;
  const double D = std::sqrt(std::max(fiber_inner(sum, sum), 0.0));
  if (D < 1e-8)
    throw std::domain_error("psi_inv: eta_+ + eta_- too close to the singular set");
  const Vec diff = im.eta_plus - im.eta_minus;
  UnitTangent rho;
  rho.x = (2.0 * im.y + diff) / D;
  rho.xi = sum / D;
  const Vec eta = (-2.0 * diff - fiber_inner(diff, diff) * im.y) / (D * D);
  return {rho, eta};
}

namespace detail {

/// Central-difference image of a curve (x,xi,eta) + t*dir under the raw Psi
/// formula, flattened into one long vector (y, eta_-, eta_+).
inline Vec psi_directional(const Vec& x, const Vec& xi, const Vec& eta,
                           const Vec& dx, const Vec& dxi, const Vec& deta, double h) {
  auto flat = [](const PsiImage& im) {
    const int d = int(im.y.size());
    Vec out(3 * d);
    out.segment(0, d) = im.y;
    out.segment(d, d) = im.eta_minus;
    out.segment(2 * d, d) = im.eta_plus;
    return out;
  };
  auto raw = [&](double t) {
    UnitTangent rho;
    rho.x = x + t * dx;
    rho.xi = xi + t * dxi;
    return flat(psi_map(rho, eta + t * deta));
  };
  return (raw(h) - raw(-h)) / (2.0 * h);
}

}  // namespace detail

/// Numerical Jacobian of Psi relative to the natural volume-1 frames.  By
/// equivariance the value depends only on s = |eta|^2, so the computation is
/// done at the standard configuration x = e0, xi = e1, eta = sqrt(s) e2.
inline double jacobian_psi(const UnitTangent& rho, const Vec& eta) {
  const int n = int(rho.x.size()) - 2;
  const double s = fiber_inner(eta, eta);
  const double rs = std::sqrt(s), rt = std::sqrt(s + 1.0);
  const int d = n + 2;
  auto unit = [&](int i) {
    Vec e = Vec::Zero(d);
    e[i] = 1.0;
    return e;
  };
  const Vec x = unit(0), xi = unit(1), et = rs * unit(2);
  // Domain frame (volume 1): X1..X4 mixing slots 0..2, then coordinate
  // triples in slots j = 3..n+1.
  struct Dir {
    Vec dx, dxi, deta;
  };
  std::vector<Dir> dirs;
  const Vec z = Vec::Zero(d);
  dirs.push_back({unit(1), unit(0), z});                 // X1
  dirs.push_back({unit(2), z, rs * unit(0)});            // X2
  dirs.push_back({z, unit(2), -rs * unit(1)});           // X3
  dirs.push_back({z, z, unit(2)});                       // X4
  for (int j = 3; j <= n + 1; ++j) {
    dirs.push_back({unit(j), z, z});
    dirs.push_back({z, unit(j), z});
    dirs.push_back({z, z, unit(j)});
  }
  // Range frame (volume 1): Y1..Y4 and coordinate triples.
  Vec y(d), em(d), ep(d);
  y.setZero();
  em.setZero();
  ep.setZero();
  y[0] = rt;
  y[2] = rs;
  em[0] = s / rt;
  em[1] = 1.0 / rt;
  em[2] = rs;
  ep[0] = -s / rt;
  ep[1] = 1.0 / rt;
  ep[2] = -rs;
  auto pack = [&](const Vec& a, const Vec& b, const Vec& c) {
    Vec out(3 * d);
    out.segment(0, d) = a;
    out.segment(d, d) = b;
    out.segment(2 * d, d) = c;
    return out;
  };
  std::vector<Vec> range;
  range.push_back(pack(unit(1), y / rt, y / rt));                                   // Y1
  range.push_back(pack(rs * unit(0) + rt * unit(2), (rs / rt) * y, -(rs / rt) * y));  // Y2
  range.push_back(pack(z, (rs * unit(0) - rs * unit(1) + rt * unit(2)) / rt, z));   // Y3
  range.push_back(pack(z, z, (rs * unit(0) + rs * unit(1) + rt * unit(2)) / rt));   // Y4
  for (int j = 3; j <= n + 1; ++j) {
    range.push_back(pack(unit(j), z, z));
    range.push_back(pack(z, unit(j), z));
    range.push_back(pack(z, z, unit(j)));
  }
  const int dim = int(dirs.size());
  Mat Y(3 * d, dim), D(3 * d, dim);
  for (int i = 0; i < dim; ++i) {
    Y.col(i) = range[i];
    D.col(i) = detail::psi_directional(x, xi, et, dirs[i].dx, dirs[i].dxi, dirs[i].deta, 1e-5);
  }
  const Mat C = Y.colPivHouseholderQr().solve(D);
  return std::abs(C.determinant());
}

/// Closed form 2^n (1 + |eta|^2)^{-n}.
inline double jacobian_psi_closed(int n, double eta_norm_sq) {
  return std::pow(2.0, n) * std::pow(1.0 + eta_norm_sq, -double(n));
}

// ---------------------------------------------------------------------------
// Conformal boundary differential (exact), used by equivariance tests
// ---------------------------------------------------------------------------

/// d L_gamma at nu applied to a tangent vector zeta (zeta . nu = 0):
/// differentiating L = (gamma(1,nu))' / (gamma(1,nu))_0 gives
/// dL zeta = ((gamma(0,zeta))' - (gamma(0,zeta))_0 L(nu)) / N_gamma(nu).
inline Vec boundary_differential(const Mat& gamma, const Vec& nu, const Vec& zeta) {
  const int d = int(gamma.rows());
  Vec lift = Vec::Zero(d);
  lift.tail(d - 1) = zeta;
  const Vec g = gamma * lift;
  const auto act = boundary_action(gamma, nu);
  return (g.tail(d - 1) - g[0] * act.L) / act.N;
}

}  // namespace reso
