// Poisson operator on boundary tensor fields: quadrature form over the
// boundary sphere, the closed-form image of delta data in the half-space
// chart, symbolic component formulas for the Laplacian and divergence of
// half-space sections (an exactness oracle), indicial roots, and the
// boundary leading constant.
//
// Half-space conventions: coordinates (z_0, z) with z = (z_1,...,z_n),
// orthonormal 0-frame Z_i = z_0 d/dz_i (i = 0..n) with dual Z_i^*.  The
// scalar Laplacian is Delta = n Z_0 - sum_{i=0}^n Z_i^2, normalized so that
// Delta z_0^s = s(n-s) z_0^s.
//
// Symmetric E_0/E_1 components are manipulated through their generating
// polynomials: a family {f_I} over I in {1..n}^m corresponds to
// p(x) = sum_I f_I x_I, which identifies the component tensor uniquely.

#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "frame_transport.hpp"
#include "gamma.hpp"
#include "lorentz.hpp"
#include "quadrature.hpp"
#include "sym_tensor.hpp"

namespace reso {

// ---------------------------------------------------------------------------
// Boundary tensor fields on S^n
// ---------------------------------------------------------------------------

/// Smooth symmetric m-cotensor field on S^n in ambient representation:
/// value(nu) has dim n+1 and every slot annihilates nu.
struct SphereField {
  int n = 0;
  int m = 0;
  std::function<SymTensor<cplx>(const Vec& nu)> value;
};

/// Max absolute component of iota_nu w(nu); 0 for scalars.
inline double tangency_defect(const SphereField& w, const Vec& nu) {
  if (w.m == 0) return 0.0;
  const SymTensor<cplx> t = w.value(nu);
  std::vector<cplx> nuv(nu.size());
  for (int i = 0; i < nu.size(); ++i) nuv[i] = nu[i];
  const SymTensor<cplx> c = t.contract(nuv);
  double mx = 0.0;
  for (size_t i = 0; i < c.size(); ++i) mx = std::max(mx, std::abs(c.raw(i)));
  return mx;
}

// ---------------------------------------------------------------------------
// Poisson operator by quadrature
// ---------------------------------------------------------------------------

struct QuadSpec {
  int order = -1;         // initial order per angle; -1 = default_quad_order()
  double tol = 1e-10;     // agreement tolerance between successive levels
  int max_doublings = 3;  // levels tried: order, 2*order, ..., order*2^max
};

struct PoissonResult {
  SymTensor<cplx> value{1, 0};  // ambient Minkowski components on T_x H^{n+1}
  double quad_error = 0.0;      // disagreement of the last two levels
  bool converged = false;
  bool warning = false;
  std::string note;
};

namespace detail {

/// One quadrature level of P^-_lambda (sign=-1) or P^+_lambda (sign=+1).
/// The integrand covectors live on the fiber E(x, xi_sign(x,nu)) and are
/// extended by zero on the flow line, then expressed in ambient coordinates
/// (each slot annihilates x and the local xi).
inline SymTensor<cplx> poisson_level(const cplx& lambda, const SphereField& w, const Vec& x,
                                     int sign, int order, double* max_log_kernel) {
  const int n = w.n, m = w.m, d = n + 2;
  SymTensor<cplx> out(d, m);
  const cplx expo = cplx(double(n), 0.0) + (sign < 0 ? lambda : std::conj(lambda));
  double mlk = 0.0;
  for (const auto& node : sphere_quadrature(n, order)) {
    const double P = poisson_kernel(x, node.nu);
    const cplx kern = std::pow(cplx(P, 0.0), expo) * node.weight;
    mlk = std::max(mlk, std::abs(std::log(P)));
    if (m == 0) {
      out.raw(0) += kern * w.value(node.nu).raw(0);
      continue;
    }
    const UnitTangent rho = xi_pm(x, node.nu, sign);
    // Pulled boundary vectors of the ambient coordinate directions:
    // project onto T_x, drop the xi component, then map through A^{-1}.
    std::vector<std::vector<cplx>> t(d);
    for (int a = 0; a < d; ++a) {
      Vec e = Vec::Zero(d);
      e[a] = 1.0;
      Vec v = e - minkowski_inner(e, x) * x;
      v += minkowski_inner(v, rho.xi) * rho.xi;
      const Vec ta = transport_A_inv(rho, sign, v);
      std::vector<cplx> tc(ta.size());
      for (int i = 0; i < ta.size(); ++i) tc[i] = ta[i];
      t[a] = std::move(tc);
    }
    const SymTensor<cplx> wt = w.value(node.nu);
    for (const auto& K : out.indices()) {
      std::vector<std::vector<cplx>> args;
      args.reserve(m);
      for (int k : K) args.push_back(t[k]);
      out.at(K) += kern * wt.eval(args);
    }
  }
  if (max_log_kernel) *max_log_kernel = mlk;
  return out;
}

inline double max_abs_diff(const SymTensor<cplx>& a, const SymTensor<cplx>& b) {
  double mx = 0.0;
  for (size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::abs(a.raw(i) - b.raw(i)));
  return mx;
}

}  // namespace detail

/// P^sign_lambda w (x) = int_{S^n} P(x,nu)^{n+lambda'} (tensor^m A^{-T}) w(nu) dS(nu)
/// with lambda' = lambda for sign=-1 and conj(lambda) for sign=+1.  Adaptive
/// order doubling until two successive levels agree to quad.tol.
inline PoissonResult poisson_apply(const cplx& lambda, const SphereField& w, const Vec& x,
                                   int sign = -1, QuadSpec quad = {}) {
  PoissonResult res;
  int order = quad.order > 0 ? quad.order : default_quad_order();
  double mlk = 0.0;
  SymTensor<cplx> prev = detail::poisson_level(lambda, w, x, sign, order, &mlk);
  const cplx expo = cplx(double(w.n), 0.0) + (sign < 0 ? lambda : std::conj(lambda));
  if (std::abs(expo.real()) * mlk > 30.0) {
    res.warning = true;
    res.note = "divergent-looking integrand: |Re(n+lambda)| * max|log P| > 30";
  }
  for (int level = 1; level <= quad.max_doublings; ++level) {
    order *= 2;
    SymTensor<cplx> next = detail::poisson_level(lambda, w, x, sign, order, nullptr);
    double scale = 0.0;
    for (size_t i = 0; i < next.size(); ++i) scale = std::max(scale, std::abs(next.raw(i)));
    res.quad_error = detail::max_abs_diff(prev, next);
    prev = std::move(next);
    if (res.quad_error <= quad.tol * std::max(1.0, scale)) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged) {
    res.warning = true;
    if (!res.note.empty()) res.note += "; ";
    res.note += "quadrature did not reach tolerance; error estimate reported";
  }
  res.value = std::move(prev);
  return res;
}

// ---------------------------------------------------------------------------
// Closed-form image of boundary delta data
// ---------------------------------------------------------------------------

/// Image of the delta function at the chart pole (the boundary point sent to
/// infinity in the half-space chart) with covector word J = (j_1..j_m),
/// entries in 1..n: the tensor z_0^{n+lambda} Z*_{j_1} (x) ... (x) Z*_{j_m}.
struct DeltaImage {
  int n = 0;
  cplx lambda{0.0, 0.0};
  MIndex J;  // entries in 1..n

  int m() const { return int(J.size()); }

  /// z_0^{n+lambda} at a half-space point (z_0, z).
  cplx amplitude(const Vec& zfull) const {
    return std::pow(cplx(zfull[0], 0.0), cplx(double(n), 0.0) + lambda);
  }

  /// Symmetric part amplitude * S(Z*_J), as components over Z_0..Z_n
  /// (component at the sorted multiset J equals amplitude * prod(mult!)/m!).
  SymTensor<cplx> sym_component(const Vec& zfull) const {
    SymTensor<cplx> out(n + 1, m());
    MIndex K = J;
    std::sort(K.begin(), K.end());
    double w = 1.0;
    int run = 1;
    for (size_t i = 1; i <= K.size(); ++i) {
      if (i < K.size() && K[i] == K[i - 1]) {
        w *= ++run;
      } else {
        run = 1;
      }
    }
    double fact = 1.0;
    for (int i = 2; i <= m(); ++i) fact *= i;
    if (m() > 0)
      out.at(K) = amplitude(zfull) * (w / fact);
    else
      out.raw(0) = amplitude(zfull);
    return out;
  }
};

inline DeltaImage poisson_delta(const cplx& lambda, int n, MIndex J) {
  for (int j : J)
    if (j < 1 || j > n) throw std::invalid_argument("poisson_delta: index out of range");
  return DeltaImage{n, lambda, std::move(J)};
}

// ---------------------------------------------------------------------------
// Symbolic half-space functions: spans of c * z^alpha * z_0^s
// ---------------------------------------------------------------------------

namespace zsym {

struct ZKey {
  double sr = 0.0, si = 0.0;    // complex z_0 exponent
  std::vector<int> alpha;       // exponents of z_1..z_n
  bool operator<(const ZKey& o) const {
    if (sr != o.sr) return sr < o.sr;
    if (si != o.si) return si < o.si;
    return alpha < o.alpha;
  }
};

/// Finite span of c * z_0^s * prod z_i^{alpha_i}; all manipulations shift s
/// by integers, so exponents compare exactly.
class ZPoly {
 public:
  std::map<ZKey, cplx> terms;

  static ZPoly monomial(const cplx& s, std::vector<int> alpha, const cplx& c) {
    ZPoly p;
    if (c != cplx(0.0)) p.terms[{s.real(), s.imag(), std::move(alpha)}] = c;
    return p;
  }

  bool empty() const { return terms.empty(); }

  ZPoly& operator+=(const ZPoly& o) {
    for (const auto& [k, c] : o.terms) {
      auto& v = terms[k];
      v += c;
      if (v == cplx(0.0)) terms.erase(k);
    }
    return *this;
  }
  ZPoly& operator-=(const ZPoly& o) {
    ZPoly neg = o;
    for (auto& [k, c] : neg.terms) c = -c;
    return *this += neg;
  }
  ZPoly& operator*=(const cplx& a) {
    if (a == cplx(0.0)) {
      terms.clear();
      return *this;
    }
    for (auto& [k, c] : terms) c *= a;
    return *this;
  }
  friend ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
  friend ZPoly operator-(ZPoly a, const ZPoly& b) { return a -= b; }
  friend ZPoly operator*(ZPoly a, const cplx& c) { return a *= c; }
  friend ZPoly operator*(const cplx& c, ZPoly a) { return a *= c; }

  cplx eval(double z0, const Vec& z) const {
    cplx s(0.0);
    for (const auto& [k, c] : terms) {
      cplx t = c * std::pow(cplx(z0, 0.0), cplx(k.sr, k.si));
      for (size_t i = 0; i < k.alpha.size(); ++i)
        for (int q = 0; q < k.alpha[i]; ++q) t *= z[int(i)];
      s += t;
    }
    return s;
  }

  double max_coeff_dist(const ZPoly& o) const {
    double mx = 0.0;
    ZPoly d = *this;
    d -= o;
    for (const auto& [k, c] : d.terms) mx = std::max(mx, std::abs(c));
    return mx;
  }
};

/// Z_i f: i=0 is z_0 d/dz_0 (multiplies each term by its exponent),
/// i>=1 is z_0 d/dz_i (lowers alpha_i, raises the z_0 exponent).
inline ZPoly zd(const ZPoly& p, int i) {
  ZPoly out;
  for (const auto& [k, c] : p.terms) {
    if (i == 0) {
      const cplx v = c * cplx(k.sr, k.si);
      if (v != cplx(0.0)) out += ZPoly::monomial({k.sr, k.si}, k.alpha, v);
    } else {
      const size_t j = size_t(i - 1);
      if (j < k.alpha.size() && k.alpha[j] > 0) {
        auto a = k.alpha;
        a[j] -= 1;
        out += ZPoly::monomial({k.sr + 1.0, k.si}, std::move(a), c * double(k.alpha[j]));
      }
    }
  }
  return out;
}

/// Hyperbolic scalar Laplacian Delta = n Z_0 - sum_{i=0}^n Z_i^2.
inline ZPoly zlaplace(const ZPoly& p, int n) {
  ZPoly out = double(n) * zd(p, 0);
  for (int i = 0; i <= n; ++i) out -= zd(zd(p, i), i);
  return out;
}

/// Homogeneous polynomial in x_1..x_n with ZPoly coefficients.
struct XZPoly {
  int n = 0, deg = 0;
  std::map<std::vector<int>, ZPoly> c;  // exponent vectors, total degree = deg

  static XZPoly zero(int n_, int deg_) { return XZPoly{n_, std::max(deg_, 0), {}}; }

  void add(const std::vector<int>& alpha, const ZPoly& p) {
    if (p.empty()) return;
    auto& v = c[alpha];
    v += p;
    if (v.empty()) c.erase(alpha);
  }
  bool empty() const { return c.empty(); }

  XZPoly& operator+=(const XZPoly& o) {
    for (const auto& [a, p] : o.c) add(a, p);
    return *this;
  }
  XZPoly& operator-=(const XZPoly& o) {
    for (const auto& [a, p] : o.c) add(a, cplx(-1.0) * p);
    return *this;
  }
  XZPoly& operator*=(const cplx& s) {
    for (auto& [a, p] : c) p *= s;
    if (s == cplx(0.0)) c.clear();
    return *this;
  }
  friend XZPoly operator*(XZPoly a, const cplx& s) { return a *= s; }
  friend XZPoly operator*(const cplx& s, XZPoly a) { return a *= s; }

  double max_coeff_dist(const XZPoly& o) const {
    XZPoly d = *this;
    d -= o;
    double mx = 0.0;
    for (const auto& [a, p] : d.c)
      mx = std::max(mx, p.max_coeff_dist(ZPoly{}));
    return mx;
  }
};

inline XZPoly xz_map(const XZPoly& p, const std::function<ZPoly(const ZPoly&)>& f) {
  XZPoly out = XZPoly::zero(p.n, p.deg);
  for (const auto& [a, q] : p.c) out.add(a, f(q));
  return out;
}

/// d/dx_j (j in 1..n).
inline XZPoly xz_dx(const XZPoly& p, int j) {
  XZPoly out = XZPoly::zero(p.n, p.deg - 1);
  for (const auto& [a, q] : p.c) {
    if (a[j - 1] == 0) continue;
    auto b = a;
    b[j - 1] -= 1;
    out.add(b, double(a[j - 1]) * q);
  }
  return out;
}

/// Multiplication by x_j.
inline XZPoly xz_mulx(const XZPoly& p, int j) {
  XZPoly out = XZPoly::zero(p.n, p.deg + 1);
  for (const auto& [a, q] : p.c) {
    auto b = a;
    b[j - 1] += 1;
    out.add(b, q);
  }
  return out;
}

inline XZPoly xz_lapx(const XZPoly& p) {
  XZPoly out = XZPoly::zero(p.n, p.deg - 2);
  for (int j = 1; j <= p.n; ++j) out += xz_dx(xz_dx(p, j), j);
  return out;
}

inline XZPoly xz_r2(const XZPoly& p) {
  XZPoly out = XZPoly::zero(p.n, p.deg + 2);
  for (int j = 1; j <= p.n; ++j) out += xz_mulx(xz_mulx(p, j), j);
  return out;
}

/// sum_j x_j Z_j p (Z_j on coefficients).
inline XZPoly xz_sum_xZ(const XZPoly& p) {
  XZPoly out = XZPoly::zero(p.n, p.deg + 1);
  for (int j = 1; j <= p.n; ++j)
    out += xz_mulx(xz_map(p, [j](const ZPoly& q) { return zd(q, j); }), j);
  return out;
}

/// sum_j Z_j d/dx_j p.
inline XZPoly xz_sum_Zdx(const XZPoly& p) {
  XZPoly out = XZPoly::zero(p.n, p.deg - 1);
  for (int j = 1; j <= p.n; ++j)
    out += xz_map(xz_dx(p, j), [j](const ZPoly& q) { return zd(q, j); });
  return out;
}

}  // namespace zsym

// ---------------------------------------------------------------------------
// Half-space sections and the component formulas
// ---------------------------------------------------------------------------

/// Trace-free symmetric m-tensor on the half-space, determined by its E_0 and
/// E_1 components, stored as generating polynomials:
///   p0(x) = sum_{I in {1..n}^m} f_I x_I,   p1(x) = sum_{J} g_J x_J.
struct HalfspaceSection {
  int n = 0, m = 0;
  zsym::XZPoly p0, p1;

  HalfspaceSection(int n_, int m_)
      : n(n_), m(m_), p0(zsym::XZPoly::zero(n_, m_)), p1(zsym::XZPoly::zero(n_, m_ - 1)) {}

  static std::vector<int> exponent(int n, const std::vector<int>& I) {
    std::vector<int> e(n, 0);
    for (int j : I) {
      if (j < 1 || j > n) throw std::invalid_argument("HalfspaceSection: index out of range");
      ++e[j - 1];
    }
    return e;
  }
  static double orderings(const std::vector<int>& e, int m) {
    double v = 1.0;
    for (int k = 2; k <= m; ++k) v *= k;
    for (int q : e)
      for (int k = 2; k <= q; ++k) v /= k;
    return v;
  }

  /// Add the symmetric-family coefficient f_I (I an unordered multiset).
  void add_f(const std::vector<int>& I, const zsym::ZPoly& f) {
    if (int(I.size()) != m) throw std::invalid_argument("add_f: wrong order");
    auto e = exponent(n, I);
    p0.add(e, orderings(e, m) * cplx(1.0) * f);
  }
  void add_g(const std::vector<int>& J, const zsym::ZPoly& g) {
    if (int(J.size()) != m - 1) throw std::invalid_argument("add_g: wrong order");
    auto e = exponent(n, J);
    p1.add(e, orderings(e, m - 1) * cplx(1.0) * g);
  }
};

/// E_0/E_1 projections of Delta u and div u = nabla* u, as generating
/// polynomials over the output orders (m, m-1, m-1, m-2 respectively).
struct HalfspaceDivDelta {
  zsym::XZPoly pi0_delta, pi1_delta, pi0_div, pi1_div;
};

inline HalfspaceDivDelta halfspace_delta_div(const HalfspaceSection& u) {
  using namespace zsym;
  const int n = u.n, m = u.m;
  auto lap = [n](const ZPoly& q) { return zlaplace(q, n); };
  auto z0 = [](const ZPoly& q) { return zd(q, 0); };
  HalfspaceDivDelta out;

  // pi_0(Delta u) = (Delta + m) p0 + 2 sum_i x_i Z_i p1 + |x|^2 Lap_x p0.
  out.pi0_delta = xz_map(u.p0, lap);
  out.pi0_delta += double(m) * u.p0;
  out.pi0_delta += 2.0 * xz_sum_xZ(u.p1);
  out.pi0_delta += xz_r2(xz_lapx(u.p0));

  if (m == 0) {
    out.pi1_delta = XZPoly::zero(n, 0);
    out.pi0_div = XZPoly::zero(n, 0);
    out.pi1_div = XZPoly::zero(n, 0);
    return out;
  }

  // pi_1(Delta u) = (Delta + n + 3(m-1)) p1 - 2 sum_j Z_j dx_j p0
  //                 + |x|^2 Lap_x p1 - 2 sum_j x_j Z_j Lap_x p0.
  out.pi1_delta = xz_map(u.p1, lap);
  out.pi1_delta += double(n + 3 * (m - 1)) * u.p1;
  out.pi1_delta -= 2.0 * xz_sum_Zdx(u.p0);
  out.pi1_delta += xz_r2(xz_lapx(u.p1));
  out.pi1_delta -= 2.0 * xz_sum_xZ(xz_lapx(u.p0));

  // pi_0(div u) = -(1/m) sum_j Z_j dx_j p0 + (1/m)((n+m-1) - Z_0) p1.
  out.pi0_div = cplx(-1.0 / m) * xz_sum_Zdx(u.p0);
  out.pi0_div += cplx(double(n + m - 1) / m) * u.p1;
  out.pi0_div -= cplx(1.0 / m) * xz_map(u.p1, z0);

  // pi_1(div u) = (1/m) Lap_x (Z_0 - (m+n-1)) p0 - (1/m) sum_j Z_j dx_j p1.
  if (m >= 2) {
    XZPoly inner = xz_map(u.p0, z0);
    inner -= double(m + n - 1) * u.p0;
    out.pi1_div = cplx(1.0 / m) * xz_lapx(inner);
    out.pi1_div -= cplx(1.0 / m) * xz_sum_Zdx(u.p1);
  } else {
    out.pi1_div = XZPoly::zero(n, 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Indicial roots
// ---------------------------------------------------------------------------

struct IndicialRoot {
  cplx lambda;
  int family = 0;  // 0 or 1
  int k = 0;
};

/// All solutions of the two indicial families for Delta - sigma on E^(m):
///   family 0: -l^2 + n l + m + 2k(2m+n-2k-2) = sigma,   0 <= k <= floor(m/2)
///   family 1: -l^2 + n l + n + 3(m-1) + 2k(n+2m-2k-4) = sigma,
///             0 <= k <= floor((m-1)/2).
/// No deduplication: every (family, k) contributes both quadratic roots.
inline std::vector<IndicialRoot> indicial_roots(int n, int m, double sigma) {
  std::vector<IndicialRoot> out;
  auto push = [&](double cst, int family, int k) {
    const cplx disc = cplx(0.25 * n * n - sigma + cst, 0.0);
    const cplx sq = std::sqrt(disc);
    out.push_back({cplx(0.5 * n, 0.0) + sq, family, k});
    out.push_back({cplx(0.5 * n, 0.0) - sq, family, k});
  };
  for (int k = 0; k <= m / 2; ++k) push(double(m + 2 * k * (2 * m + n - 2 * k - 2)), 0, k);
  for (int k = 0; m >= 1 && k <= (m - 1) / 2; ++k)
    push(double(n + 3 * (m - 1) + 2 * k * (n + 2 * m - 2 * k - 4)), 1, k);
  return out;
}

// ---------------------------------------------------------------------------
// Boundary leading constant
// ---------------------------------------------------------------------------

/// Gamma(lambda + n/2) / ((lambda+n+m-1) Gamma(lambda+n-1)): the
/// lambda-dependent factor of the boundary leading coefficient (the overall
/// constant C is carried symbolically elsewhere).  Poles are signaled with
/// the offending factor; cancelling pole/zero pairs are evaluated as limits.
struct LeadingConstant {
  cplx value{0.0, 0.0};
  bool is_pole = false;
  std::string offending;
};

inline LeadingConstant boundary_leading_constant(int n, int m, const cplx& lambda) {
  const cplx a = lambda + 0.5 * double(n);
  const cplx b = lambda + double(n - 1);
  const cplx lin = lambda + double(n + m - 1);
  const double tol = 1e-9;
  const bool pa = is_gamma_pole(a, tol);
  const bool pb = is_gamma_pole(b, tol);
  const bool plin = std::abs(lin) < tol;
  LeadingConstant out;
  const int net = (pa ? 1 : 0) + (plin ? 1 : 0) - (pb ? 1 : 0);
  if (net > 0) {
    out.is_pole = true;
    if (pa) out.offending += "Gamma(lambda+n/2) pole; ";
    if (plin) out.offending += "(lambda+n+m-1) zero; ";
    if (pb) out.offending += "[partially cancelled by Gamma(lambda+n-1) pole]";
    return out;
  }
  if (net < 0) {
    // A surviving pole of Gamma(lambda+n-1) in the denominator: zero value.
    out.value = 0.0;
    out.offending = "Gamma(lambda+n-1) pole (zero of the quotient)";
    return out;
  }
  // net == 0: either regular, or a cancelling pair evaluated as a limit.
  if (!pa && !pb && !plin) {
    out.value = cgamma_ratio(a, b) / lin;
  } else if (pa && pb && !plin) {
    // lim Gamma(-p+e)/Gamma(-q+e) = (-1)^{p+q} q!/p!.
    const long p = std::lround(-a.real()), q = std::lround(-b.real());
    double r = ((p + q) % 2 == 0) ? 1.0 : -1.0;
    for (long k = 2; k <= q; ++k) r *= double(k);
    for (long k = 2; k <= p; ++k) r /= double(k);
    out.value = cplx(r, 0.0) / lin;
  } else if (pb && plin && !pa) {
    // 1/Gamma(b) ~ (-1)^q q! (lambda - lambda_0) cancels the linear zero.
    const long q = std::lround(-b.real());
    double r = (q % 2 == 0) ? 1.0 : -1.0;
    for (long k = 2; k <= q; ++k) r *= double(k);
    out.value = cgamma(a) * cplx(r, 0.0);
  } else {
    out.is_pole = true;  // unreachable combination; be conservative
    out.offending = "degenerate pole configuration";
  }
  return out;
}

}  // namespace reso
