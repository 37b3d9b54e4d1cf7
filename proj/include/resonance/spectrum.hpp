// Resonance <-> eigenvalue correspondence for hyperbolic geodesic flows.
//
// Given the spectrum of the Laplacian on trace-free divergence-free symmetric
// m-tensors of a compact hyperbolic (n+1)-manifold, the resonances of the
// geodesic flow organize into bands indexed by m: each eigenvalue sigma in
// Spec^k produces, for every band m >= k of the same parity (l = (m-k)/2),
// the two roots of
//
//     (lambda + m + n/2)^2 = n^2/4 + k - sigma,
//
// counted with the eigenvalue's multiplicity.  Points of -n/2 - (1/2)N_0 are
// outside the scope of the correspondence and are reported separately; at
// lambda in -2N the band m = -lambda is dropped (the resonance 0 of the
// scalar band is not copied to other bands).
//
// The module also provides the surface (n = 1) parameterization
// lambda_{j,m} = -m - 1 + s_j, the admissible-region classification, the
// correlation decay rate nu_0, Weyl-law constants and leading counts, the
// pairing constants c_{ml}(lambda), and the analytic constants of the pairing
// calculus together with independent numerical-integration oracles.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "resonance/gamma.hpp"
#include "resonance/poisson.hpp"
#include "resonance/quadrature.hpp"

namespace reso {

// ---------------------------------------------------------------------------
// Domain types.

/// One Laplacian eigenvalue on trace-free divergence-free symmetric
/// m-tensors, with multiplicity.
struct SpectrumEntry {
  int m = 0;
  double sigma = 0.0;
  int mult = 1;
};

/// Rectangular search window in the lambda plane.
struct Window {
  double re_min = -1.0;
  double re_max = 0.0;
  double im_max = 1.0;
};

/// One emitted resonance.  (m, ell, source_sigma) identify the band and the
/// eigenvalue it came from; the flags classify the location of lambda.
struct ResonanceEntry {
  cplx lambda;
  int mult = 0;
  int m = 0;
  int ell = 0;
  double source_sigma = 0.0;
  bool on_vertical_line = false;
  bool real_segment = false;
  bool exceptional_adjacent = false;
  bool collision = false;

  std::string flags_string() const {
    std::string out;
    auto add = [&](const char* name) {
      if (!out.empty()) out += '|';
      out += name;
    };
    if (on_vertical_line) add("on_vertical_line");
    if (real_segment) add("real_segment");
    if (exceptional_adjacent) add("exceptional_adjacent");
    if (collision) add("collision");
    return out;
  }
};

/// A root dropped from the output, with the reason.
struct ExcludedEntry {
  cplx lambda;
  int mult = 0;
  int m = 0;
  int ell = 0;
  double source_sigma = 0.0;
  std::string reason;
};

struct EnumerationResult {
  std::vector<ResonanceEntry> entries;
  std::vector<ExcludedEntry> excluded;
};

// ---------------------------------------------------------------------------
// Exceptional sets.

/// Membership of lambda in -n/2 - (1/2)N_0 within tol.
inline bool in_exceptional_set(int n, cplx lambda, double tol = 1e-9) {
  if (std::abs(lambda.imag()) > tol) return false;
  const double t = -0.5 * n - lambda.real();  // lambda = -n/2 - t, want t in (1/2)N_0
  const double j = std::round(2.0 * t);
  return j >= -0.5 && std::abs(2.0 * t - j) <= 2.0 * tol;
}

/// Membership in the set R_m: -n/2 - (1/2)N_0 when n > 1 or m = 0, and
/// -(1/2)N_0 when n = 1 and m >= 1.
inline bool in_R_m(int n, int m, cplx lambda, double tol = 1e-9) {
  const int n_eff = (n > 1 || m == 0) ? n : 0;
  return in_exceptional_set(n_eff, lambda, tol);
}

/// First point of R_m (the set proceeds downward in steps of 1/2).
inline double r_m_start(int n, int m) { return (n > 1 || m == 0) ? -0.5 * n : 0.0; }

/// All points of -n/2 - (1/2)N_0 with real part >= re_min (for plot markers).
inline std::vector<double> exceptional_points_in(int n, double re_min) {
  std::vector<double> pts;
  for (double x = -0.5 * n; x >= re_min - 1e-12; x -= 0.5) pts.push_back(x);
  return pts;
}

// ---------------------------------------------------------------------------
// Admissible region.

/// Location classification of a candidate resonance for band (m, ell):
/// either on the vertical line Re lambda = -m - n/2 or, when real, in the
/// band's real segment.
struct RegionFlags {
  bool on_vertical_line = false;
  bool real_segment = false;
  bool admissible() const { return on_vertical_line || real_segment; }
};

inline RegionFlags admissible_region(int n, int m, int ell, cplx lambda, double tol = 1e-9) {
  RegionFlags f;
  f.on_vertical_line = std::abs(lambda.real() + m + 0.5 * n) <= tol;
  if (std::abs(lambda.imag()) <= tol) {
    const double x = lambda.real();
    double lo, hi;
    if (m == 2 * ell) {
      lo = -double(n) - m;
      hi = -double(m);
    } else if (n == 1) {
      lo = -1.0 - m;
      hi = -double(m);
    } else {
      lo = 1.0 - n - m;
      hi = -1.0 - m;
    }
    f.real_segment = (x >= lo - tol && x <= hi + tol);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Validation.

/// Hard validation of spectrum input: positive multiplicities and the lower
/// bound sigma >= m + n - 1 for m >= 1 (sigma >= 0 for m = 0).
inline void validate_spectrum(int n, const std::vector<SpectrumEntry>& spectrum) {
  if (n < 1) throw std::invalid_argument("validate_spectrum: n < 1");
  for (const auto& e : spectrum) {
    if (e.m < 0) throw std::invalid_argument("spectrum entry: m < 0");
    if (e.mult < 1) throw std::invalid_argument("spectrum entry: mult < 1");
    const double lower = (e.m >= 1) ? double(e.m + n - 1) : 0.0;
    if (e.sigma < lower - 1e-9)
      throw std::invalid_argument("spectrum entry: sigma below the lower bound " +
                                  std::to_string(lower));
  }
}

inline void validate_window(const Window& w) {
  if (!(std::isfinite(w.re_min) && std::isfinite(w.re_max) && std::isfinite(w.im_max)))
    throw std::invalid_argument("window: bounds must be finite");
  if (w.re_min > w.re_max || w.im_max < 0.0)
    throw std::invalid_argument("window: empty or inverted bounds");
}

// ---------------------------------------------------------------------------
// Enumeration.

namespace detail {

/// Distance from lambda to the grid -n/2 - (1/2)N_0.
inline double exceptional_distance(int n, cplx lambda) {
  const double x = lambda.real();
  double j = std::round(2.0 * (-0.5 * n - x));
  if (j < 0.0) j = 0.0;
  const double p = -0.5 * n - 0.5 * j;
  return std::hypot(x - p, lambda.imag());
}

/// lambda in -2N (strictly negative even integers) within tol; returns the
/// positive even integer -lambda, or 0.
inline int minus_two_n_member(cplx lambda, double tol = 1e-9) {
  if (std::abs(lambda.imag()) > tol) return 0;
  const double j = std::round(-lambda.real() / 2.0);
  if (j < 0.5) return 0;
  if (std::abs(lambda.real() + 2.0 * j) > tol) return 0;
  return int(2.0 * j);
}

struct RawRoot {
  cplx lambda;
  int mult, m, ell;
  double sigma;
};

inline bool lex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace detail

/// Enumerate resonances in the window from the given tensor Laplacian
/// spectrum.  For n = 1, when the input carries no m >= 1 entries, the band-1
/// data is derived from the scalar band via the Hodge-star isomorphism
/// between coclosed eigen-1-forms at sigma + 1 and eigenfunctions at
/// sigma > 0 (constants are omitted: their differential vanishes).
inline EnumerationResult enumerate_resonances(int n, std::vector<SpectrumEntry> spectrum,
                                              const Window& w) {
  validate_spectrum(n, spectrum);
  validate_window(w);

  if (n == 1) {
    const bool has_tensor =
        std::any_of(spectrum.begin(), spectrum.end(), [](const SpectrumEntry& e) { return e.m >= 1; });
    if (!has_tensor) {
      const size_t base = spectrum.size();
      for (size_t i = 0; i < base; ++i) {
        if (spectrum[i].m == 0 && spectrum[i].sigma > 1e-9)
          spectrum.push_back({1, spectrum[i].sigma + 1.0, spectrum[i].mult});
      }
    }
  }

  const int m_bound = std::max(0, int(std::ceil(-w.re_min))) + n;

  std::vector<detail::RawRoot> roots;
  EnumerationResult result;
  for (const auto& e : spectrum) {
    for (int m = e.m; m <= m_bound; m += 2) {
      const int ell = (m - e.m) / 2;
      const double disc = 0.25 * n * n + e.m - e.sigma;
      std::vector<cplx> ls;
      const cplx center(-double(m) - 0.5 * n, 0.0);
      if (std::abs(disc) <= 1e-12) {
        ls.push_back(center);  // double real root, counted once per (m, ell)
      } else {
        const cplx root = std::sqrt(cplx(disc, 0.0));
        ls.push_back(center + root);
        ls.push_back(center - root);
      }
      for (const cplx& lam : ls) {
        if (lam.real() < w.re_min - 1e-12 || lam.real() > w.re_max + 1e-12 ||
            std::abs(lam.imag()) > w.im_max + 1e-12)
          continue;
        const int neg = detail::minus_two_n_member(lam);
        if (neg > 0) {
          // lambda in -2N: the correspondence drops the band m = -lambda and
          // keeps the others.
          if (m == neg) {
            result.excluded.push_back({lam, e.mult, m, ell, e.sigma, "m=-lambda"});
            continue;
          }
        } else if (in_exceptional_set(n, lam)) {
          result.excluded.push_back({lam, e.mult, m, ell, e.sigma, "exceptional"});
          continue;
        }
        roots.push_back({lam, e.mult, m, ell, e.sigma});
      }
    }
  }

  std::sort(roots.begin(), roots.end(), [](const detail::RawRoot& a, const detail::RawRoot& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
    if (a.m != b.m) return a.m < b.m;
    return a.ell < b.ell;
  });

  for (size_t i = 0; i < roots.size();) {
    size_t j = i;
    while (j + 1 < roots.size() && std::abs(roots[j + 1].lambda - roots[i].lambda) <= 1e-9) ++j;
    ResonanceEntry entry;
    entry.lambda = roots[i].lambda;
    entry.m = roots[i].m;
    entry.ell = roots[i].ell;
    entry.source_sigma = roots[i].sigma;
    for (size_t k = i; k <= j; ++k) {
      entry.mult += roots[k].mult;
      if (roots[k].m != roots[i].m || roots[k].ell != roots[i].ell) entry.collision = true;
    }
    const RegionFlags rf = admissible_region(n, entry.m, entry.ell, entry.lambda);
    entry.on_vertical_line = rf.on_vertical_line;
    entry.real_segment = rf.real_segment;
    entry.exceptional_adjacent = detail::exceptional_distance(n, entry.lambda) <= 1e-6;
    result.entries.push_back(entry);
    i = j + 1;
  }
  return result;
}

/// Surface case (n = 1): resonances lambda = -m - 1 + s_j for the Laplacian
/// spectrum {s_j (1 - s_j)}, s_j in [0,1] union (1/2 + iR), excluding the
/// points -1 - (1/2)N_0.
inline EnumerationResult dim2_resonances(const std::vector<std::pair<cplx, int>>& s_values,
                                         const Window& w) {
  validate_window(w);
  std::vector<detail::RawRoot> roots;
  EnumerationResult result;
  for (const auto& [s, mult] : s_values) {
    if (mult < 1) throw std::invalid_argument("dim2_resonances: mult < 1");
    const bool real_branch = std::abs(s.imag()) <= 1e-9 && s.real() >= -1e-9 && s.real() <= 1.0 + 1e-9;
    const bool critical = std::abs(s.real() - 0.5) <= 1e-9;
    if (!real_branch && !critical)
      throw std::invalid_argument("dim2_resonances: s must lie in [0,1] or on 1/2 + iR");
    const double sigma = (s * (1.0 - s)).real();
    for (int m = 0;; ++m) {
      const cplx lam = s - double(m) - 1.0;
      if (lam.real() < w.re_min - 1e-12) break;
      if (lam.real() > w.re_max + 1e-12 || std::abs(lam.imag()) > w.im_max + 1e-12) continue;
      if (in_exceptional_set(2, lam)) {  // -1 - (1/2)N_0 is the n=2 grid
        result.excluded.push_back({lam, mult, m, 0, sigma, "exceptional"});
        continue;
      }
      roots.push_back({lam, mult, m, 0, sigma});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const detail::RawRoot& a, const detail::RawRoot& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
    return a.m < b.m;
  });
  for (size_t i = 0; i < roots.size();) {
    size_t j = i;
    while (j + 1 < roots.size() && std::abs(roots[j + 1].lambda - roots[i].lambda) <= 1e-9) ++j;
    ResonanceEntry entry;
    entry.lambda = roots[i].lambda;
    entry.m = roots[i].m;
    entry.ell = 0;
    entry.source_sigma = roots[i].sigma;
    for (size_t k = i; k <= j; ++k) {
      entry.mult += roots[k].mult;
      if (roots[k].m != roots[i].m) entry.collision = true;
    }
    entry.on_vertical_line = std::abs(entry.lambda.real() + entry.m + 0.5) <= 1e-9;
    entry.real_segment = std::abs(entry.lambda.imag()) <= 1e-9;
    entry.exceptional_adjacent = detail::exceptional_distance(2, entry.lambda) <= 1e-6;
    result.entries.push_back(entry);
    i = j + 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Correlation decay rate.

/// nu_0 = min over 0 <= m < n/2 of min{ nu + m : nu in (0, n/2 - m),
/// nu(n - nu) + m in Spec^m }, or nullopt when the set is empty (the decay
/// rate is then n/2 - epsilon for every epsilon > 0).
inline std::optional<double> decay_rate_nu0(int n, const std::vector<SpectrumEntry>& spectrum) {
  validate_spectrum(n, spectrum);
  std::optional<double> best;
  for (const auto& e : spectrum) {
    if (e.m >= 0.5 * n) continue;
    // nu(n - nu) = sigma - m with nu in (0, n/2 - m): take the lower root.
    const double disc = 0.25 * n * n - (e.sigma - e.m);
    if (disc <= 0.0) continue;
    const double nu = 0.5 * n - std::sqrt(disc);
    if (nu <= 1e-12 || nu >= 0.5 * n - e.m - 1e-12) continue;
    const double cand = nu + e.m;
    if (!best || cand < *best) best = cand;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Weyl law.

struct WeylResult {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double leading_band_count = 0.0;
  double leading_eig_count = 0.0;
};

/// c1(n, m) = (m+n-1)! / (m! (n-1)!), the dimension of degree-m homogeneous
/// polynomials in n variables; 0 for m < 0.
inline double weyl_c1(int n, int m) {
  if (m < 0) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= m; ++i) c *= double(n - 1 + i) / double(i);
  return c;
}

/// Leading Weyl constants and counts: eigenvalue count ~ c0 c2 Vol R^{n+1},
/// band-m resonance count on Re lambda = -n/2 - m, |Im| <= R ~
/// 2^{-n} pi^{-(n+1)/2} / Gamma((n+3)/2) * c1 * Vol R^{n+1}.
inline WeylResult weyl(int n, int m, double R, double volume) {
  if (R <= 0.0) throw std::invalid_argument("weyl: R <= 0");
  using std::numbers::pi;
  WeylResult r;
  r.c0 = std::pow(2.0 * std::sqrt(pi), -n - 1) / std::tgamma(0.5 * (n + 3));
  r.c1 = weyl_c1(n, m);
  r.c2 = r.c1 - weyl_c1(n, m - 2);
  const double rpow = std::pow(R, n + 1);
  r.leading_band_count =
      std::pow(2.0, -n) * std::pow(pi, -0.5 * (n + 1)) / std::tgamma(0.5 * (n + 3)) * r.c1 *
      volume * rpow;
  r.leading_eig_count = r.c0 * r.c2 * volume * rpow;
  return r;
}

// ---------------------------------------------------------------------------
// Pairing constants.

struct PairingConstant {
  cplx value{0.0, 0.0};
  bool is_pole = false;
  std::string note;
};

/// c_{ml}(lambda) = 2^{m+2l-n} pi^{-1-n/2} l! (m-2l)! sin(pi(n/2+lambda))
///   * Gamma(m+n/2-l) Gamma(lambda+n+2m-2l) Gamma(-lambda-l)
///     Gamma(-lambda-m-n/2+l+1) / (Gamma(m+n/2-2l) Gamma(-lambda-2l)).
///
/// Evaluated in the reflected form
///   (-1)^{m-l} 2^{m+2l-n} pi^{-n/2} l! (m-2l)!
///   * prod_{i<l}(m+n/2-2l+i) * prod_{i<l}(-lambda-2l+i)
///   * Gamma(lambda+n+2m-2l) / Gamma(lambda+n/2+m-l),
/// which isolates the only possible poles in the remaining Gamma quotient.
inline PairingConstant pairing_constant(int n, int m, int ell, cplx lambda) {
  if (n < 1 || m < 0 || ell < 0 || 2 * ell > m)
    throw std::invalid_argument("pairing_constant: need n >= 1, 0 <= 2 ell <= m");
  using std::numbers::pi;
  PairingConstant out;
  double pref = std::pow(2.0, m + 2 * ell - n) * std::pow(pi, -0.5 * n);
  if ((m - ell) % 2 != 0) pref = -pref;
  for (int i = 2; i <= ell; ++i) pref *= i;
  for (int i = 2; i <= m - 2 * ell; ++i) pref *= i;
  for (int i = 0; i < ell; ++i) pref *= m + 0.5 * n - 2 * ell + i;
  cplx poly(1.0, 0.0);
  for (int i = 0; i < ell; ++i) poly *= -lambda - double(2 * ell) + double(i);

  const cplx a = lambda + double(n + 2 * m - 2 * ell);
  const cplx b = lambda + 0.5 * n + double(m - ell);
  const bool pa = is_gamma_pole(a, 1e-9);
  const bool pb = is_gamma_pole(b, 1e-9);
  if (pa && !pb) {
    out.is_pole = true;
    out.note = "Gamma(lambda+n+2m-2l) pole";
    return out;
  }
  cplx ratio;
  if (pa && pb) {
    const int p = int(std::round(-a.real()));
    const int q = int(std::round(-b.real()));
    double lim = ((p + q) % 2 == 0) ? 1.0 : -1.0;
    for (int i = 2; i <= q; ++i) lim *= i;
    for (int i = 2; i <= p; ++i) lim /= i;
    ratio = lim;
  } else if (pb) {
    ratio = 0.0;  // zero of 1/Gamma(b)
    out.note = "zero from Gamma(lambda+n/2+m-l) pole";
  } else {
    ratio = cgamma_ratio(a, b);
  }
  out.value = pref * poly * ratio;
  return out;
}

/// c_{00}(lambda) = (4 pi)^{-n/2} Gamma(n+lambda) / Gamma(n/2+lambda).
inline cplx c00(int n, cplx lambda) {
  return std::pow(4.0 * std::numbers::pi, -0.5 * n) *
         cgamma_ratio(double(n) + lambda, 0.5 * n + lambda);
}

// ---------------------------------------------------------------------------
// Analytic constants with numerical-integration oracles.

/// Constant term of the regularized integral int_0^inf t^{a-1}(1+t)^{-b}
/// chi(eps t) dt: Gamma(a) Gamma(b-a) / Gamma(b) * chi(0).  Requires
/// Re a > 0 and a - b not in N_0 (otherwise the expansion degenerates).
inline cplx hadamard_constant(cplx alpha, cplx beta, double chi0 = 1.0) {
  if (alpha.real() <= 0.0) throw std::domain_error("hadamard_constant: Re alpha <= 0");
  const cplx d = alpha - beta;
  if (std::abs(d.imag()) <= 1e-9 && d.real() >= -1e-9 &&
      std::abs(d.real() - std::round(d.real())) <= 1e-9)
    throw std::domain_error("hadamard_constant: alpha - beta in N_0");
  return chi0 * std::exp(clgamma(alpha) + clgamma(beta - alpha) - clgamma(beta));
}

/// Oracle: int_0^inf t^{a-1}(1+t)^{-b} dt computed as the Beta integral
/// int_0^1 u^{a-1}(1-u)^{b-a-1} du (valid for b > a > 0).
inline double hadamard_oracle(double alpha, double beta, double tol = 1e-12) {
  if (!(beta > alpha && alpha > 0.0)) throw std::domain_error("hadamard_oracle: need b > a > 0");
  return integrate_interval(
      [&](double u) { return std::pow(u, alpha - 1.0) * std::pow(1.0 - u, beta - alpha - 1.0); },
      0.0, 1.0, tol);
}

/// Coefficient in int_{S^{n-1}} (tensor^{2l} eta) dS:
/// 2 pi^{(n-1)/2} Gamma(l+1/2) / Gamma(l+n/2).
inline double sphere_moment_coeff(int n, int ell) {
  if (n < 1 || ell < 0) throw std::invalid_argument("sphere_moment_coeff: bad arguments");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (n - 1)) * std::tgamma(ell + 0.5) /
         std::tgamma(ell + 0.5 * n);
}

/// Oracle: int_{S^{n-1}} eta_1^{2l} dS by sphere quadrature (n >= 2; the
/// n = 1 sphere is the two-point set, handled exactly).
inline double sphere_moment_oracle(int n, int ell, double tol = 1e-11) {
  if (n == 1) return 2.0;
  return integrate_sphere(
      n - 1, [&](const Vec& eta) { return std::pow(eta[0], 2.0 * ell); }, tol);
}

/// The angular twist sum 2 pi^{n/2} sum_{l=0}^m m!/((m-l)! Gamma(n/2+l))
/// (-r^2/(1+r^2))^l appearing in int_{S^{n-1}} <(tensor^m C_{r eta})A, B> dS
/// for trace-free symmetric A, B (value relative to <A, B>).
inline double twist_sum(int n, int m, double r) {
  if (n < 1 || m < 0) throw std::invalid_argument("twist_sum: bad arguments");
  const double t = -r * r / (1.0 + r * r);
  double sum = 0.0;
  for (int ell = 0; ell <= m; ++ell) {
    double term = std::pow(t, ell) / std::tgamma(0.5 * n + ell);
    for (int i = m - ell + 1; i <= m; ++i) term *= i;  // m! / (m-l)!
    sum += term;
  }
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) * sum;
}

namespace detail {

/// <(tensor^m C) A, B> for the conformal reflection factor C = I - c hh^T,
/// with trace-free symmetric A, B given for m <= 2 as scalars / vectors /
/// matrices.  Returns the pairing relative to nothing (absolute value).
inline double twist_pairing(int m, const Eigen::MatrixXd& C, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& b, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& B) {
  if (m == 0) return 1.0;
  if (m == 1) return (C * a).dot(b);
  return (C * A * C.transpose()).cwiseProduct(B).sum();
}

}  // namespace detail

/// Oracle for twist_sum (m <= 2): quadrature of
/// <(tensor^m C_{r eta}) A, B> / <A, B> over eta in S^{n-1} with a fixed
/// trace-free pair A, B.
inline double twist_sum_oracle(int n, int m, double r, double tol = 1e-11) {
  if (n < 2 || m < 0 || m > 2) throw std::invalid_argument("twist_sum_oracle: need n >= 2, m <= 2");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    a[i] = 1.0 + 0.3 * i;
    b[i] = 0.5 - 0.2 * i;
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), B = Eigen::MatrixXd::Zero(n, n);
  if (m == 2) {
    // Symmetric trace-free pair.
    A(0, 1) = A(1, 0) = 1.0;
    A(0, 0) = 0.7;
    A(1, 1) = -0.7;
    B(0, 0) = 1.0;
    B(1, 1) = -1.0;
    B(0, 1) = B(1, 0) = 0.4;
    if (n >= 3) {
      A(1, 2) = A(2, 1) = -0.5;
      B(0, 2) = B(2, 0) = 0.8;
    }
  }
  const double denom = (m == 0) ? 1.0 : (m == 1 ? a.dot(b) : A.cwiseProduct(B).sum());
  const double c = 2.0 * r * r / (1.0 + r * r);
  return integrate_sphere(
             n - 1,
             [&](const Vec& eta) {
               const Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n) - c * eta * eta.transpose();
               return detail::twist_pairing(m, C, a, b, A, B);
             },
             tol) /
         denom;
}

/// Constant term of int_{R^n}(1+|eta|^2)^{-lambda-n} <(tensor^m C_eta)A, B>
/// d eta relative to <A, B>: pi^{n/2} Gamma(n/2+lambda) /
/// ((n+lambda+m-1) Gamma(n-1+lambda)).
inline PairingConstant asysa2_constant(int n, int m, cplx lambda) {
  const LeadingConstant lc = boundary_leading_constant(n, m, lambda);
  PairingConstant out;
  out.is_pole = lc.is_pole;
  out.note = lc.offending;
  out.value = std::pow(std::numbers::pi, 0.5 * n) * lc.value;
  return out;
}

/// Oracle for asysa2_constant (real lambda > -n/2, m <= 2): the integral
/// converges absolutely, computed in polar coordinates with the angular
/// factor from twist_sum_oracle's construction.
inline double asysa2_oracle(int n, int m, double lambda, double tol = 1e-10) {
  if (!(lambda > -0.5 * n)) throw std::domain_error("asysa2_oracle: need lambda > -n/2");
  if (m < 0 || m > 2) throw std::invalid_argument("asysa2_oracle: m <= 2 only");
  auto radial = [&](double r) {
    const double angular = (n == 1)
                               ? 2.0  // S^0: two points, C = I - (2r^2/(1+r^2)) acts as scalar
                               : twist_sum_oracle(n, m, r, tol);
    double ang = angular;
    if (n == 1 && m > 0) ang = 2.0 * std::pow(1.0 - 2.0 * r * r / (1.0 + r * r), m);
    return std::pow(r, n - 1) * std::pow(1.0 + r * r, -lambda - n) * ang;
  };
  // Substitute r = u/(1-u); dr = du/(1-u)^2.
  return integrate_interval(
      [&](double u) {
        const double r = u / (1.0 - u);
        return radial(r) / ((1.0 - u) * (1.0 - u));
      },
      0.0, 1.0, tol);
}

// ---------------------------------------------------------------------------
// Hodge shift and resonance expansion.

/// Eigenvalue of the Hodge Laplacian on coclosed 1-forms corresponding to a
/// rough-Laplacian eigenvalue sigma: sigma - n (Weitzenboeck).
inline double hodge_shift_m1(int n, double sigma) { return sigma - double(n); }

struct ExpansionTerm {
  ResonanceEntry entry;
  double rate = 0.0;  // the term decays like e^{rate * t}, rate = Re lambda
};

/// Terms of the correlation expansion: resonances with real lambda strictly
/// inside (-n/2, 0), each contributing e^{lambda t}.
inline std::vector<ExpansionTerm> resonance_expansion_terms(int n,
                                                            const std::vector<SpectrumEntry>& spectrum,
                                                            const Window& w) {
  const EnumerationResult res = enumerate_resonances(n, spectrum, w);
  std::vector<ExpansionTerm> terms;
  for (const auto& e : res.entries) {
    if (std::abs(e.lambda.imag()) > 1e-9) continue;
    const double x = e.lambda.real();
    if (x <= -0.5 * n + 1e-9 || x >= -1e-9) continue;
    terms.push_back({e, x});
  }
  return terms;
}

}  // namespace reso
