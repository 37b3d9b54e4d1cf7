// Complex gamma function via the Lanczos approximation with reflection.
//
// The toolkit needs Gamma at complex arguments (pairing constants, boundary
// leading constants); the standard library only provides real tgamma/lgamma.
// The g=7, n=9 Lanczos coefficient set gives ~1e-15 relative accuracy on the
// right half plane; the reflection formula extends it to Re z < 0.5.

#pragma once

#include <complex>
#include <limits>
#include <numbers>

namespace reso {

using cplx = std::complex<double>;

namespace detail {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's table).
inline constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

}  // namespace detail

/// Gamma(z) for complex z.  Poles at z in {0, -1, -2, ...} return inf.
inline cplx cgamma(cplx z) {
  using std::numbers::pi;
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return pi / (std::sin(pi * z) * cgamma(1.0 - z));
  }
  z -= 1.0;
  cplx x = detail::kLanczos[0];
  for (int i = 1; i < 9; ++i) x += detail::kLanczos[i] / (z + double(i));
  const cplx t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

/// log Gamma(z), principal branch on the right half plane (used for ratio
/// evaluations that would overflow as plain Gamma quotients).
inline cplx clgamma(cplx z) {
  using std::numbers::pi;
  if (z.real() < 0.5) {
    return std::log(pi / std::sin(pi * z)) - clgamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = detail::kLanczos[0];
  for (int i = 1; i < 9; ++i) x += detail::kLanczos[i] / (z + double(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// Ratio Gamma(a)/Gamma(b) through log-gamma (stable for large |a|, |b|).
inline cplx cgamma_ratio(cplx a, cplx b) { return std::exp(clgamma(a) - clgamma(b)); }

/// True if z sits (within tol) on a pole of Gamma.
inline bool is_gamma_pole(cplx z, double tol = 1e-12) {
  if (std::abs(z.imag()) > tol) return false;
  const double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

}  // namespace reso
