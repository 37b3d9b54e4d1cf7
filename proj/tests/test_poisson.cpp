// Poisson operator: quadrature, delta image, half-space component formulas,
// indicial roots, and the boundary leading constant.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <map>
#include <numbers>
#include <random>

#include "resonance/poisson.hpp"

using namespace reso;
using zsym::XZPoly;
using zsym::ZPoly;

namespace {

std::mt19937_64 rng(445912);

Vec gaussian_vec(int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = g(rng);
  return v;
}

/// Hyperboloid point of a half-space point (z_0, z).
Vec chart_x(const Vec& zfull) {
  return model_convert({Model::Halfspace, zfull, false}, Model::Hyperboloid).coords;
}

/// Frame vectors V_a = (d chart/d z_a) * z_0 on the hyperboloid: the images
/// of the 0-frame Z_a = z_0 d/dz_a, columns a = 0..n.
Mat chart_frame(const Vec& zfull) {
  const int d = int(zfull.size());
  Mat V(d + 1, d);
  const double h = 1e-6;
  for (int a = 0; a < d; ++a) {
    Vec zp = zfull, zm = zfull;
    zp[a] += h;
    zm[a] -= h;
    V.col(a) = zfull[0] * (chart_x(zp) - chart_x(zm)) / (2.0 * h);
  }
  return V;
}

std::vector<cplx> to_cvec(const Vec& v) {
  std::vector<cplx> out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

/// Scalar boundary field.
SphereField scalar_field(int n, std::function<cplx(const Vec&)> f) {
  SphereField w;
  w.n = n;
  w.m = 0;
  w.value = [n, f = std::move(f)](const Vec& nu) {
    SymTensor<cplx> t(n + 2, 0);
    t.raw(0) = f(nu);
    return t;
  };
  return w;
}

/// Order-1 field: projection of an ambient covector field onto T_nu S^n.
SphereField covector_field(int n, std::function<std::vector<cplx>(const Vec&)> amb) {
  SphereField w;
  w.n = n;
  w.m = 1;
  w.value = [n, amb = std::move(amb)](const Vec& nu) {
    SymTensor<cplx> t(n + 1, 1);
    const auto c = amb(nu);
    cplx cdotnu(0.0);
    for (int a = 0; a <= n; ++a) cdotnu += c[a] * nu[a];
    for (int a = 0; a <= n; ++a) t.at({a}) = c[a] - cdotnu * nu[a];
    return t;
  };
  return w;
}

ZPoly zmono(const cplx& s, std::vector<int> alpha, const cplx& c = 1.0) {
  return ZPoly::monomial(s, std::move(alpha), c);
}

double xz_scale(const XZPoly& p) {
  double mx = 0.0;
  for (const auto& [a, q] : p.c)
    for (const auto& [k, c] : q.terms) mx = std::max(mx, std::abs(c));
  return mx;
}

void check_xz_equal(const XZPoly& a, const XZPoly& b, double tol = 1e-12) {
  const double scale = std::max({xz_scale(a), xz_scale(b), 1.0});
  CHECK(a.max_coeff_dist(b) <= tol * scale);
}

}  // namespace

TEST_CASE("basepoint quadrature recovers the sphere volume") {
  for (int n : {1, 2}) {
    Vec x = Vec::Zero(n + 2);
    x[0] = 1.0;  // P(e_0, nu) = 1 for all nu
    const auto w = scalar_field(n, [](const Vec&) { return cplx(1.0); });
    const auto res = poisson_apply(cplx(0.37, 0.0), w, x, -1, {16, 1e-10, 3});
    const double vol = 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) /
                       std::abs(cgamma(cplx(0.5 * (n + 1), 0.0)));
    CHECK(res.converged);
    CHECK(std::abs(res.value.raw(0) - vol) < 1e-10 * vol);
    CHECK(!res.warning);
  }
}

TEST_CASE("symbolic oracle: delta image z_0^{n+lambda} x harmonic is an exact "
          "eigenstate, divergence-free and trace-free") {
  struct Probe {
    int n, m;
    std::vector<std::pair<std::vector<int>, cplx>> f;  // multiset I -> coeff
  };
  const std::vector<Probe> probes = {
      {2, 0, {{{}, 1.0}}},
      {2, 1, {{{1}, 1.0}}},
      {2, 2, {{{1, 2}, 1.0}}},                   // x1 x2, harmonic
      {2, 2, {{{1, 1}, 1.0}, {{2, 2}, -1.0}}},   // x1^2 - x2^2, harmonic
      {3, 1, {{{2}, cplx(0.5, -1.0)}}},
      {3, 2, {{{1, 3}, 2.0}}},
  };
  for (const cplx lambda : {cplx(-0.3, 0.0), cplx(0.5, 1.0)}) {
    for (const auto& pr : probes) {
      HalfspaceSection u(pr.n, pr.m);
      for (const auto& [I, c] : pr.f)
        u.add_f(I, zmono(cplx(double(pr.n), 0.0) + lambda, std::vector<int>(pr.n, 0), c));
      const auto dd = halfspace_delta_div(u);
      // Delta u = (-lambda(n+lambda) + m) u on the E_0 component...
      const cplx eig = -lambda * (double(pr.n) + lambda) + double(pr.m);
      check_xz_equal(dd.pi0_delta, eig * u.p0);
      // ...with nothing leaking into E_1, and both divergence parts vanish.
      CHECK(dd.pi1_delta.empty());
      CHECK(dd.pi0_div.empty());
      CHECK(dd.pi1_div.empty());
    }
  }
}

TEST_CASE("scalar Laplacian convention in the half-space") {
  const int n = 2;
  // Delta z_0^3 = 3(n-3) z_0^3 = -3 z_0^3 for n = 2.
  const ZPoly p = zmono(3.0, {0, 0});
  CHECK(zsym::zlaplace(p, n).max_coeff_dist(cplx(-3.0) * p) < 1e-14);
  // Delta z_0^s = s(n-s) z_0^s for complex s.
  for (const cplx s : {cplx(1.7, 0.0), cplx(-0.4, 2.2)}) {
    const ZPoly q = zmono(s, {0, 0});
    CHECK(zsym::zlaplace(q, n).max_coeff_dist((s * (double(n) - s)) * q) < 1e-13);
  }
  // With z-dependence: Delta(z_0^s z_1^2) = (ns - s^2) z_0^s z_1^2 - 2 z_0^{s+2}.
  const cplx s(1.3, 0.5);
  const ZPoly q = zmono(s, {2, 0});
  ZPoly expect = (s * (double(n) - s)) * q;
  expect -= zmono(s + 2.0, {0, 0}, 2.0);
  CHECK(zsym::zlaplace(q, n).max_coeff_dist(expect) < 1e-13);
}

TEST_CASE("E_1 component formulas at m = 1") {
  const int n = 2, m = 1;
  const cplx s(1.3, 0.0);
  // u_1 = g Z_0^* with g = z_0^s z_1.
  {
    HalfspaceSection u(n, m);
    u.add_g({}, zmono(s, {1, 0}));
    const auto dd = halfspace_delta_div(u);
    // pi_1 Delta = (Delta + n + 3(m-1)) g.
    XZPoly expect1 = XZPoly::zero(n, 0);
    expect1.add({0, 0}, zsym::zlaplace(zmono(s, {1, 0}), n) + double(n) * zmono(s, {1, 0}));
    check_xz_equal(dd.pi1_delta, expect1);
    // pi_0 Delta = 2 x_1 Z_1 g = 2 x_1 z_0^{s+1}.
    XZPoly expect0 = XZPoly::zero(n, 1);
    expect0.add({1, 0}, zmono(s + 1.0, {0, 0}, 2.0));
    check_xz_equal(dd.pi0_delta, expect0);
    // pi_0 div = ((n+m-1) - Z_0) g = (n - s) z_0^s z_1.
    XZPoly expectd = XZPoly::zero(n, 0);
    expectd.add({0, 0}, zmono(s, {1, 0}, double(n) - s));
    check_xz_equal(dd.pi0_div, expectd);
    CHECK(dd.pi1_div.empty());
  }
  // u_0 = f_2 Z_2^* with f_2 = z_0^s: pi_1 Delta = -2 Z_2 f_2, pi_0 div = -Z_2 f_2.
  {
    HalfspaceSection u(n, m);
    u.add_f({2}, zmono(s, {0, 0}));
    const auto dd = halfspace_delta_div(u);
    // Z_2 f_2 = 0 for f_2 = z_0^s; use f_2 = z_0^s z_2 instead for a nonzero probe.
    CHECK(dd.pi1_delta.empty());
    HalfspaceSection v(n, m);
    v.add_f({2}, zmono(s, {0, 1}));
    const auto ddv = halfspace_delta_div(v);
    XZPoly e1 = XZPoly::zero(n, 0);
    e1.add({0, 0}, zmono(s + 1.0, {0, 0}, -2.0));
    check_xz_equal(ddv.pi1_delta, e1);
    XZPoly e0 = XZPoly::zero(n, 0);
    e0.add({0, 0}, zmono(s + 1.0, {0, 0}, -1.0));
    check_xz_equal(ddv.pi0_div, e0);
  }
}

TEST_CASE("indicial roots: examples, family ranges, reflection closure") {
  // m = 0, sigma = 0: {0, n}, family 0 with k = 0 only.
  for (int n : {2, 3}) {
    const auto roots = indicial_roots(n, 0, 0.0);
    REQUIRE(roots.size() == 2);
    for (const auto& r : roots) {
      CHECK(r.family == 0);
      CHECK(r.k == 0);
    }
    CHECK(std::abs(roots[0].lambda - cplx(double(n))) < 1e-12);
    CHECK(std::abs(roots[1].lambda) < 1e-12);
  }
  // n = 3, m = 1, sigma = n + 3(m-1) = 3: family-1 k=0 roots {0, 3}.
  {
    const auto roots = indicial_roots(3, 1, 3.0);
    std::vector<cplx> fam1;
    for (const auto& r : roots)
      if (r.family == 1) {
        CHECK(r.k == 0);
        fam1.push_back(r.lambda);
      }
    REQUIRE(fam1.size() == 2);
    CHECK(std::abs(fam1[0] - cplx(3.0)) < 1e-12);
    CHECK(std::abs(fam1[1]) < 1e-12);
  }
  // Root count and exact closure under lambda -> n - lambda (pairwise sums).
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + rep % 4, m = rep % 5;
    const double sigma = u(rng);
    const auto roots = indicial_roots(n, m, sigma);
    const size_t expected = 2 * size_t(m / 2 + 1) + (m >= 1 ? 2 * size_t((m - 1) / 2 + 1) : 0);
    CHECK(roots.size() == expected);
    for (size_t i = 0; i < roots.size(); i += 2) {
      CHECK(roots[i].family == roots[i + 1].family);
      CHECK(roots[i].k == roots[i + 1].k);
      CHECK(std::abs(roots[i].lambda + roots[i + 1].lambda - cplx(double(n))) < 1e-12);
    }
  }
}

TEST_CASE("indicial families agree with the symbolic component formulas") {
  const int n = 2, m = 3;
  const double lambda = 0.7;
  const ZPoly amp = zmono(cplx(lambda, 0.0), {0, 0});
  // Family 0, k = 0 and 1: p0 = z_0^lambda |x|^{2k} q, q harmonic.
  for (int k : {0, 1}) {
    HalfspaceSection u(n, m);
    u.p0 = XZPoly::zero(n, m);
    if (k == 0) {
      // q = x1^3 - 3 x1 x2^2 (harmonic).
      u.p0.add({3, 0}, amp);
      u.p0.add({1, 2}, cplx(-3.0) * amp);
    } else {
      // |x|^2 x1.
      u.p0.add({3, 0}, amp);
      u.p0.add({1, 2}, amp);
    }
    const auto dd = halfspace_delta_div(u);
    const double cst = m + 2 * k * (2 * m + n - 2 * k - 2);
    const double val = lambda * (n - lambda) + cst;
    check_xz_equal(dd.pi0_delta, cplx(val) * u.p0);
    CHECK(dd.pi1_delta.empty());  // z-independent coefficients
    // The indicial equation value sigma = val is hit by lambda in family 0/k.
    bool found = false;
    for (const auto& r : indicial_roots(n, m, val))
      if (r.family == 0 && r.k == k && std::abs(r.lambda - cplx(lambda)) < 1e-9) found = true;
    CHECK(found);
  }
  // Family 1, k = 0 and 1: p1 = z_0^lambda |x|^{2k} q, q harmonic of degree m-1-2k.
  for (int k : {0, 1}) {
    HalfspaceSection u(n, m);
    u.p1 = XZPoly::zero(n, m - 1);
    if (k == 0) {
      u.p1.add({1, 1}, amp);  // x1 x2, harmonic
    } else {
      u.p1.add({2, 0}, amp);  // |x|^2
      u.p1.add({0, 2}, amp);
    }
    const auto dd = halfspace_delta_div(u);
    const double cst = n + 3 * (m - 1) + 2 * k * (n + 2 * m - 2 * k - 4);
    const double val = lambda * (n - lambda) + cst;
    check_xz_equal(dd.pi1_delta, cplx(val) * u.p1);
    CHECK(dd.pi0_delta.empty());
    bool found = false;
    for (const auto& r : indicial_roots(n, m, val))
      if (r.family == 1 && r.k == k && std::abs(r.lambda - cplx(lambda)) < 1e-9) found = true;
    CHECK(found);
  }
}

TEST_CASE("quadrature eigenstate: finite differences in the half-space chart "
          "confirm the eigenvalue and divergence-free property") {
  const int n = 2;
  Vec z0(3);
  z0 << 0.7, 0.1, -0.2;
  const double h = 0.05;

  for (const cplx lambda : {cplx(-0.3, 0.0), cplx(0.5, 1.0)}) {
    for (int m : {0, 1}) {
      SphereField w;
      if (m == 0) {
        w = scalar_field(n, [](const Vec& nu) { return cplx(1.0) + 0.4 * nu[1]; });
      } else {
        w = covector_field(n, [](const Vec& nu) {
          std::vector<cplx> c = {cplx(0.8, 0.1), cplx(-0.3, 0.0), cplx(0.5, -0.2)};
          for (auto& v : c) v *= 1.0 + 0.3 * nu[2];
          return c;
        });
        CHECK(tangency_defect(w, Vec(gaussian_vec(n + 1)).normalized()) < 1e-12);
      }

      // Components (g, f_1, f_2) of u at a half-space point (f empty for m=0).
      auto comps = [&](const Vec& z) {
        const Vec x = chart_x(z);
        const auto res = poisson_apply(lambda, w, x, -1, {24, 1e-9, 2});
        std::vector<cplx> out;
        if (m == 0) {
          out.push_back(res.value.raw(0));
        } else {
          const Mat V = chart_frame(z);
          for (int a = 0; a <= n; ++a)
            out.push_back(res.value.eval({to_cvec(V.col(a))}));
        }
        return out;
      };

      // Stencil: center and +-h, +-h/2 along each of z_0, z_1, z_2.
      std::map<std::pair<int, int>, std::vector<cplx>> F;  // (axis, offset in h/2 units)
      F[{0, 0}] = comps(z0);
      for (int a = 0; a < 3; ++a)
        for (int off : {-2, -1, 1, 2}) {
          Vec z = z0;
          z[a] += 0.5 * h * off;
          F[{a, off}] = comps(z);
        }
      const size_t nc = F[{0, 0}].size();
      auto d1 = [&](int a, size_t c) {  // dF/dz_a, Richardson
        const cplx ch = (F[{a, 2}][c] - F[{a, -2}][c]) / (2.0 * h);
        const cplx ch2 = (F[{a, 1}][c] - F[{a, -1}][c]) / h;
        return (4.0 * ch2 - ch) / 3.0;
      };
      auto d2 = [&](int a, size_t c) {  // d2F/dz_a^2, Richardson
        const cplx ctr = F[{0, 0}][c];
        const cplx ch = (F[{a, 2}][c] - 2.0 * ctr + F[{a, -2}][c]) / (h * h);
        const cplx ch2 = (F[{a, 1}][c] - 2.0 * ctr + F[{a, -1}][c]) / (0.25 * h * h);
        return (4.0 * ch2 - ch) / 3.0;
      };
      const double zz = z0[0];
      auto lap = [&](size_t c) {  // n Z_0 - sum Z_a^2 = (n-1) z0 d0 - z0^2 (d0^2 + dz^2)
        return double(n - 1) * zz * d1(0, c) -
               zz * zz * (d2(0, c) + d2(1, c) + d2(2, c));
      };
      const cplx eig = -lambda * (double(n) + lambda) + double(m);
      double scale = 0.0;
      for (size_t c = 0; c < nc; ++c) scale = std::max(scale, std::abs(F[{0, 0}][c]));

      if (m == 0) {
        CHECK(std::abs(lap(0) - eig * F[{0, 0}][0]) < 1e-4 * scale);
      } else {
        // Component order: c=0 is g, c=1,2 are f_1, f_2.
        auto Z = [&](int a, size_t c) { return zz * d1(a, c); };
        // pi_0 Delta: (Delta + 1) f_i + 2 Z_i g = eig * f_i.
        for (size_t i = 1; i <= 2; ++i) {
          const cplx lhs = lap(i) + F[{0, 0}][i] + 2.0 * Z(int(i), 0);
          CHECK(std::abs(lhs - eig * F[{0, 0}][i]) < 1e-4 * scale);
        }
        // pi_1 Delta: (Delta + n) g - 2 sum_j Z_j f_j = eig * g.
        const cplx lhs1 = lap(0) + double(n) * F[{0, 0}][0] - 2.0 * (Z(1, 1) + Z(2, 2));
        CHECK(std::abs(lhs1 - eig * F[{0, 0}][0]) < 1e-4 * scale);
        // pi_0 div: -sum_j Z_j f_j + n g - Z_0 g = 0.
        const cplx div0 = -(Z(1, 1) + Z(2, 2)) + double(n) * F[{0, 0}][0] - Z(0, 0);
        CHECK(std::abs(div0) < 1e-4 * scale);
      }
    }
  }
}

TEST_CASE("conjugation symmetry: conj(P^-_lambda w) = P^+_lambda conj(w)") {
  const int n = 2;
  const cplx lambda(0.3, 0.7);
  const auto w = covector_field(n, [](const Vec& nu) {
    return std::vector<cplx>{cplx(0.2, 0.5), cplx(1.0, -0.3), cplx(-0.4, 0.1) * nu[0]};
  });
  const auto wbar = covector_field(n, [](const Vec& nu) {
    return std::vector<cplx>{std::conj(cplx(0.2, 0.5)), std::conj(cplx(1.0, -0.3)),
                             std::conj(cplx(-0.4, 0.1)) * nu[0]};
  });
  const Vec x = chart_x((Vec(3) << 0.6, 0.3, -0.1).finished());
  const auto minus = poisson_apply(lambda, w, x, -1, {16, 1e-10, 2});
  const auto plus = poisson_apply(lambda, wbar, x, +1, {16, 1e-10, 2});
  for (size_t i = 0; i < minus.value.size(); ++i)
    CHECK(std::abs(std::conj(minus.value.raw(i)) - plus.value.raw(i)) < 1e-10);
}

TEST_CASE("mollified delta converges to the closed-form image with order >= 1") {
  const int n = 2;
  const cplx lambda(-0.5, 0.0);
  const Vec zfull = (Vec(3) << 0.8, 0.2, -0.1).finished();
  const Vec x = chart_x(zfull);
  Vec nuinf = Vec::Zero(3);
  nuinf[0] = 1.0;  // the chart pole: P(x, nuinf) = z_0 exactly
  CHECK(std::abs(poisson_kernel(x, nuinf) - zfull[0]) < 1e-12);

  const cplx target = poisson_delta(lambda, n, {}).amplitude(zfull);
  std::vector<double> errs;
  for (const double eps : {0.6, 0.3, 0.15}) {
    const double delta = eps * eps;
    auto bump = [&](const Vec& nu) {
      const double t = (1.0 - nu.dot(nuinf)) / delta;
      return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0;
    };
    const double mass = integrate_sphere(n, bump, 1e-12, 64);
    const auto w = scalar_field(n, [&](const Vec& nu) { return cplx(bump(nu) / mass); });
    const auto res = poisson_apply(lambda, w, x, -1, {64, 1e-9, 3});
    errs.push_back(std::abs(res.value.raw(0) - target));
  }
  CHECK(errs[0] > errs[1]);
  CHECK(errs[1] > errs[2]);
  // Widths halve: order >= 1 in the width means successive ratios >= 2.
  CHECK(errs[0] / errs[1] >= 2.0);
  CHECK(errs[1] / errs[2] >= 2.0);
}

TEST_CASE("delta covectors: the transported boundary frame is the Z^* frame") {
  const int n = 2;
  const cplx lambda(0.4, 0.0);
  Vec nuinf = Vec::Zero(3);
  nuinf[0] = 1.0;
  const std::vector<Vec> zs = {(Vec(3) << 0.7, 0.1, -0.2).finished(),
                               (Vec(3) << 0.3, -0.4, 0.5).finished(),
                               (Vec(3) << 1.5, 0.0, 0.0).finished()};
  for (const Vec& z : zs) {
    const Vec x = chart_x(z);
    const UnitTangent rho = xi_pm(x, nuinf, -1);
    const Mat V = chart_frame(z);
    // (A^{-T} e_j^*)(V_a) = Z_j^*(Z_a) = delta_{ja}; extension by zero on xi.
    for (int j = 1; j <= n; ++j) {
      for (int a = 0; a <= n; ++a) {
        Vec v = V.col(a);
        v += minkowski_inner(v, rho.xi) * rho.xi;  // drop the flow component
        const Vec t = transport_A_inv(rho, -1, v);
        const double pair = t[j];
        CHECK(pair == doctest::Approx(j == a ? 1.0 : 0.0).epsilon(1e-7).scale(1.0));
      }
    }
    // Delta image bookkeeping: amplitude is P(x, nuinf)^{n+lambda}.
    const auto img = poisson_delta(lambda, n, {1});
    const cplx amp = std::pow(cplx(poisson_kernel(x, nuinf), 0.0), cplx(double(n)) + lambda);
    CHECK(std::abs(img.amplitude(z) - amp) < 1e-10 * std::abs(amp));
  }
  // Symmetric-component bookkeeping for the m = 2 image.
  const auto img2 = poisson_delta(lambda, n, {1, 2});
  const auto t2 = img2.sym_component(zs[0]);
  CHECK(std::abs(t2.at({1, 2}) - 0.5 * img2.amplitude(zs[0])) < 1e-14);
  CHECK(std::abs(t2.at({1, 1})) == 0.0);
  CHECK_THROWS_AS(poisson_delta(lambda, n, {0}), std::invalid_argument);
}

TEST_CASE("equivariance: N-weighted L-pullback data matches the translated "
          "tensor") {
  // P_lambda(w)(gamma x) . (gamma v) = P_lambda(w')(x) . v  where
  // w'(nu) = N_gamma(nu)^{lambda+m} (dL_gamma)^* w(L_gamma nu).
  const int n = 2, m = 1;
  const cplx lambda(0.2, 0.4);
  const Mat gamma = exp_basis(alg_X(n), 0.5) * exp_basis(alg_R(n, 2, 3), 0.7) *
                    exp_basis(alg_U(n, 1, +1), 0.3);
  const auto w = covector_field(n, [](const Vec& nu) {
    return std::vector<cplx>{cplx(0.8, 0.1) * nu[1], cplx(-0.3, 0.6),
                             cplx(0.5, -0.2) + 0.4 * nu[0]};
  });
  SphereField wprime;
  wprime.n = n;
  wprime.m = m;
  wprime.value = [&](const Vec& nu) {
    const auto ba = boundary_action(gamma, nu);
    const SymTensor<cplx> wl = w.value(ba.L);
    const cplx weight = std::pow(cplx(ba.N, 0.0), lambda + double(m));
    SymTensor<cplx> t(n + 1, 1);
    for (int a = 0; a <= n; ++a) {
      Vec e = Vec::Zero(n + 1);
      e[a] = 1.0;
      const Vec dl = boundary_differential(gamma, nu, Vec(e - e.dot(nu) * nu));
      t.at({a}) = weight * wl.eval({to_cvec(dl)});
    }
    return t;
  };

  const Vec x = chart_x((Vec(3) << 0.9, 0.2, 0.1).finished());
  const Vec gx = gamma * x;
  const QuadSpec spec{24, 1e-9, 2};
  const auto lhs_t = poisson_apply(lambda, w, gx, -1, spec);
  const auto rhs_t = poisson_apply(lambda, wprime, x, -1, spec);
  double scale = 0.0;
  for (size_t i = 0; i < rhs_t.value.size(); ++i)
    scale = std::max(scale, std::abs(rhs_t.value.raw(i)));
  for (int rep = 0; rep < 4; ++rep) {
    Vec v = gaussian_vec(n + 2);
    v -= minkowski_inner(v, x) * x;  // tangent at x
    const Vec gv = gamma * v;
    const cplx lhs = lhs_t.value.eval({to_cvec(gv)});
    const cplx rhs = rhs_t.value.eval({to_cvec(v)});
    CHECK(std::abs(lhs - rhs) < 1e-6 * std::max(1.0, scale));
  }

  // Linearity at a sample point (same nodes, so this is near-exact).
  const auto w2 = covector_field(n, [](const Vec& nu) {
    return std::vector<cplx>{cplx(0.1), cplx(0.7), cplx(-0.2) * nu[1]};
  });
  SphereField wsum;
  wsum.n = n;
  wsum.m = m;
  wsum.value = [&](const Vec& nu) {
    SymTensor<cplx> t = w.value(nu);
    t *= cplx(2.5);
    t += w2.value(nu);
    return t;
  };
  const auto a1 = poisson_apply(lambda, w, x, -1, spec);
  const auto a2 = poisson_apply(lambda, w2, x, -1, spec);
  const auto a3 = poisson_apply(lambda, wsum, x, -1, spec);
  for (size_t i = 0; i < a3.value.size(); ++i)
    CHECK(std::abs(a3.value.raw(i) - (cplx(2.5) * a1.value.raw(i) + a2.value.raw(i))) <
          1e-9 * std::max(1.0, scale));
}

TEST_CASE("boundary leading constant: values, zeros, poles, limits") {
  // n=2, m=0, lambda=1: Gamma(2)/(2 Gamma(2)) = 1/2.
  {
    const auto lc = boundary_leading_constant(2, 0, cplx(1.0, 0.0));
    CHECK(!lc.is_pole);
    CHECK(std::abs(lc.value - cplx(0.5)) < 1e-12);
  }
  // Generic n=2: a = b, so the value is 1/(lambda+n+m-1).
  {
    const auto lc = boundary_leading_constant(2, 1, cplx(0.3, 0.0));
    CHECK(std::abs(lc.value - cplx(1.0 / 2.3)) < 1e-12);
  }
  // Zero audit: n=3, m=2, lambda=-3 lies in the root set {-n-m+2..-n+1}.
  {
    const auto lc = boundary_leading_constant(3, 2, cplx(-3.0, 0.0));
    CHECK(!lc.is_pole);
    CHECK(std::abs(lc.value) == 0.0);
  }
  // All roots of the binomial-sum polynomial are zeros of the quotient.
  for (int lam = -3; lam <= -2; ++lam) {  // n=3, m=2: {-3, -2}
    const auto lc = boundary_leading_constant(3, 2, cplx(double(lam), 0.0));
    CHECK(!lc.is_pole);
    CHECK(std::abs(lc.value) == 0.0);
  }
  // Pole: n=3, m=0, lambda=-1.5 makes Gamma(lambda+n/2) blow up.
  {
    const auto lc = boundary_leading_constant(3, 0, cplx(-1.5, 0.0));
    CHECK(lc.is_pole);
    CHECK(lc.offending.find("Gamma(lambda+n/2)") != std::string::npos);
  }
  // Cancelling pair: n=3, m=1, lambda=-3: linear zero against Gamma(-1) pole,
  // limit value Gamma(-3/2) * (-1)^1 * 1! = -4 sqrt(pi)/3.
  {
    const auto lc = boundary_leading_constant(3, 1, cplx(-3.0, 0.0));
    CHECK(!lc.is_pole);
    const double expect = -4.0 * std::sqrt(std::numbers::pi) / 3.0;
    CHECK(std::abs(lc.value - cplx(expect)) < 1e-10);
  }
  // m=0 reduction: same quotient with the linear factor lambda+n-1.
  {
    const auto a = boundary_leading_constant(2, 0, cplx(0.7, 0.2));
    const cplx direct = cgamma(cplx(0.7, 0.2) + 1.0) /
                        ((cplx(0.7, 0.2) + 1.0) * cgamma(cplx(0.7, 0.2) + 1.0));
    CHECK(std::abs(a.value - direct) < 1e-12);
  }
}

TEST_CASE("divergent-looking integrands are flagged") {
  const int n = 2;
  Vec x = Vec::Zero(n + 2);
  x[0] = std::cosh(3.8);
  x[1] = std::sinh(3.8);  // deep towards the boundary
  const auto w = scalar_field(n, [](const Vec&) { return cplx(1.0); });
  const auto res = poisson_apply(cplx(12.0, 0.0), w, x, -1, {8, 1e-10, 1});
  CHECK(res.warning);
  CHECK(!res.note.empty());
}
