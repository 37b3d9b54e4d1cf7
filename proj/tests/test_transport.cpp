// Bundle transport, twist, and the pairing change of variables.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "resonance/frame_transport.hpp"

using namespace reso;

namespace {

std::mt19937_64 rng(911402);

Vec gaussian_vec(int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = g(rng);
  return v;
}

UnitTangent random_tangent(int n) {
  // Ball point of radius <= ~0.8 lifted to the hyperboloid, random direction.
  Vec y = 0.35 * gaussian_vec(n + 1);
  if (y.norm() > 0.8) y *= 0.8 / y.norm();
  Vec x = psi_ball_inv(y);
  Vec xi = gaussian_vec(n + 2);
  xi += minkowski_inner(x, xi) * x * 0.0;  // raw seed; make() projects
  xi -= minkowski_inner(x, xi) * x;
  xi /= std::sqrt(-minkowski_inner(xi, xi));
  return UnitTangent::make(x, xi);
}

Mat random_group(int n, int factors = 4) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Mat M = Mat::Identity(n + 2, n + 2);
  const auto basis = algebra_basis(n);
  std::uniform_int_distribution<int> pick(0, int(basis.size()) - 1);
  for (int f = 0; f < factors; ++f) M = M * exp_basis(basis[pick(rng)], u(rng));
  return M;
}

/// Random tangent vector to the sphere at nu.
Vec random_sphere_tangent(const Vec& nu) {
  Vec z = gaussian_vec(int(nu.size()));
  z -= z.dot(nu) * nu;
  return z;
}

}  // namespace

TEST_CASE("stable/unstable splitting: exact contraction and spanning") {
  for (int n : {1, 2, 3}) {
    const UnitTangent rho = random_tangent(n);
    const SplitBasis sb = stable_unstable(rho);
    REQUIRE(int(sb.Es.size()) == n);
    REQUIRE(int(sb.Eu.size()) == n);
    const double t = 1.0;
    for (const auto& w : sb.Es) {
      const auto pushed = flow_push(rho, t, w);
      CHECK(tangent_pair_norm(pushed) ==
            doctest::Approx(std::exp(-t) * tangent_pair_norm(w)).epsilon(1e-12));
    }
    for (const auto& w : sb.Eu) {
      const auto pushed = flow_push(rho, t, w);
      CHECK(tangent_pair_norm(pushed) ==
            doctest::Approx(std::exp(t) * tangent_pair_norm(w)).epsilon(1e-12));
    }
    // E_s + E_u + E_0 spans the (2n+1)-dimensional tangent space.
    Mat S(2 * (n + 2), 2 * n + 1);
    auto put = [&](int col, const TangentPair& w) {
      S.col(col).head(n + 2) = w.first;
      S.col(col).tail(n + 2) = w.second;
    };
    put(0, sb.E0);
    for (int i = 0; i < n; ++i) {
      put(1 + i, sb.Es[i]);
      put(1 + n + i, sb.Eu[i]);
    }
    CHECK(Eigen::FullPivLU<Mat>(S).rank() == 2 * n + 1);
  }
}

TEST_CASE("transport A: base point, isometry, round trip, fiber membership") {
  for (int n : {1, 2, 3}) {
    // Base point rho = (e0, e1): <(0,zeta), e0>_M = 0, so A_pm zeta = (0,zeta).
    Vec e0 = Vec::Zero(n + 2), e1 = Vec::Zero(n + 2);
    e0[0] = 1.0;
    e1[1] = 1.0;
    const UnitTangent base{e0, e1};
    Vec zeta0 = Vec::Zero(n + 1);
    zeta0[1] = 0.7;  // perpendicular to B_pm = +-e1 of the sphere
    for (int sign : {+1, -1}) {
      const Vec u = transport_A(base, sign, zeta0);
      CHECK(u[0] == doctest::Approx(0.0).epsilon(1e-14));
      CHECK((u.tail(n + 1) - zeta0).norm() == doctest::Approx(0.0).epsilon(1e-14));
    }
    for (int rep = 0; rep < 20; ++rep) {
      const UnitTangent rho = random_tangent(n);
      const auto bm = boundary_maps(rho);
      for (int sign : {+1, -1}) {
        const Vec& B = (sign > 0) ? bm.b_plus : bm.b_minus;
        const Vec zeta = random_sphere_tangent(B);
        const Vec u = transport_A(rho, sign, zeta);
        // In the fiber: perpendicular to x and xi.
        CHECK(std::abs(minkowski_inner(u, rho.x)) < 1e-10);
        CHECK(std::abs(minkowski_inner(u, rho.xi)) < 1e-10);
        // Isometry in g_H.
        CHECK(std::sqrt(fiber_inner(u, u)) == doctest::Approx(zeta.norm()).epsilon(1e-11));
        // Round trip.
        CHECK((transport_A_inv(rho, sign, u) - zeta).norm() < 1e-12 * (1.0 + zeta.norm()));
        // Non-tangent input is projected and flagged.
        bool corrected = false;
        transport_A(rho, sign, Vec(zeta + 1e-4 * B), &corrected);
        CHECK(corrected);
      }
    }
  }
}

TEST_CASE("transport A equivariance under the group") {
  for (int n : {1, 2}) {
    for (int rep = 0; rep < 10; ++rep) {
      const UnitTangent rho = random_tangent(n);
      const Mat gamma = random_group(n);
      const UnitTangent grho = act(gamma, rho);
      const auto bm = boundary_maps(rho);
      for (int sign : {+1, -1}) {
        const Vec& B = (sign > 0) ? bm.b_plus : bm.b_minus;
        const Vec zeta = random_sphere_tangent(B);
        // Exact boundary differential agrees with central differences.
        const Vec dl = boundary_differential(gamma, B, zeta);
        {
          const double h = 1e-6;
          Vec lo = B - h * zeta, hi = B + h * zeta;
          lo /= lo.norm();
          hi /= hi.norm();
          const Vec num =
              (boundary_action(gamma, hi).L - boundary_action(gamma, lo).L) / (2.0 * h);
          CHECK((dl - num).norm() < 1e-6 * (1.0 + dl.norm()));
        }
        // A_pm(gamma.rho) dL_gamma zeta = N_gamma(B_pm)^{-1} gamma (A_pm zeta).
        const Vec lhs = transport_A(grho, sign, dl);
        const double N = boundary_action(gamma, B).N;
        const Vec rhs = (1.0 / N) * (gamma * transport_A(rho, sign, zeta));
        CHECK((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
      }
    }
  }
}

TEST_CASE("pullback Q: order zero, trace-freeness, and the flow eigenvalue") {
  const int n = 2;
  const UnitTangent rho = random_tangent(n);
  // m = 0: plain composition with B_pm.
  BoundaryTensorField w0 = [](const Vec& nu, const std::vector<Vec>&) {
    return std::sin(nu[0]) + nu[1] * nu[2];
  };
  const auto bm = boundary_maps(rho);
  CHECK(pullback_Q(0, w0, -1, rho).raw(0) == doctest::Approx(w0(bm.b_minus, {})));
  CHECK(pullback_Q(0, w0, +1, rho).raw(0) == doctest::Approx(w0(bm.b_plus, {})));

  // Pointwise trace-free boundary 2-tensor stays trace-free after pullback.
  Mat S0 = Mat::Random(n + 1, n + 1);
  S0 = (S0 + S0.transpose()).eval();
  BoundaryTensorField wtf = [S0, n](const Vec& nu, const std::vector<Vec>& z) {
    const double tr_tangent = S0.trace() - nu.dot(S0 * nu);
    return double(z[0].dot(S0 * z[1]) - (z[0].dot(z[1])) * tr_tangent / n);
  };
  for (int sign : {+1, -1}) {
    const auto q = pullback_Q(2, wtf, sign, rho);
    CHECK(is_trace_free(q, 1e-10));
  }

  // v = Phi_-^lambda Q_-(w): X v = -lambda v along the flow, probed through
  // coefficients against fixed boundary tangent vectors (B_- is flow-invariant).
  const double lambda = 0.7;
  const Vec zeta = random_sphere_tangent(bm.b_minus);
  BoundaryTensorField w1 = [](const Vec& nu, const std::vector<Vec>& z) {
    return double((1.0 + nu[0] * nu[0]) * z[0][1] + std::cos(nu[1]) * z[0][2]);
  };
  auto probe = [&](double t) {
    const UnitTangent rt = geodesic_flow(t, rho);
    const auto bt = boundary_maps(rt);
    return std::pow(bt.phi_minus, lambda) * w1(bt.b_minus, {zeta});
  };
  const double h = 1e-5;
  const double deriv = (probe(h) - probe(-h)) / (2.0 * h);
  CHECK(deriv == doctest::Approx(-lambda * probe(0.0)).epsilon(1e-6));
}

TEST_CASE("eta twist: identity at 0, eigenvalue on the eta line, fixes eta-perp") {
  const int n = 3;
  CHECK((eta_twist_C(Vec::Zero(n)) - Mat::Identity(n, n)).norm() == 0.0);
  const Vec eta = gaussian_vec(n);
  const double s = eta.squaredNorm();
  const Mat C = eta_twist_C(eta);
  CHECK((C * eta - ((1.0 - s) / (1.0 + s)) * eta).norm() < 1e-13 * (1.0 + eta.norm()));
  Vec perp = gaussian_vec(n);
  perp -= perp.dot(eta) / s * eta;
  CHECK((C * perp - perp).norm() < 1e-13 * (1.0 + perp.norm()));
}

TEST_CASE("Psi: trivial point, inverse, manifold membership, invariants") {
  for (int n : {1, 2}) {
    const UnitTangent rho = random_tangent(n);
    const EFiberBasis fib = fiber_basis(rho);
    // eta = 0: Psi(x, xi, 0) = (x, xi, xi).
    {
      const auto im = psi_map(rho, Vec(Vec::Zero(n + 2)));
      CHECK((im.y - rho.x).norm() < 1e-14);
      CHECK((im.eta_minus - rho.xi).norm() < 1e-14);
      CHECK((im.eta_plus - rho.xi).norm() < 1e-14);
    }
    for (int rep = 0; rep < 20; ++rep) {
      Vec coords = gaussian_vec(n);
      if (coords.norm() > 5.0) coords *= 5.0 / coords.norm();
      const Vec eta = fib.ambient(coords);
      const double s = fiber_inner(eta, eta);
      const auto im = psi_map(rho, eta);
      // On-manifold: y on the hyperboloid, eta_pm unit tangents at y.
      CHECK(minkowski_inner(im.y, im.y) == doctest::Approx(1.0).epsilon(1e-10));
      for (const Vec* e : {&im.eta_minus, &im.eta_plus}) {
        CHECK(fiber_inner(*e, *e) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(minkowski_inner(*e, im.y)) < 1e-9);
      }
      // Round trip.
      const auto [rho2, eta2] = psi_inv(im);
      CHECK((rho2.x - rho.x).norm() < 1e-11 * (1.0 + rho.x.norm()));
      CHECK((rho2.xi - rho.xi).norm() < 1e-11 * (1.0 + rho.xi.norm()));
      CHECK((eta2 - eta).norm() < 1e-10 * (1.0 + eta.norm()));
      // Invariants: B_pm preserved, Phi_pm scaled, |eta_+ + eta_-| closed form.
      const auto bm = boundary_maps(rho);
      const auto bmm = boundary_maps(UnitTangent{im.y, im.eta_minus});
      const auto bmp = boundary_maps(UnitTangent{im.y, im.eta_plus});
      CHECK((bmm.b_minus - bm.b_minus).norm() < 1e-10);
      CHECK((bmp.b_plus - bm.b_plus).norm() < 1e-10);
      CHECK(bmm.phi_minus == doctest::Approx(bm.phi_minus / std::sqrt(1.0 + s)).epsilon(1e-10));
      CHECK(bmp.phi_plus == doctest::Approx(bm.phi_plus / std::sqrt(1.0 + s)).epsilon(1e-10));
      const Vec sum = im.eta_plus + im.eta_minus;
      CHECK(std::sqrt(fiber_inner(sum, sum)) ==
            doctest::Approx(2.0 / std::sqrt(1.0 + s)).epsilon(1e-10));
      // Transport relation between the two configurations.
      for (int sign : {+1, -1}) {
        const Vec& B = (sign > 0) ? bm.b_plus : bm.b_minus;
        const Vec zeta = random_sphere_tangent(B);
        const UnitTangent rho_pm{im.y, (sign > 0) ? im.eta_plus : im.eta_minus};
        const Vec lhs = transport_A(rho_pm, sign, zeta);
        const Vec Axz = transport_A(rho, sign, zeta);
        const Vec rhs = Axz + (fiber_inner(Axz, eta) / std::sqrt(1.0 + s)) *
                                  (rho.x + double(sign) * rho.xi);
        CHECK((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
      }
    }
    // Singular set rejection.
    {
      const auto im = psi_map(rho, fib.ambient(Vec(Vec::Zero(n))));
      PsiImage bad = im;
      bad.eta_plus = -bad.eta_minus;
      CHECK_THROWS_AS(psi_inv(bad), std::domain_error);
    }
  }
}

TEST_CASE("Jacobian of Psi matches 2^n (1+|eta|^2)^{-n}") {
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int n : {1, 2, 3}) {
    const UnitTangent rho = random_tangent(n);
    const EFiberBasis fib = fiber_basis(rho);
    // eta = 0 gives exactly 2^n; |eta|^2 = 1 gives 1.
    CHECK(jacobian_psi(rho, Vec(Vec::Zero(n + 2))) ==
          doctest::Approx(std::pow(2.0, n)).epsilon(1e-5));
    for (int rep = 0; rep < 5; ++rep) {
      Vec coords = gaussian_vec(n);
      coords *= std::sqrt(u(rng)) / std::max(coords.norm(), 1e-12);
      const Vec eta = fib.ambient(coords);
      const double s = fiber_inner(eta, eta);
      CHECK(jacobian_psi(rho, eta) ==
            doctest::Approx(jacobian_psi_closed(n, s)).epsilon(1e-5));
    }
  }
}

namespace {

/// The m=1 pairing blocks of the twist identity at a fixed configuration.
struct TwistSetup {
  UnitTangent rho;
  Vec eta;
  PsiImage im;
  Mat ty_frame;  // Riemannian-orthonormal basis of T_y (n+1 columns)
  EFiberBasis fib;
  Mat C;

  explicit TwistSetup(int n) {
    rho = random_tangent(n);
    fib = fiber_basis(rho);
    Vec coords = gaussian_vec(n);
    eta = fib.ambient(coords);
    im = psi_map(rho, eta);
    const Mat F = frame_at(UnitTangent::make(im.y, im.eta_minus));
    ty_frame = F.rightCols(F.cols() - 1);
    C = eta_twist_C(fib.coords(eta));
  }

  /// LHS block: <zeta_+ o A_+(y,eta_+)^{-1}, zeta_- o A_-(y,eta_-)^{-1}>
  /// over T_y^*, via the orthonormal frame.  The covectors live on the
  /// fibers E(y, eta_pm) and are extended by zero on the eta_pm lines, so
  /// each frame vector is first projected onto the corresponding fiber.
  double lhs(const Vec& zp, const Vec& zm) const {
    double acc = 0.0;
    for (int a = 0; a < ty_frame.cols(); ++a) {
      const Vec f = ty_frame.col(a);
      const Vec fp = f - fiber_inner(f, im.eta_plus) * im.eta_plus;
      const Vec fm = f - fiber_inner(f, im.eta_minus) * im.eta_minus;
      const double ap = zp.dot(transport_A_inv(UnitTangent{im.y, im.eta_plus}, +1, fp));
      const double am = zm.dot(transport_A_inv(UnitTangent{im.y, im.eta_minus}, -1, fm));
      acc += ap * am;
    }
    return acc;
  }

  /// RHS block: (C beta_+) . beta_-, beta_pm the fiber coefficients of
  /// zeta_pm o A_pm(x,xi)^{-1}.
  double rhs(const Vec& zp, const Vec& zm) const {
    const int n = fib.n();
    Vec bp(n), bm(n);
    for (int i = 0; i < n; ++i) {
      bp[i] = zp.dot(transport_A_inv(rho, +1, Vec(fib.vectors.col(i))));
      bm[i] = zm.dot(transport_A_inv(rho, -1, Vec(fib.vectors.col(i))));
    }
    return (C * bp).dot(bm);
  }
};

}  // namespace

TEST_CASE("twist identity for m = 1 and m = 2") {
  for (int n : {1, 2, 3}) {
    for (int rep = 0; rep < 8; ++rep) {
      TwistSetup T(n);
      const auto bm = boundary_maps(T.rho);
      auto ztan = [&](int sign) {
        return random_sphere_tangent(sign > 0 ? bm.b_plus : bm.b_minus);
      };
      // m = 1.
      const Vec zp = ztan(+1), zm = ztan(-1);
      CHECK(T.lhs(zp, zm) == doctest::Approx(T.rhs(zp, zm)).epsilon(1e-9));
      // m = 2 with non-simple tensors: zeta_pm = a (x) b + c (x) d; the
      // pairing expands over the cross terms.
      const Vec a = ztan(+1), b = ztan(+1), c = ztan(+1), d = ztan(+1);
      const Vec e = ztan(-1), f = ztan(-1), g = ztan(-1), h = ztan(-1);
      const double lhs2 = T.lhs(a, e) * T.lhs(b, f) + T.lhs(a, g) * T.lhs(b, h) +
                          T.lhs(c, e) * T.lhs(d, f) + T.lhs(c, g) * T.lhs(d, h);
      const double rhs2 = T.rhs(a, e) * T.rhs(b, f) + T.rhs(a, g) * T.rhs(b, h) +
                          T.rhs(c, e) * T.rhs(d, f) + T.rhs(c, g) * T.rhs(d, h);
      CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-9));
    }
  }
}

TEST_CASE("equivariance of Q: gamma-equivariant boundary data gives an "
          "equivariant section") {
  const int n = 2, m = 1;
  const double s = -6.0;  // makes the orbit sum converge geometrically
  // A loxodromic gamma: boost along the axis through +-e1, slight rotation.
  const Mat gamma =
      exp_basis(alg_X(n), 0.6) * exp_basis(alg_R(n, 2, 3), 0.4);
  const int K = 40;
  std::vector<Mat> powers;  // gamma^{-K} .. gamma^{K}
  {
    Mat g = Mat::Identity(n + 2, n + 2);
    std::vector<Mat> pos{g};
    for (int k = 1; k <= K; ++k) pos.push_back(pos.back() * gamma);
    const Mat ginv = gamma.inverse();
    std::vector<Mat> neg{g};
    for (int k = 1; k <= K; ++k) neg.push_back(neg.back() * ginv);
    for (int k = K; k >= 1; --k) powers.push_back(neg[k]);
    for (int k = 0; k <= K; ++k) powers.push_back(pos[k]);
  }
  const Vec cvec = gaussian_vec(n + 1), dvec = gaussian_vec(n + 1);
  auto w_seed = [&](const Vec& nu, const Vec& zeta) {
    return (cvec.dot(nu) + 0.3) * dvec.dot(zeta);
  };
  // Orbit sum: w = sum_k N_{gamma^k}^{s+m} (w_seed o L_{gamma^k}, dL_{gamma^k}).
  auto w = [&](const Vec& nu, const Vec& zeta) {
    double acc = 0.0;
    for (const Mat& gk : powers) {
      const auto ba = boundary_action(gk, nu);
      acc += std::pow(ba.N, s + m) * w_seed(ba.L, boundary_differential(gk, nu, zeta));
    }
    return acc;
  };
  // The summed w satisfies L_gamma^* w = N^{-s-m} w up to the orbit tails.
  {
    const Vec nu = Vec(gaussian_vec(n + 1)).normalized();
    const Vec zeta = random_sphere_tangent(nu);
    const auto ba = boundary_action(gamma, nu);
    const double lhs = w(ba.L, boundary_differential(gamma, nu, zeta));
    const double rhs = std::pow(ba.N, -s - m) * w(nu, zeta);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
  // v = Phi_-^s Q_-(w) is then equivariant: v(gamma.rho)(gamma.eta) = v(rho)(eta).
  auto v = [&](const UnitTangent& rho, const Vec& eta_ambient) {
    const auto bmq = boundary_maps(rho);
    return std::pow(bmq.phi_minus, s) *
           w(bmq.b_minus, transport_A_inv(rho, -1, eta_ambient));
  };
  for (int rep = 0; rep < 5; ++rep) {
    const UnitTangent rho = random_tangent(n);
    const Vec eta = fiber_basis(rho).ambient(gaussian_vec(n));
    const UnitTangent grho = act(gamma, rho);
    const Vec geta = gamma * eta;
    CHECK(v(grho, geta) == doctest::Approx(v(rho, eta)).epsilon(1e-8));
  }
}

TEST_CASE("tensor pullback through the twist is consistent with slotwise C") {
  const int n = 3, m = 2;
  const Vec eta = gaussian_vec(n);
  const Mat C = eta_twist_C(eta);
  SymTensor<double> u(n, m);
  std::normal_distribution<double> g(0.0, 1.0);
  for (size_t i = 0; i < u.size(); ++i) u.raw(i) = g(rng);
  const auto pulled = tensor_pullback(u, C);
  // Check against direct evaluation on random vectors.
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> v1(n), v2(n);
    Vec w1(n), w2(n);
    for (int i = 0; i < n; ++i) {
      w1[i] = g(rng);
      w2[i] = g(rng);
    }
    const Vec cw1 = C * w1, cw2 = C * w2;
    for (int i = 0; i < n; ++i) {
      v1[i] = cw1[i];
      v2[i] = cw2[i];
    }
    const double direct = u.eval({v1, v2});
    std::vector<double> p1(n), p2(n);
    for (int i = 0; i < n; ++i) {
      p1[i] = w1[i];
      p2[i] = w2[i];
    }
    CHECK(pulled.eval({p1, p2}) == doctest::Approx(direct).epsilon(1e-12));
  }
}
