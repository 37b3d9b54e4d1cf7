// Command-line front end: spectrum ingestion, resonance/band-plot emission,
// Weyl reports, constant evaluation, and the verification harness.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/schema error.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resonance/horocyclic.hpp"
#include "resonance/spectrum.hpp"

using json = nlohmann::json;
using namespace reso;

namespace {

// ---------------------------------------------------------------------------
// Formatting helpers.

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt15(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

std::string fmt15c(cplx z) {
  std::string s = fmt15(z.real());
  if (z.imag() != 0.0) s += (z.imag() >= 0 ? " + " : " - ") + fmt15(std::abs(z.imag())) + "i";
  return s;
}

/// Parse "a", "a+bi", "a-bi", "bi" into a complex number.
cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  if (s.back() == 'i' || s.back() == 'I') {
    s.pop_back();
    // Split at the last +/- that is not a leading sign or part of an exponent.
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
      if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) {
      if (s.empty() || s == "+" || s == "-") s += "1";
      return {0.0, std::stod(s)};
    }
    std::string im = s.substr(split);
    if (im == "+" || im == "-") im += "1";
    return {std::stod(s.substr(0, split)), std::stod(im)};
  }
  return {std::stod(s), 0.0};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << text;
}

// ---------------------------------------------------------------------------
// Spectrum file ingestion.

struct SpectrumFile {
  int n = 0;
  std::optional<double> volume;
  std::vector<SpectrumEntry> entries;
};

SpectrumFile load_spectrum(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open input file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("input is not valid JSON: " + std::string(e.what()));
  }
  SpectrumFile f;
  if (!j.is_object()) throw std::invalid_argument("input: top level must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("input field 'n': required integer");
  f.n = j["n"].get<int>();
  if (f.n < 1) throw std::invalid_argument("input field 'n': must be >= 1");
  if (j.contains("volume")) {
    if (!j["volume"].is_number()) throw std::invalid_argument("input field 'volume': must be a number");
    f.volume = j["volume"].get<double>();
  }
  if (!j.contains("entries") || !j["entries"].is_array())
    throw std::invalid_argument("input field 'entries': required array");
  int idx = 0;
  for (const auto& e : j["entries"]) {
    const std::string where = "entries[" + std::to_string(idx) + "]";
    if (!e.is_object()) throw std::invalid_argument(where + ": must be an object");
    for (const char* key : {"m", "sigma", "mult"})
      if (!e.contains(key)) throw std::invalid_argument(where + "." + key + ": required");
    if (!e["m"].is_number_integer() || e["m"].get<int>() < 0)
      throw std::invalid_argument(where + ".m: must be a nonnegative integer");
    if (!e["sigma"].is_number()) throw std::invalid_argument(where + ".sigma: must be a number");
    if (!e["mult"].is_number_integer() || e["mult"].get<int>() < 1)
      throw std::invalid_argument(where + ".mult: must be a positive integer");
    f.entries.push_back({e["m"].get<int>(), e["sigma"].get<double>(), e["mult"].get<int>()});
    ++idx;
  }
  try {
    validate_spectrum(f.n, f.entries);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("input entries: ") + e.what());
  }
  return f;
}

// ---------------------------------------------------------------------------
// resonances / band-plot emission.

// JSON emission is hand-rolled so that every float carries exactly 17
// significant digits and output bytes are deterministic.
int cmd_resonances(const std::string& input, const std::string& out, const Window& w,
                   const std::string& format) {
  const SpectrumFile f = load_spectrum(input);
  const EnumerationResult res = enumerate_resonances(f.n, f.entries, w);
  if (format == "json") {
    std::ostringstream os;
    os << "{\n  \"n\": " << f.n << ",\n  \"window\": {\"re_min\": " << fmt17(w.re_min)
       << ", \"re_max\": " << fmt17(w.re_max) << ", \"im_max\": " << fmt17(w.im_max)
       << "},\n  \"resonances\": [";
    for (size_t i = 0; i < res.entries.size(); ++i) {
      const auto& e = res.entries[i];
      os << (i ? "," : "") << "\n    {\"re\": " << fmt17(e.lambda.real())
         << ", \"im\": " << fmt17(e.lambda.imag()) << ", \"mult\": " << e.mult
         << ", \"band_m\": " << e.m << ", \"ell\": " << e.ell
         << ", \"source_sigma\": " << fmt17(e.source_sigma) << ", \"flags\": \""
         << e.flags_string() << "\"}";
    }
    os << (res.entries.empty() ? "]" : "\n  ]") << ",\n  \"excluded\": [";
    for (size_t i = 0; i < res.excluded.size(); ++i) {
      const auto& x = res.excluded[i];
      os << (i ? "," : "") << "\n    {\"re\": " << fmt17(x.lambda.real())
         << ", \"im\": " << fmt17(x.lambda.imag()) << ", \"mult\": " << x.mult
         << ", \"band_m\": " << x.m << ", \"ell\": " << x.ell
         << ", \"source_sigma\": " << fmt17(x.source_sigma) << ", \"reason\": \"" << x.reason
         << "\"}";
    }
    os << (res.excluded.empty() ? "]" : "\n  ]") << "\n}\n";
    write_output(out, os.str());
  } else {
    std::ostringstream os;
    os << "re,im,mult,band_m,ell,source_sigma,flags\n";
    for (const auto& e : res.entries)
      os << fmt17(e.lambda.real()) << ',' << fmt17(e.lambda.imag()) << ',' << e.mult << ','
         << e.m << ',' << e.ell << ',' << fmt17(e.source_sigma) << ',' << e.flags_string()
         << '\n';
    os << "# excluded: re,im,mult,band_m,ell,source_sigma,reason\n";
    for (const auto& x : res.excluded)
      os << "# " << fmt17(x.lambda.real()) << ',' << fmt17(x.lambda.imag()) << ',' << x.mult
         << ',' << x.m << ',' << x.ell << ',' << fmt17(x.source_sigma) << ',' << x.reason
         << '\n';
    write_output(out, os.str());
  }
  return 0;
}

int cmd_band_plot(const std::string& input, const std::string& out, const Window& w) {
  const SpectrumFile f = load_spectrum(input);
  const EnumerationResult res = enumerate_resonances(f.n, f.entries, w);
  std::ostringstream os;
  os << "{\n  \"n\": " << f.n << ",\n  \"points\": [";
  for (size_t i = 0; i < res.entries.size(); ++i) {
    const auto& e = res.entries[i];
    os << (i ? "," : "") << "\n    {\"re\": " << fmt17(e.lambda.real())
       << ", \"im\": " << fmt17(e.lambda.imag()) << ", \"m\": " << e.m << ", \"ell\": " << e.ell
       << ", \"mult\": " << e.mult << "}";
  }
  os << (res.entries.empty() ? "]" : "\n  ]") << ",\n  \"band_lines\": [";
  bool first = true;
  for (int m = 0; -0.5 * f.n - m >= w.re_min - 1e-12; ++m, first = false)
    os << (first ? "" : ",") << "\n    {\"m\": " << m << ", \"re\": " << fmt17(-0.5 * f.n - m)
       << "}";
  os << (first ? "]" : "\n  ]") << ",\n  \"exceptional_markers\": [";
  const auto exc = exceptional_points_in(f.n, w.re_min);
  for (size_t i = 0; i < exc.size(); ++i) os << (i ? ", " : "") << fmt17(exc[i]);
  os << "]\n}\n";
  write_output(out, os.str());
  return 0;
}

// ---------------------------------------------------------------------------
// weyl / constants.

int cmd_weyl(int n, int m, double R, double volume, const std::string& out) {
  const WeylResult r = weyl(n, m, R, volume);
  std::ostringstream os;
  os << "c0 = " << fmt15(r.c0) << "\n"
     << "c1 = " << fmt15(r.c1) << "\n"
     << "c2 = " << fmt15(r.c2) << "\n"
     << "leading_band_count = " << fmt15(r.leading_band_count) << "\n"
     << "leading_eig_count = " << fmt15(r.leading_eig_count) << "\n";
  write_output(out, os.str());
  return 0;
}

int cmd_constants(const std::string& name, int n, int m, int ell, const std::string& lambda_str,
                  double sigma, double alpha, double beta, double rpar, const std::string& out) {
  std::ostringstream os;
  const cplx lambda = lambda_str.empty() ? cplx(0.0, 0.0) : parse_complex(lambda_str);
  if (name == "c00") {
    os << "c00 = " << fmt15c(c00(n, lambda)) << "\n";
  } else if (name == "pairing") {
    const auto pc = pairing_constant(n, m, ell, lambda);
    if (pc.is_pole)
      os << "pairing = pole (" << pc.note << ")\n";
    else
      os << "pairing = " << fmt15c(pc.value) << "\n";
  } else if (name == "indicial") {
    const auto roots = indicial_roots(n, m, sigma);
    os << "indicial = {";
    for (size_t i = 0; i < roots.size(); ++i)
      os << (i ? ", " : "") << fmt15c(roots[i].lambda) << " [family " << roots[i].family << ", k="
         << roots[i].k << "]";
    os << "}\n";
  } else if (name == "leading") {
    const auto lc = boundary_leading_constant(n, m, lambda);
    if (lc.is_pole)
      os << "leading = pole (" << lc.offending << ")\n";
    else
      os << "leading = " << fmt15c(lc.value) << "\n";
  } else if (name == "hadamard") {
    os << "hadamard = " << fmt15c(hadamard_constant(alpha, beta)) << "\n";
  } else if (name == "sphere-moment") {
    os << "sphere-moment = " << fmt15(sphere_moment_coeff(n, ell)) << "\n";
  } else if (name == "twist-sum") {
    os << "twist-sum = " << fmt15(twist_sum(n, m, rpar)) << "\n";
  } else if (name == "asysa2") {
    const auto c = asysa2_constant(n, m, lambda);
    if (c.is_pole)
      os << "asysa2 = pole (" << c.note << ")\n";
    else
      os << "asysa2 = " << fmt15c(c.value) << "\n";
  } else {
    throw CLI::ValidationError("--name", "unknown constant: " + name);
  }
  write_output(out, os.str());
  return 0;
}

// ---------------------------------------------------------------------------
// verify: identity suites with per-identity max deviations.

struct VerifyReport {
  int failures = 0;
  void check(const std::string& name, double deviation, double tol) {
    const bool ok = deviation <= tol;
    if (!ok) ++failures;
    std::cout << (ok ? "  [pass] " : "  [FAIL] ") << name << ": max deviation " << fmt15(deviation)
              << " (tol " << fmt15(tol) << ")\n";
  }
};

double imat_max(const IMat& M) {
  long long worst = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) worst = std::max(worst, std::llabs(M(i, j)));
  return double(worst);
}

void suite_lie(VerifyReport& rep, int ncap, double /*tol*/) {
  std::cout << "suite lie (exact integer arithmetic, n = 1.." << ncap << ")\n";
  double dev_xu = 0, dev_uu = 0, dev_xr = 0, dev_xa = 0;
  for (int n = 1; n <= ncap; ++n) {
    for (int s : {+1, -1})
      for (int i = 1; i <= n; ++i) {
        const auto u = alg_U(n, i, s);
        dev_xu = std::max(dev_xu,
                          imat_max(IMat(bracket(alg_X(n), u).mat - (long long)(s)*u.mat)));
        for (int j = 1; j <= n; ++j)
          dev_uu = std::max(dev_uu, imat_max(bracket(u, alg_U(n, j, s)).mat));
      }
    for (int i = 2; i <= n + 1; ++i)
      for (int j = i + 1; j <= n + 1; ++j)
        dev_xr = std::max(dev_xr, imat_max(bracket(alg_X(n), alg_R(n, i, j)).mat));
    for (int k = 2; k <= n + 1; ++k)
      dev_xa = std::max(
          dev_xa, imat_max(IMat(bracket(alg_X(n), alg_A(n, k)).mat - alg_R(n, 1, k).mat)));
  }
  rep.check("[X, U_i^s] = s U_i^s", dev_xu, 0.0);
  rep.check("[U_i^s, U_j^s] = 0", dev_uu, 0.0);
  rep.check("[X, R_ij] = 0 (i,j >= 2)", dev_xr, 0.0);
  rep.check("[X, A_k] = R_1k", dev_xa, 0.0);
}

void suite_tensor(VerifyReport& rep, unsigned seed, double tol) {
  std::cout << "suite tensor (N = 4, m = 3)\n";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-5, 5);
  const int N = 4, m = 3;
  SymTensor<double> u(N, m);
  for (size_t i = 0; i < u.size(); ++i) u.raw(i) = coef(rng);

  // T I u - I T u is proportional to u (the commutation identity); estimate
  // the constant from the largest coefficient and check proportionality.
  const SymTensor<double> lhs = trace(insert_I(u));
  const SymTensor<double> rhs = insert_I(trace(u));
  size_t imax = 0;
  for (size_t i = 0; i < u.size(); ++i)
    if (std::abs(u.raw(i)) > std::abs(u.raw(imax))) imax = i;
  const double c = (lhs.raw(imax) - rhs.raw(imax)) / u.raw(imax);
  double dev = 0.0;
  for (size_t i = 0; i < u.size(); ++i)
    dev = std::max(dev, std::abs(lhs.raw(i) - rhs.raw(i) - c * u.raw(i)));
  rep.check("T I - I T proportional to identity", dev, tol);

  // Trace-free decomposition round-trip.
  const auto parts = decompose_trace_free(u);
  SymTensor<double> back(N, m);
  for (size_t r = 0; r < parts.size(); ++r) {
    SymTensor<double> piece = parts[r];
    if (!is_trace_free(piece, 1e-8)) rep.check("decomposition parts trace-free", 1.0, tol);
    for (size_t k = 0; k < r; ++k) piece = insert_I(piece);
    for (size_t i = 0; i < back.size(); ++i) back.raw(i) += piece.raw(i);
  }
  dev = 0.0;
  for (size_t i = 0; i < u.size(); ++i) dev = std::max(dev, std::abs(back.raw(i) - u.raw(i)));
  rep.check("decomposition round-trip", dev, tol);

  // Polynomial bridge: round-trip and Delta_E P_u = -m(m-1) P_{T u}.
  const auto p = poly_bridge(u);
  const auto u2 = poly_bridge_inv(p);
  dev = 0.0;
  for (size_t i = 0; i < u.size(); ++i) dev = std::max(dev, std::abs(u2.raw(i) - u.raw(i)));
  rep.check("polynomial bridge round-trip", dev, tol);
  const auto lp = flat_laplacian(p);
  const auto pt = poly_bridge(trace(u));
  dev = 0.0;
  for (const auto& [e, c2] : lp.coeff) {
    const auto it = pt.coeff.find(e);
    const double want = (it == pt.coeff.end()) ? 0.0 : it->second;
    dev = std::max(dev, std::abs(c2 - double(-m * (m - 1)) * want));
  }
  rep.check("bridge intertwines Delta_E with -m(m-1) T", dev, tol);
}

UnitTangent random_tangent(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec y(n + 1);
  for (int i = 0; i <= n; ++i) y[i] = 0.3 * g(rng);
  if (y.norm() > 0.8) y *= 0.8 / y.norm();
  const Vec x = psi_ball_inv(y);
  Vec v(n + 2);
  for (int i = 0; i < n + 2; ++i) v[i] = g(rng);
  return UnitTangent::make(x, v, 1e9);
}

void suite_transport(VerifyReport& rep, unsigned seed, double tol, int ncap, int trials) {
  std::cout << "suite transport (n = 1.." << ncap << ", " << trials << " samples)\n";
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  double dev_iso = 0, dev_rt = 0, dev_psi = 0, dev_jac = 0;
  for (int n = 1; n <= ncap; ++n) {
    for (int t = 0; t < trials; ++t) {
      const UnitTangent rho = random_tangent(n, rng);
      const auto bm = boundary_maps(rho);
      for (int sign : {+1, -1}) {
        const Vec& B = (sign > 0) ? bm.b_plus : bm.b_minus;
        Vec zeta(n + 1);
        for (int i = 0; i <= n; ++i) zeta[i] = g(rng);
        zeta -= zeta.dot(B) * B;
        const Vec az = transport_A(rho, sign, zeta);
        dev_iso = std::max(dev_iso, std::abs(fiber_inner(az, az) - zeta.dot(zeta)));
        dev_rt = std::max(dev_rt, (transport_A_inv(rho, sign, az) - zeta).norm());
      }
      const EFiberBasis fib = fiber_basis(rho);
      Vec coords(n);
      for (int i = 0; i < n; ++i) coords[i] = 0.8 * g(rng);
      const Vec eta = fib.vectors * coords;
      const auto im = psi_map(rho, eta);
      const auto [rho2, eta2] = psi_inv(im);
      dev_psi = std::max(dev_psi, (rho2.x - rho.x).norm() + (rho2.xi - rho.xi).norm() +
                                      (eta2 - eta).norm());
      const double jn = jacobian_psi(rho, eta);
      const double jc = jacobian_psi_closed(n, fiber_inner(eta, eta));
      dev_jac = std::max(dev_jac, std::abs(jn - jc) / std::abs(jc));
    }
  }
  rep.check("A_pm isometry", dev_iso, tol);
  rep.check("A_pm round-trip", dev_rt, tol);
  rep.check("Psi round-trip", dev_psi, tol);
  rep.check("Jacobian of Psi vs 2^n (1+|eta|^2)^{-n}", dev_jac, 1e4 * tol);
}

void suite_horocyclic(VerifyReport& rep, unsigned seed, double tol, int n, int m) {
  std::cout << "suite horocyclic (n = " << n << ", m = " << m << ")\n";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  std::vector<Mat> samples;
  for (int i = 0; i < 3; ++i) {
    Mat gmat = exp_basis(alg_X(n), unif(rng)) * exp_basis(alg_R(n, 1, 2), unif(rng)) *
               exp_basis(alg_U(n, 1, +1), unif(rng));
    if (n >= 2) gmat = gmat * exp_basis(alg_A(n, 3), unif(rng));
    samples.push_back(gmat);
  }
  const cplx lambda(-0.8, 0.3);

  // Scalar first-band state v = Phi_-^lambda w(B_-): (X + lambda) v = 0 and
  // U_- v = 0.
  Vec cvec(n + 1);
  for (int i = 0; i <= n; ++i) cvec[i] = unif(rng);
  GFunc vf = [n, lambda, cvec](const Mat& gmat) -> cplx {
    const UnitTangent rho{gmat.col(0), gmat.col(1)};
    const auto bm = boundary_maps(rho);
    return std::pow(cplx(bm.phi_minus, 0.0), lambda) * (cvec.dot(bm.b_minus) + 2.0);
  };
  const Section v = Section::scalar(n, vf);
  const Section xv = apply_X(v);
  const Section uv = apply_U(v, -1);
  double dev_x = 0, dev_u = 0;
  for (const Mat& gmat : samples) {
    dev_x = std::max(dev_x, std::abs(xv.at({}).eval(gmat) + lambda * v.at({}).eval(gmat)));
    for (const auto& [K, tl] : uv.coeff) dev_u = std::max(dev_u, std::abs(tl.eval(gmat)));
  }
  rep.check("(X + lambda) v = 0", dev_x, tol);
  rep.check("U_- v = 0", dev_u, tol);

  // Commutator [X, U^pm] = pm U^pm on a generic scalar section.
  GFunc f = [cvec](const Mat& gmat) -> cplx {
    return cvec.dot(gmat.col(0).head(cvec.size())) + 0.3 * gmat(0, 1);
  };
  const Section s0 = Section::scalar(n, f);
  double dev_c = 0;
  for (int sign : {+1, -1}) {
    const Section xu = apply_X(apply_U(s0, sign));
    const Section ux = apply_U(apply_X(s0), sign);
    const Section us = apply_U(s0, sign);
    for (const Mat& gmat : samples)
      for (const auto& [K, tl] : xu.coeff)
        dev_c = std::max(dev_c, std::abs(tl.eval(gmat) - ux.at(K).eval(gmat) -
                                         double(sign) * us.at(K).eval(gmat)));
  }
  rep.check("[X, U^pm] = pm U^pm", dev_c, 1e1 * tol);

  // Band recovery U_-^m V_+^m v = C v.
  if (m >= 1) {
    BoundaryTensorField w = [cvec](const Vec& nu, const std::vector<Vec>& args) {
      double val = cvec.dot(nu) + 2.0;
      for (const auto& a : args) val *= (a[0] + 0.7 * a[a.size() - 1]);
      return val;
    };
    const auto rec = verify_band_recovery(n, m, cplx(-0.8, 0.0), w, samples);
    rep.check("band recovery U_-^m V_+^m = C id", rec.max_rel_deviation, 1e2 * tol);
  }
}

void suite_poisson(VerifyReport& rep, double tol, int ncap) {
  std::cout << "suite poisson\n";
  // Quadrature at the basepoint reproduces Vol(S^n).
  double dev_vol = 0;
  for (int n = 1; n <= std::min(ncap, 2); ++n) {
    SphereField w;
    w.n = n;
    w.m = 0;
    w.value = [n](const Vec&) {
      SymTensor<cplx> t(n + 2, 0);
      t.raw(0) = 1.0;
      return t;
    };
    Vec x = Vec::Zero(n + 2);
    x[0] = 1.0;
    const auto res = poisson_apply(cplx(0.37, 0.0), w, x, -1, QuadSpec{});
    const double vol = 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) /
                       std::tgamma(0.5 * (n + 1));
    dev_vol = std::max(dev_vol, std::abs(res.value.raw(0) - cplx(vol, 0.0)));
  }
  rep.check("P^- at basepoint reproduces Vol(S^n)", dev_vol, 1e2 * tol);

  // Symbolic eigenstate identities on the closed-form boundary image.
  double dev_sym = 0;
  for (const auto& [n, m, I] : std::vector<std::tuple<int, int, std::vector<int>>>{
           {2, 0, {}}, {2, 1, {1}}, {3, 2, {1, 3}}}) {
    const cplx lam(-0.3, 0.7);
    HalfspaceSection s(n, m);
    s.add_f(I, zsym::ZPoly::monomial(cplx(double(n), 0.0) + lam, std::vector<int>(n, 0), 1.0));
    const auto dd = halfspace_delta_div(s);
    const cplx eig = -lam * (double(n) + lam) + double(m);
    dev_sym = std::max(dev_sym, dd.pi0_delta.max_coeff_dist(eig * s.p0));
    if (!dd.pi1_delta.empty() || !dd.pi0_div.empty() || !dd.pi1_div.empty())
      dev_sym = std::max(dev_sym, 1.0);
  }
  rep.check("delta image: eigenvalue, zero divergence (symbolic)", dev_sym, tol);

  // Indicial roots match the hand-solved quadratics.
  double dev_ind = 0;
  {
    const auto r = indicial_roots(2, 0, 0.0);
    double a = 1e9, b = -1e9;
    for (const auto& z : r) {
      a = std::min(a, z.lambda.real());
      b = std::max(b, z.lambda.real());
    }
    dev_ind = std::max(dev_ind, std::abs(a - 0.0) + std::abs(b - 2.0));
    const auto r2 = indicial_roots(3, 1, 3.0);
    bool have0 = false, have3 = false;
    for (const auto& z : r2)
      if (z.family == 1) {
        have0 = have0 || std::abs(z.lambda) < 1e-12;
        have3 = have3 || std::abs(z.lambda - cplx(3.0, 0.0)) < 1e-12;
      }
    if (!have0 || !have3) dev_ind = 1.0;
  }
  rep.check("indicial roots match hand-solved quadratics", dev_ind, tol);
}

void suite_constants(VerifyReport& rep, double tol) {
  std::cout << "suite constants\n";
  using std::numbers::pi;
  rep.check("c00(2,1) = 1/(2 pi)",
            std::abs(c00(2, {1.0, 0.0}) - cplx(1.0 / (2.0 * pi), 0.0)), 1e-12);
  double dev = std::abs(hadamard_constant({1.0, 0.0}, {3.0, 0.0}).real() - hadamard_oracle(1.0, 3.0));
  dev = std::max(dev, std::abs(hadamard_constant({1.3, 0.0}, {3.9, 0.0}).real() -
                               hadamard_oracle(1.3, 3.9)));
  rep.check("Hadamard constant vs oracle", dev, tol);
  dev = 0;
  for (const auto& [n, ell] : std::vector<std::array<int, 2>>{{3, 1}, {2, 2}})
    dev = std::max(dev, std::abs(sphere_moment_coeff(n, ell) - sphere_moment_oracle(n, ell)));
  rep.check("sphere moment coefficient vs oracle", dev, tol);
  dev = 0;
  for (const auto& [n, m, r] : std::vector<std::tuple<int, int, double>>{{2, 1, 0.8}, {2, 2, 0.5}})
    dev = std::max(dev, std::abs(twist_sum(n, m, r) - twist_sum_oracle(n, m, r)));
  rep.check("angular twist sum vs oracle", dev, tol);
  dev = std::abs(asysa2_constant(2, 0, {1.0, 0.0}).value - cplx(0.5 * pi, 0.0));
  dev = std::max(dev, std::abs(asysa2_constant(2, 1, {0.7, 0.0}).value.real() -
                               asysa2_oracle(2, 1, 0.7, 1e-9)));
  rep.check("main asymptotic constant vs oracle", dev, tol);
  // Zero set of the boundary leading constant: {-n-m+2, ..., -n+1}.
  dev = 0;
  for (const double l0 : {-3.0, -2.0}) {
    const auto lc = boundary_leading_constant(3, 2, {l0, 0.0});
    if (lc.is_pole) dev = 1.0;
    dev = std::max(dev, std::abs(lc.value));
  }
  {
    const auto lc = boundary_leading_constant(3, 2, {-3.2, 0.0});
    if (lc.is_pole || std::abs(lc.value) < 1e-6) dev = std::max(dev, 1.0);
  }
  rep.check("leading-constant zero set {-n-m+2..-n+1}", dev, tol);
}

void suite_spectrum(VerifyReport& rep, unsigned seed, double tol) {
  std::cout << "suite spectrum\n";
  double dev = 0;
  {
    const auto res = enumerate_resonances(1, {{0, 1.25, 1}}, {-2.0, 0.0, 2.0});
    if (res.entries.size() != 4) dev = 1.0;
    for (const auto& e : res.entries)
      dev = std::max(dev, std::min(std::abs(e.lambda - cplx(-0.5, 1.0)),
                                   std::min(std::abs(e.lambda - cplx(-0.5, -1.0)),
                                            std::min(std::abs(e.lambda - cplx(-1.5, 1.0)),
                                                     std::abs(e.lambda - cplx(-1.5, -1.0))))));
  }
  rep.check("n=1 golden sigma=5/4", dev, tol);
  dev = 0;
  {
    const auto res = enumerate_resonances(3, {{1, 3.0, 2}}, {-3.5, 0.0, 1.0});
    if (res.entries.size() != 1 || res.excluded.size() != 1)
      dev = 1.0;
    else
      dev = std::abs(res.entries[0].lambda - cplx(-2.0, 0.0)) +
            std::abs(res.excluded[0].lambda - cplx(-3.0, 0.0));
  }
  rep.check("n=3 worked example (-2 kept, -3 excluded)", dev, tol);
  // Round-trip and admissibility on a random spectrum.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  dev = 0;
  for (int rep2 = 0; rep2 < 10; ++rep2) {
    const int n = 1 + int(unif(rng) * 3.0);
    std::vector<SpectrumEntry> spec;
    for (int i = 0; i < 3; ++i) {
      const int m = int(unif(rng) * 3.0);
      const double lower = (m >= 1) ? double(m + n - 1) : 0.0;
      spec.push_back({m, lower + 10.0 * unif(rng), 1});
    }
    const auto res = enumerate_resonances(n, spec, {-7.0, 0.0, 5.0});
    for (const auto& e : res.entries) {
      const cplx sh = e.lambda + double(e.m) + 0.5 * n;
      dev = std::max(dev, std::abs(-sh * sh + 0.25 * n * n + double(e.m - 2 * e.ell) -
                                   cplx(e.source_sigma, 0.0)));
      if (!admissible_region(n, e.m, e.ell, e.lambda).admissible()) dev = std::max(dev, 1.0);
      dev = std::max(dev, std::max(0.0, e.lambda.real()));
    }
  }
  rep.check("round-trip + admissibility on random spectra", dev, 1e-10);
}

int cmd_verify(const std::string& suite, unsigned seed, double tol_override, int ncap, int mcap) {
  const std::vector<std::string> known{"all",        "lie",     "tensor",    "transport",
                                       "horocyclic", "poisson", "constants", "spectrum"};
  if (std::find(known.begin(), known.end(), suite) == known.end())
    throw CLI::ValidationError("--suite", "unknown suite: " + suite);
  auto tol = [&](double def) { return tol_override > 0.0 ? tol_override : def; };
  VerifyReport rep;
  const bool all = suite == "all";
  if (all || suite == "lie") suite_lie(rep, std::min(std::max(ncap, 1), 4), tol(0.0));
  if (all || suite == "tensor") suite_tensor(rep, seed, tol(1e-9));
  if (all || suite == "transport")
    suite_transport(rep, seed, tol(1e-9), std::min(std::max(ncap, 1), 3), 25);
  if (all || suite == "horocyclic")
    suite_horocyclic(rep, seed, tol(1e-5), std::min(std::max(ncap, 1), 2),
                     std::min(std::max(mcap, 0), 2));
  if (all || suite == "poisson") suite_poisson(rep, tol(1e-10), std::max(ncap, 2));
  if (all || suite == "constants") suite_constants(rep, tol(1e-8));
  if (all || suite == "spectrum") suite_spectrum(rep, seed, tol(1e-9));
  std::cout << (rep.failures == 0 ? "verify: all identities passed\n"
                                  : "verify: " + std::to_string(rep.failures) + " failures\n");
  return rep.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance toolkit for hyperbolic geodesic flows"};
  app.require_subcommand(1);

  std::string input, out, format = "json", suite = "all", name, lambda_str;
  double re_min = -10.0, re_max = 0.0, im_max = 10.0;
  double R = 10.0, volume = 1.0, sigma = 0.0, alpha = 1.0, beta = 3.0, rpar = 1.0;
  double tol = -1.0;
  int n = 2, m = 0, ell = 0;
  unsigned seed = 12345;

  auto add_window = [&](CLI::App* cmd) {
    cmd->add_option("--re-min", re_min, "window: lower bound on Re lambda");
    cmd->add_option("--re-max", re_max, "window: upper bound on Re lambda");
    cmd->add_option("--im-max", im_max, "window: bound on |Im lambda|");
  };

  auto* c_res = app.add_subcommand("resonances", "enumerate resonances from a spectrum file");
  c_res->add_option("--input", input, "spectrum JSON file")->required();
  c_res->add_option("--out", out, "output file (default stdout)");
  add_window(c_res);
  c_res->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* c_band = app.add_subcommand("band-plot", "emit band-structure plot data");
  c_band->add_option("--input", input, "spectrum JSON file")->required();
  c_band->add_option("--out", out, "output file (default stdout)");
  add_window(c_band);

  auto* c_verify = app.add_subcommand("verify", "run identity verification suites");
  c_verify->add_option("--suite", suite,
                       "all|lie|tensor|transport|horocyclic|poisson|constants|spectrum");
  c_verify->add_option("--seed", seed, "RNG seed (default 12345)");
  c_verify->add_option("--tol", tol, "tolerance override (default: per-suite)");
  c_verify->add_option("--n", n, "dimension cap (default 2)");
  c_verify->add_option("--m", m, "tensor order cap (default 1 for horocyclic)");

  auto* c_weyl = app.add_subcommand("weyl", "Weyl-law constants and leading counts");
  c_weyl->add_option("--n", n, "boundary dimension")->required();
  c_weyl->add_option("--m", m, "band index");
  c_weyl->add_option("--R", R, "counting radius")->required();
  c_weyl->add_option("--volume", volume, "manifold volume");
  c_weyl->add_option("--out", out, "output file (default stdout)");

  auto* c_const = app.add_subcommand("constants", "evaluate named analytic constants");
  c_const->add_option("--name", name,
                      "c00|pairing|indicial|leading|hadamard|sphere-moment|twist-sum|asysa2")
      ->required();
  c_const->add_option("--n", n, "dimension parameter");
  c_const->add_option("--m", m, "tensor order");
  c_const->add_option("--ell", ell, "band shift l");
  c_const->add_option("--lambda", lambda_str, "complex lambda, e.g. 1+0i");
  c_const->add_option("--sigma", sigma, "eigenvalue parameter");
  c_const->add_option("--alpha", alpha, "Hadamard alpha");
  c_const->add_option("--beta", beta, "Hadamard beta");
  c_const->add_option("--r", rpar, "twist radius");
  c_const->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Window w{re_min, re_max, im_max};
    if (c_res->parsed()) return cmd_resonances(input, out, w, format);
    if (c_band->parsed()) return cmd_band_plot(input, out, w);
    if (c_verify->parsed()) {
      const int mcap = c_verify->count("--m") ? m : 1;
      return cmd_verify(suite, seed, tol, c_verify->count("--n") ? n : 2, mcap);
    }
    if (c_weyl->parsed()) return cmd_weyl(n, m, R, volume, out);
    if (c_const->parsed()) return cmd_constants(name, n, m, ell, lambda_str, sigma, alpha, beta,
                                                rpar, out);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
