// Dense symmetric tensor algebra over an N-dimensional inner-product space:
// symmetrization, trace T (contraction of the first two slots), the insertion
// operator I(u) = ((m+2)(m+1)/2) S(g (x) u), the trace-free decomposition
// u = sum_r I^r(u_r), and the bridge to homogeneous polynomials
// P_u(x) = u(x, ..., x) with Delta_E P_u = -m(m-1) P_{T u}.
//
// Storage is on sorted multi-indices with multinomial multiplicities; the
// scalar type is a template parameter so the same code runs in exact rational
// arithmetic (boost cpp_rational), double, or complex<double>.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace reso {

using Rational = boost::multiprecision::cpp_rational;

using MIndex = std::vector<int>;  // sorted multi-index, entries in [0, N)

namespace detail {

/// All nondecreasing multi-indices of length m over {0..N-1}, lexicographic.
inline const std::vector<MIndex>& sorted_indices(int N, int m) {
  static std::map<std::pair<int, int>, std::vector<MIndex>> cache;
  const auto key = std::make_pair(N, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<MIndex> out;
  MIndex cur(m, 0);
  if (m == 0) {
    out.push_back({});
  } else {
    while (true) {
      out.push_back(cur);
      int p = m - 1;
      while (p >= 0 && cur[p] == N - 1) --p;
      if (p < 0) break;
      const int v = cur[p] + 1;
      for (int q = p; q < m; ++q) cur[q] = v;
    }
  }
  return cache.emplace(key, std::move(out)).first->second;
}

inline const std::map<MIndex, int>& index_rank(int N, int m) {
  static std::map<std::pair<int, int>, std::map<MIndex, int>> cache;
  const auto key = std::make_pair(N, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::map<MIndex, int> r;
  const auto& all = sorted_indices(N, m);
  for (size_t i = 0; i < all.size(); ++i) r[all[i]] = int(i);
  return cache.emplace(key, std::move(r)).first->second;
}

/// Number of distinct permutations of the sorted multi-index K.
inline long long multiplicity(const MIndex& K) {
  long long num = 1;
  // m! / prod (count of each value)!
  for (size_t i = 1; i <= K.size(); ++i) num *= (long long)i;
  size_t i = 0;
  while (i < K.size()) {
    size_t j = i;
    while (j < K.size() && K[j] == K[i]) ++j;
    long long f = 1;
    for (size_t k = 1; k <= j - i; ++k) f *= (long long)k;
    num /= f;
    i = j;
  }
  return num;
}

}  // namespace detail

template <class S>
class SymTensor {
 public:
  SymTensor() : N_(0), m_(0) {}
  SymTensor(int N, int m) : N_(N), m_(m), c_(detail::sorted_indices(N, m).size(), S(0)) {
    if (N < 1 || m < 0) throw std::invalid_argument("SymTensor: bad shape");
  }

  int dim() const { return N_; }
  int order() const { return m_; }
  size_t size() const { return c_.size(); }

  /// Coefficient at an arbitrary multi-index (sorted internally).
  S& at(MIndex K) {
    std::sort(K.begin(), K.end());
    return c_[detail::index_rank(N_, m_).at(K)];
  }
  const S& at(MIndex K) const {
    std::sort(K.begin(), K.end());
    return c_[detail::index_rank(N_, m_).at(K)];
  }
  S& raw(size_t i) { return c_[i]; }
  const S& raw(size_t i) const { return c_[i]; }
  const std::vector<MIndex>& indices() const { return detail::sorted_indices(N_, m_); }

  SymTensor& operator+=(const SymTensor& o) {
    check_shape(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  SymTensor& operator-=(const SymTensor& o) {
    check_shape(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  SymTensor& operator*=(const S& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(SymTensor a, const S& s) { return a *= s; }
  friend SymTensor operator*(const S& s, SymTensor a) { return a *= s; }

  bool operator==(const SymTensor& o) const { return N_ == o.N_ && m_ == o.m_ && c_ == o.c_; }

  /// Induced inner product <u,v> = sum over full multi-indices.
  S inner(const SymTensor& v) const {
    check_shape(v);
    S s(0);
    const auto& idx = indices();
    for (size_t i = 0; i < c_.size(); ++i)
      s += S(detail::multiplicity(idx[i])) * c_[i] * v.c_[i];
    return s;
  }

  /// Contraction in one slot with a vector: (iota_v u)_K = sum_q v_q u_{qK}.
  SymTensor contract(const std::vector<S>& v) const {
    if (m_ < 1) throw std::invalid_argument("contract: order 0");
    SymTensor out(N_, m_ - 1);
    for (const auto& K : out.indices()) {
      S s(0);
      for (int q = 0; q < N_; ++q) {
        MIndex Kq = K;
        Kq.push_back(q);
        s += v[q] * at(Kq);
      }
      out.at(K) = s;
    }
    return out;
  }

  /// Evaluate on m vectors (repeated contraction).
  S eval(const std::vector<std::vector<S>>& vs) const {
    if (int(vs.size()) != m_) throw std::invalid_argument("eval: wrong arity");
    if (m_ == 0) return c_[0];
    SymTensor cur = *this;
    for (const auto& v : vs) cur = cur.contract(v);
    return cur.c_[0];
  }

 private:
  void check_shape(const SymTensor& o) const {
    if (N_ != o.N_ || m_ != o.m_) throw std::invalid_argument("SymTensor: shape mismatch");
  }
  int N_, m_;
  std::vector<S> c_;
};

/// Symmetrize a full (not necessarily symmetric) m-tensor given as a callable
/// on full multi-indices: S(t)_K = (1/m!) sum_sigma t_{sigma K}; on the sorted
/// representative it is the average of t over all distinct permutations.
template <class S, class F>
SymTensor<S> symmetrize(int N, int m, F&& full) {
  SymTensor<S> out(N, m);
  for (const auto& K : out.indices()) {
    MIndex P = K;
    S sum(0);
    long long count = 0;
    // Iterate distinct permutations of K.
    std::sort(P.begin(), P.end());
    do {
      sum += full(P);
      ++count;
    } while (std::next_permutation(P.begin(), P.end()));
    out.at(K) = sum / S(count);
  }
  return out;
}

/// Trace: contraction of the first two indices; zero tensor for m < 2.
template <class S>
SymTensor<S> trace(const SymTensor<S>& u) {
  const int N = u.dim(), m = u.order();
  if (m < 2) return SymTensor<S>(N, 0);
  SymTensor<S> out(N, m - 2);
  for (const auto& K : out.indices()) {
    S s(0);
    for (int q = 0; q < N; ++q) {
      MIndex Kqq = K;
      Kqq.push_back(q);
      Kqq.push_back(q);
      s += u.at(Kqq);
    }
    out.at(K) = s;
  }
  return out;
}

/// I(u) = ((m+2)(m+1)/2) S(g (x) u); in coefficients,
/// I(sum f_K e*_K) = sum_K ( sum_{l<r, K_l = K_r} f_{K minus {l,r}} ) e*_K.
template <class S>
SymTensor<S> insert_I(const SymTensor<S>& u) {
  const int N = u.dim(), m = u.order();
  SymTensor<S> out(N, m + 2);
  for (const auto& K : out.indices()) {
    S s(0);
    for (size_t l = 0; l + 1 < K.size(); ++l)
      for (size_t r = l + 1; r < K.size(); ++r) {
        if (K[l] != K[r]) continue;
        MIndex rest;
        rest.reserve(m);
        for (size_t q = 0; q < K.size(); ++q)
          if (q != l && q != r) rest.push_back(K[q]);
        s += u.at(rest);
      }
    out.at(K) = s;
  }
  return out;
}

template <class S>
bool is_trace_free(const SymTensor<S>& u, double tol = 1e-12);

/// Trace-free decomposition u = sum_{r=0}^{floor(m/2)} I^r(u_r).
///
/// Uses the exact triangular structure: with t_k = T^k u and beta-products
/// from the identity T I = (2q+N) Id + I T on trace-free inputs,
/// T^k I^r u_r = c_{k,r} I^{r-k} u_r, solved top-down.  Exact in rational
/// arithmetic.
template <class S>
std::vector<SymTensor<S>> decompose_trace_free(const SymTensor<S>& u) {
  const int N = u.dim(), m = u.order();
  const int R = m / 2;
  // Precompute T^k u.
  std::vector<SymTensor<S>> t;
  t.push_back(u);
  for (int k = 1; k <= R; ++k) t.push_back(trace(t.back()));
  // c_{k,r}: T^k I^r v = c I^{r-k} v for trace-free v of order m - 2r.
  auto ckr = [&](int k, int r) {
    const int p = m - 2 * r;  // order of v
    // T I^j v = beta_j I^{j-1} v, beta_j = sum_{i=0}^{j-1} (2(p+2i) + N).
    S c(1);
    int j = r;
    for (int step = 0; step < k; ++step, --j) {
      S beta(0);
      for (int i = 0; i < j; ++i) beta += S(2 * (p + 2 * i) + N);
      c *= beta;
    }
    return c;
  };
  std::vector<SymTensor<S>> parts(R + 1, SymTensor<S>(N, 0));
  for (int k = R; k >= 0; --k) {
    SymTensor<S> rhs = t[k];
    for (int r = k + 1; r <= R; ++r) {
      SymTensor<S> term = parts[r];
      for (int j = 0; j < r - k; ++j) term = insert_I(term);
      rhs -= ckr(k, r) * term;
    }
    parts[k] = rhs * (S(1) / ckr(k, k));
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Homogeneous polynomials
// ---------------------------------------------------------------------------

/// Degree-m homogeneous polynomial in N variables: exponent vector -> coeff.
template <class S>
struct HomogPoly {
  int N = 0, m = 0;
  std::map<std::vector<int>, S> coeff;  // exponent vectors of total degree m

  S eval(const std::vector<S>& x) const {
    S s(0);
    for (const auto& [e, c] : coeff) {
      S t = c;
      for (int i = 0; i < N; ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[i];
      s += t;
    }
    return s;
  }
};

/// P_u(x) = u(x, ..., x): coefficient of x^K is multiplicity(K) * u_K.
template <class S>
HomogPoly<S> poly_bridge(const SymTensor<S>& u) {
  HomogPoly<S> p;
  p.N = u.dim();
  p.m = u.order();
  for (const auto& K : u.indices()) {
    std::vector<int> e(p.N, 0);
    for (int k : K) ++e[k];
    const S v = S(detail::multiplicity(K)) * u.at(K);
    if (v != S(0)) p.coeff[e] = v;
  }
  return p;
}

/// Inverse of poly_bridge.
template <class S>
SymTensor<S> poly_bridge_inv(const HomogPoly<S>& p) {
  SymTensor<S> u(p.N, p.m);
  for (const auto& [e, c] : p.coeff) {
    MIndex K;
    for (int i = 0; i < p.N; ++i)
      for (int k = 0; k < e[i]; ++k) K.push_back(i);
    u.at(K) = c / S(detail::multiplicity(K));
  }
  return u;
}

/// Flat (geometer's) Laplacian Delta_E = -sum_i d^2/dx_i^2.
template <class S>
HomogPoly<S> flat_laplacian(const HomogPoly<S>& p) {
  HomogPoly<S> out;
  out.N = p.N;
  out.m = std::max(p.m - 2, 0);
  for (const auto& [e, c] : p.coeff)
    for (int i = 0; i < p.N; ++i) {
      if (e[i] < 2) continue;
      std::vector<int> e2 = e;
      e2[i] -= 2;
      out.coeff[e2] -= c * S(e[i]) * S(e[i] - 1);
    }
  // Drop exact zeros.
  for (auto it = out.coeff.begin(); it != out.coeff.end();)
    it = (it->second == S(0)) ? out.coeff.erase(it) : std::next(it);
  return out;
}

template <class S>
bool is_harmonic(const HomogPoly<S>& p) {
  return flat_laplacian(p).coeff.empty();
}

// ---------------------------------------------------------------------------
// Appendix identity: Delta_zeta^r P(x - zeta <zeta,x>) |_{zeta=0}
// ---------------------------------------------------------------------------

/// General sparse polynomial in 2N variables (x_0..x_{N-1}, z_0..z_{N-1}),
/// used only by laplacian_power_contract.
template <class S>
using Poly2 = std::map<std::vector<int>, S>;

namespace detail {

template <class S>
void poly2_add(Poly2<S>& p, const std::vector<int>& e, const S& c) {
  auto it = p.find(e);
  if (it == p.end()) {
    if (c != S(0)) p[e] = c;
  } else {
    it->second += c;
    if (it->second == S(0)) p.erase(it);
  }
}

template <class S>
Poly2<S> poly2_mul(const Poly2<S>& a, const Poly2<S>& b) {
  Poly2<S> out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      poly2_add(out, e, S(ca * cb));
    }
  return out;
}

}  // namespace detail

/// Computes Delta_zeta^r P(x - zeta <zeta, x>)|_{zeta=0} symbolically
/// (Delta_zeta = -sum d^2/dzeta^2) and returns it as a polynomial in x.
/// Throws if P is not harmonic.
template <class S>
HomogPoly<S> laplacian_power_contract(const HomogPoly<S>& P, int r) {
  if (!is_harmonic(P)) throw std::invalid_argument("laplacian_power_contract: P not harmonic");
  if (r < 0 || r > P.m) throw std::invalid_argument("laplacian_power_contract: bad r");
  const int N = P.N;
  // Build the substituted arguments a_i = x_i - z_i * sum_j z_j x_j.
  std::vector<Poly2<S>> args(N);
  for (int i = 0; i < N; ++i) {
    std::vector<int> e(2 * N, 0);
    e[i] = 1;
    detail::poly2_add(args[i], e, S(1));
    for (int j = 0; j < N; ++j) {
      std::vector<int> f(2 * N, 0);
      f[N + i] += 1;
      f[N + j] += 1;
      f[j] += 1;
      detail::poly2_add(args[i], f, S(-1));
    }
  }
  // Substitute into P.
  Poly2<S> full;
  for (const auto& [e, c] : P.coeff) {
    Poly2<S> term;
    detail::poly2_add(term, std::vector<int>(2 * N, 0), c);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < e[i]; ++k) term = detail::poly2_mul(term, args[i]);
    for (const auto& [ee, cc] : term) detail::poly2_add(full, ee, cc);
  }
  // Apply (-sum_i d^2/dz_i^2)^r.
  for (int rep = 0; rep < r; ++rep) {
    Poly2<S> next;
    for (const auto& [e, c] : full)
      for (int i = 0; i < N; ++i) {
        if (e[N + i] < 2) continue;
        std::vector<int> e2 = e;
        e2[N + i] -= 2;
        detail::poly2_add(next, e2, S(-1) * c * S(e[N + i]) * S(e[N + i] - 1));
      }
    full = std::move(next);
  }
  // Evaluate at zeta = 0 (keep only z-free monomials) and read off x-poly.
  HomogPoly<S> out;
  out.N = N;
  out.m = P.m;
  for (const auto& [e, c] : full) {
    bool zfree = true;
    for (int i = 0; i < N; ++i) zfree = zfree && e[N + i] == 0;
    if (!zfree) continue;
    out.coeff[std::vector<int>(e.begin(), e.begin() + N)] = c;
  }
  return out;
}

// Helpers for floating backends.
inline double abs_val(double x) { return std::abs(x); }
inline double abs_val(const std::complex<double>& x) { return std::abs(x); }
inline double abs_val(const Rational& x) {
  return std::abs(static_cast<double>(x));
}

template <class S>
bool is_trace_free(const SymTensor<S>& u, double tol) {
  const auto t = trace(u);
  for (size_t i = 0; i < t.size(); ++i)
    if (abs_val(t.raw(i)) > tol) return false;
  return true;
}

}  // namespace reso
