#ifndef CRNBATCH_HYPOEXP_MP_HPP
#define CRNBATCH_HYPOEXP_MP_HPP

// Scalar-generic hypoexponential kernels, instantiated with double and with
// MPFR numbers for the cases where double cancels away every digit.

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cstddef>
#include <map>
#include <vector>

#include "crnbatch/errors.hpp"
#include "crnbatch/hypoexp.hpp"

namespace crnbatch::mp {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                          boost::multiprecision::et_off>;

class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits) : saved_(Real::default_precision()) {
    Real::default_precision(bits * 30103u / 100000u + 2u);
  }
  ~ScopedPrecision() { Real::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

template <class S>
S binom_as(Count n, int o) {
  S r = 1;
  for (int j = 0; j < o; ++j) r = r * S(n - static_cast<Count>(j)) / S(j + 1);
  return r;
}

// Unscaled stage rates C(n0 + i g, o); C_i does not depend on rate_scale.
template <class S>
std::vector<S> stage_rates(const HypoexpSpec& spec) {
  std::vector<S> r(spec.k);
  for (Count i = 0; i < spec.k; ++i) r[i] = binom_as<S>(spec.n0 + i * static_cast<Count>(spec.g), spec.o);
  return r;
}

template <class S>
std::vector<S> coefficients_naive(const HypoexpSpec& spec) {
  std::vector<S> lam = stage_rates<S>(spec);
  std::vector<S> c(spec.k);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    S p = 1;
    for (std::size_t j = 0; j < lam.size(); ++j)
      if (j != i) p *= lam[j] / (lam[j] - lam[i]);
    c[i] = p;
  }
  return c;
}

namespace detail {

template <class S>
struct Cx {
  S re, im;
};

template <class S>
class PolyKit {
 public:
  using Poly = std::vector<S>;  // ascending coefficients

  static constexpr std::size_t kSchoolbook = 48;

  Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    if (std::min(a.size(), b.size()) < kSchoolbook) {
      Poly r(a.size() + b.size() - 1, S(0));
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
      return r;
    }
    std::size_t need = a.size() + b.size() - 1, n = 1;
    while (n < need) n <<= 1;
    std::vector<Cx<S>> fa(n, {S(0), S(0)}), fb(n, {S(0), S(0)});
    for (std::size_t i = 0; i < a.size(); ++i) fa[i].re = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) fb[i].re = b[i];
    fft(fa, false);
    fft(fb, false);
    for (std::size_t i = 0; i < n; ++i) {
      S re = fa[i].re * fb[i].re - fa[i].im * fb[i].im;
      S im = fa[i].re * fb[i].im + fa[i].im * fb[i].re;
      fa[i] = {re, im};
    }
    fft(fa, true);
    Poly r(need);
    for (std::size_t i = 0; i < need; ++i) r[i] = fa[i].re / S(n);
    return r;
  }

  // Inverse of f modulo x^m; f[0] != 0.
  Poly inverse(const Poly& f, std::size_t m) {
    Poly g{S(1) / f[0]};
    std::size_t len = 1;
    while (len < m) {
      len <<= 1;
      Poly fl(f.begin(), f.begin() + std::min(len, f.size()));
      Poly t = mul(fl, g);
      t.resize(len, S(0));
      for (S& x : t) x = -x;
      t[0] += S(2);
      g = mul(g, t);
      g.resize(len, S(0));
    }
    g.resize(m);
    return g;
  }

  // a mod b, b monic.
  Poly rem(const Poly& a, const Poly& b) {
    const std::size_t d = b.size() - 1;
    if (a.size() <= d) return a;
    const std::size_t m = a.size() - d;  // quotient length
    Poly q;
    if (d < kSchoolbook || m < kSchoolbook) {
      Poly r = a;
      q.assign(m, S(0));
      for (std::size_t i = a.size(); i-- > d;) {
        S coef = r[i];
        q[i - d] = coef;
        for (std::size_t j = 0; j <= d; ++j) r[i - d + j] -= coef * b[j];
      }
      r.resize(d);
      return r;
    }
    Poly ra(a.rbegin(), a.rend()), rb(b.rbegin(), b.rend());
    ra.resize(m);
    Poly qr = mul(ra, inverse(rb, m));
    qr.resize(m);
    q.assign(qr.rbegin(), qr.rend());
    Poly qb = mul(q, b);
    Poly r(d);
    for (std::size_t i = 0; i < d; ++i) r[i] = a[i] - qb[i];
    return r;
  }

 private:
  const std::vector<Cx<S>>& roots(std::size_t n) {
    auto it = roots_.find(n);
    if (it != roots_.end()) return it->second;
    std::vector<Cx<S>> w(n / 2);
    const S two_pi = boost::math::constants::two_pi<S>();
    using std::cos;
    using std::sin;
    for (std::size_t j = 0; j < n / 2; ++j) {
      S ang = two_pi * S(j) / S(n);
      w[j] = {cos(ang), sin(ang)};
    }
    return roots_.emplace(n, std::move(w)).first->second;
  }

  void fft(std::vector<Cx<S>>& a, bool invert) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    const auto& w = roots(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t step = n / len;
      for (std::size_t i = 0; i < n; i += len) {
        for (std::size_t j = 0; j < len / 2; ++j) {
          const Cx<S>& r = w[j * step];
          S wr = r.re, wi = invert ? S(-r.im) : r.im;
          Cx<S>& u = a[i + j];
          Cx<S>& v = a[i + j + len / 2];
          S tr = v.re * wr - v.im * wi;
          S ti = v.re * wi + v.im * wr;
          v = {u.re - tr, u.im - ti};
          u = {u.re + tr, u.im + ti};
        }
      }
    }
  }

  std::map<std::size_t, std::vector<Cx<S>>> roots_;
};

template <class S>
class SubproductTree {
 public:
  using Poly = std::vector<S>;

  SubproductTree(const std::vector<S>& pts, PolyKit<S>& kit) : pts_(pts), kit_(kit), nodes_(4 * pts.size()) {
    build(1, 0, pts.size());
  }
  const Poly& root() const { return nodes_[1]; }

  // Values of p at every point.
  std::vector<S> evaluate(const Poly& p) {
    std::vector<S> out(pts_.size());
    descend(1, 0, pts_.size(), kit_.rem(p, nodes_[1]), out);
    return out;
  }

 private:
  void build(std::size_t node, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
      nodes_[node] = {-pts_[lo], S(1)};
      return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    build(2 * node, lo, mid);
    build(2 * node + 1, mid, hi);
    nodes_[node] = kit_.mul(nodes_[2 * node], nodes_[2 * node + 1]);
  }

  void descend(std::size_t node, std::size_t lo, std::size_t hi, const Poly& r, std::vector<S>& out) {
    if (hi - lo == 1) {
      out[lo] = r.empty() ? S(0) : r[0];
      return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    descend(2 * node, lo, mid, kit_.rem(r, nodes_[2 * node]), out);
    descend(2 * node + 1, mid, hi, kit_.rem(r, nodes_[2 * node + 1]), out);
  }

  const std::vector<S>& pts_;
  PolyKit<S>& kit_;
  std::vector<Poly> nodes_;
};

}  // namespace detail

// C_i = P / (mu_i (-1)^{k-1} F'(mu_i)) with F(y) = prod (y - mu_j), mu = rates / max rate,
// P = prod mu_j. Product tree + remainder tree: O(M(k) log k) arithmetic operations.
template <class S>
std::vector<S> coefficients_fast(const HypoexpSpec& spec) {
  std::vector<S> mu = stage_rates<S>(spec);
  const std::size_t k = mu.size();
  if (k == 1) return {S(1)};
  const S top = mu.back();
  for (S& x : mu) x /= top;
  detail::PolyKit<S> kit;
  detail::SubproductTree<S> tree(mu, kit);
  const auto& F = tree.root();
  std::vector<S> dF(k);
  for (std::size_t i = 1; i <= k; ++i) dF[i - 1] = F[i] * S(i);
  std::vector<S> vals = tree.evaluate(dF);
  S prod = 1;
  for (const S& x : mu) prod *= x;
  std::vector<S> c(k);
  const bool odd = (k - 1) % 2 == 1;
  for (std::size_t i = 0; i < k; ++i) {
    S denom = mu[i] * vals[i];
    if (odd) denom = -denom;
    c[i] = prod / denom;
  }
  return c;
}

// coefficients_fast at the working precision whose sum passes the self-check;
// `bits` receives that precision. Read the values under ScopedPrecision(bits).
std::vector<Real> coefficients_fast_checked(const HypoexpSpec& spec, unsigned& bits);

template <class S>
S mean_closed(Count n, Count k, int o, int g) {
  using boost::math::digamma;
  S total = 0, binom = 1;
  for (int m = 0; m < o; ++m) {
    if (m > 0) binom = binom * S(o - m) / S(m);
    S a = S(n - static_cast<Count>(o - 1 - m)) / S(g);
    S d = digamma(a + S(k)) - digamma(a);
    total += (m % 2 ? -binom : binom) * d;
  }
  return total * S(o) / S(g);
}

template <class S>
S variance_closed(Count n, Count k, int o, int g) {
  using boost::math::digamma;
  using boost::math::trigamma;
  std::vector<S> s(o), a(o), D(o);
  S binom = 1;
  for (int m = 0; m < o; ++m) {
    if (m > 0) binom = binom * S(o - m) / S(m);
    s[m] = m % 2 ? -binom : binom;
    a[m] = S(n - static_cast<Count>(o - 1 - m)) / S(g);
    D[m] = digamma(a[m] + S(k)) - digamma(a[m]);
  }
  S diag = 0, cross = 0;
  for (int m = 0; m < o; ++m) diag += s[m] * s[m] * (trigamma(a[m]) - trigamma(a[m] + S(k)));
  for (int m = 0; m < o; ++m)
    for (int j = m + 1; j < o; ++j) cross += s[m] * s[j] * (D[m] - D[j]) / S(j - m);
  const S oo = S(o) * S(o);
  return oo / (S(g) * S(g)) * diag + S(2) * oo / S(g) * cross;
}

template <class S>
S mean_direct(Count n, Count k, int o, int g) {
  S t = 0;
  for (Count i = 0; i < k; ++i) t += S(1) / binom_as<S>(n + i * static_cast<Count>(g), o);
  return t;
}

template <class S>
S variance_direct(Count n, Count k, int o, int g) {
  S t = 0;
  for (Count i = 0; i < k; ++i) {
    S x = S(1) / binom_as<S>(n + i * static_cast<Count>(g), o);
    t += x * x;
  }
  return t;
}

// Working precision for the closed forms: the alternating o-term sums cancel
// about (o-1) log2 n bits, the digamma differences another log2(n / (k g)).
unsigned moment_precision_bits(Count n, Count k, int o, int g);

}  // namespace crnbatch::mp

#endif  // CRNBATCH_HYPOEXP_MP_HPP
