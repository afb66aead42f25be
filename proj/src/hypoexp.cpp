#include "crnbatch/hypoexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crnbatch/errors.hpp"
#include "crnbatch/hypoexp_mp.hpp"
#include "crnbatch/numeric.hpp"

namespace crnbatch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lse(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

void validate_moment_args(Count n, int o, int g) {
  if (o < 1 || g < 1) throw InvalidParams("closed forms need o >= 1 and g >= 1");
  if (n < static_cast<Count>(o)) throw InvalidParams("closed forms need n >= o");
}

// Rates in the unscaled sense: C(n0 + i g, o).
double unscaled_rate(const HypoexpSpec& s, Count i) { return binom(s.n0 + i * static_cast<Count>(s.g), s.o); }

}  // namespace

double HypoexpSpec::rate(Count i) const { return rate_scale * unscaled_rate(*this, i); }

std::vector<double> HypoexpSpec::rates() const {
  std::vector<double> r(k);
  for (Count i = 0; i < k; ++i) r[i] = rate(i);
  return r;
}

void validate(const HypoexpSpec& s) {
  if (s.k < 1) throw InvalidParams("hypoexponential needs k >= 1");
  if (s.o < 1 || s.g < 0) throw InvalidParams("hypoexponential needs o >= 1, g >= 0");
  if (s.n0 < static_cast<Count>(s.o)) throw InvalidParams("hypoexponential needs n0 >= o");
  if (!(s.rate_scale > 0.0) || !std::isfinite(s.rate_scale)) throw InvalidParams("rate scale must be positive");
}

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

std::vector<SignedLog> hypoexp_coefficients(const HypoexpSpec& spec) {
  validate(spec);
  if (spec.k > 1 && spec.g == 0) throw DegenerateRates("equal rates; use the Erlang path");
  const Count k = spec.k;
  std::vector<Count> arg(k);
  std::vector<double> loglam(k);
  for (Count i = 0; i < k; ++i) {
    arg[i] = spec.n0 + i * static_cast<Count>(spec.g);
    loglam[i] = std::log(binom(arg[i], spec.o));
  }
  std::vector<SignedLog> out(k);
  for (Count i = 0; i < k; ++i) {
    CompensatedSum s;
    for (Count j = 0; j < k; ++j) {
      if (j == i) continue;
      long double diff = binom_diff(arg[j], arg[i], spec.o);
      s.add(loglam[j] - static_cast<double>(std::log(std::fabs(diff))));
    }
    out[i] = {i % 2 ? -1 : 1, s.value()};
  }
  return out;
}

unsigned fast_coefficient_precision_bits(const HypoexpSpec& spec) {
  const Count k = spec.k;
  if (k < 2) return 128;
  const double top = unscaled_rate(spec, k - 1);
  double min_gap = kInf, range = 0.0;
  for (Count j = 0; j < k; ++j) {
    range += std::log2(top / unscaled_rate(spec, j));
    if (j + 1 < k) {
      long double gap = binom_diff(spec.n0 + (j + 1) * spec.g, spec.n0 + j * spec.g, spec.o);
      min_gap = std::min(min_gap, static_cast<double>(gap) / top);
    }
  }
  const double a = std::floor((k - 1) / 2.0), b = static_cast<double>(k - 1) - a;
  const double fact = (std::lgamma(a + 1.0) + std::lgamma(b + 1.0)) / std::log(2.0);
  const double loss = std::max(0.0, (k - 1) * std::log2(2.0 / min_gap) - fact);
  const double bits = 128.0 + loss + range + static_cast<double>(k) + 8.0 * std::log2(static_cast<double>(k));
  return static_cast<unsigned>(std::ceil(bits));
}

std::vector<SignedLog> hypoexp_coefficients_fast(const HypoexpSpec& spec) {
  unsigned bits = 0;
  const std::vector<mp::Real> c = mp::coefficients_fast_checked(spec, bits);
  mp::ScopedPrecision guard(bits);
  std::vector<SignedLog> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    int sg = c[i] > 0 ? 1 : (c[i] < 0 ? -1 : 0);
    out[i] = {sg, sg ? static_cast<double>(log(abs(c[i]))) : 0.0};
  }
  return out;
}

namespace mp {

std::vector<Real> coefficients_fast_checked(const HypoexpSpec& spec, unsigned& bits) {
  validate(spec);
  if (spec.k > 1 && spec.g == 0) throw DegenerateRates("equal rates; use the Erlang path");
  bits = fast_coefficient_precision_bits(spec);
  for (int attempt = 0; attempt < 4; ++attempt, bits *= 2) {
    ScopedPrecision guard(bits);
    std::vector<Real> c = coefficients_fast<Real>(spec);
    Real sum = 0;
    for (const auto& x : c) sum += x;
    if (abs(sum - 1) < Real(1e-30)) return c;  // identity sum C = 1 as a precision check
  }
  throw NumericUnderflow("fast coefficient evaluation did not converge");
}

}  // namespace mp

double hypoexp_logpdf(const HypoexpSpec& spec, const std::vector<SignedLog>& coeffs, double t) {
  validate(spec);
  if (t < 0.0) throw InvalidParams("negative time");
  if (coeffs.size() != spec.k) throw InvalidParams("coefficient count mismatch");
  if (spec.k == 1) return std::log(spec.rate(0)) - spec.rate(0) * t;
  double pos = -kInf, neg = -kInf;
  for (Count i = 0; i < spec.k; ++i) {
    if (coeffs[i].sign == 0) continue;
    const double lam = spec.rate(i);
    const double term = coeffs[i].log_abs + std::log(lam) - lam * t;
    (coeffs[i].sign > 0 ? pos : neg) = lse(coeffs[i].sign > 0 ? pos : neg, term);
  }
  const double frac = -std::expm1(neg - pos);
  if (!(pos > neg) || frac < 1e-13 * static_cast<double>(spec.k))
    throw NumericUnderflow("coefficient sum cancelled below double resolution");
  return pos + std::log(frac);
}

namespace mp {

unsigned moment_precision_bits(Count n, Count k, int o, int g) {
  const double big = std::log2(static_cast<double>(n) + static_cast<double>(k) * g + 2.0);
  const double ratio = std::log2(static_cast<double>(n) / (static_cast<double>(k) * g + 1.0) + 2.0);
  return static_cast<unsigned>(96.0 + 2.0 * (2.0 * o * big + ratio));
}

}  // namespace mp

double hypoexp_mean_closed(Count n, Count k, int o, int g) {
  validate_moment_args(n, o, g);
  if (k == 0) return 0.0;
  mp::ScopedPrecision guard(mp::moment_precision_bits(n, k, o, g));
  return static_cast<double>(mp::mean_closed<mp::Real>(n, k, o, g));
}

double hypoexp_variance_closed(Count n, Count k, int o, int g) {
  validate_moment_args(n, o, g);
  if (k == 0) return 0.0;
  mp::ScopedPrecision guard(mp::moment_precision_bits(n, k, o, g));
  return static_cast<double>(mp::variance_closed<mp::Real>(n, k, o, g));
}

double hypoexp_mean_direct(Count n, Count k, int o, int g) {
  CompensatedSum s;
  for (Count i = 0; i < k; ++i) s.add(1.0 / binom(n + i * static_cast<Count>(g), o));
  return s.value();
}

double hypoexp_variance_direct(Count n, Count k, int o, int g) {
  CompensatedSum s;
  for (Count i = 0; i < k; ++i) {
    double x = 1.0 / binom(n + i * static_cast<Count>(g), o);
    s.add(x * x);
  }
  return s.value();
}

HypoexpMoments hypoexp_moments(const HypoexpSpec& spec, bool allow_geometric) {
  validate(spec);
  HypoexpMoments m;
  const double scale = spec.rate_scale;
  const double first = unscaled_rate(spec, 0);
  if (spec.g == 0 || spec.k == 1) {
    const double t = 1.0 / (scale * first);
    m.mean = static_cast<double>(spec.k) * t;
    m.variance = static_cast<double>(spec.k) * t * t;
    return m;
  }
  const Count last_arg = spec.n0 + (spec.k - 1) * static_cast<Count>(spec.g);
  m.delta = static_cast<double>(binom_diff(last_arg, spec.n0, spec.o) / static_cast<long double>(first));
  if (allow_geometric && m.delta < 0.1) {
    const double t1 = 1.0 / first, tk = 1.0 / binom(last_arg, spec.o);
    const double kd = static_cast<double>(spec.k);
    m.mean = kd * std::sqrt(t1 * tk) / scale;
    m.variance = kd * t1 * tk / (scale * scale);
    m.geometric = true;
    return m;
  }
  if (spec.k <= 64) {
    m.mean = hypoexp_mean_direct(spec.n0, spec.k, spec.o, spec.g) / scale;
    m.variance = hypoexp_variance_direct(spec.n0, spec.k, spec.o, spec.g) / (scale * scale);
  } else {
    m.mean = hypoexp_mean_closed(spec.n0, spec.k, spec.o, spec.g) / scale;
    m.variance = hypoexp_variance_closed(spec.n0, spec.k, spec.o, spec.g) / (scale * scale);
  }
  return m;
}

double sample_hypoexp_direct(const HypoexpSpec& spec, Rng& rng) {
  validate(spec);
  double t = 0.0;
  for (Count i = 0; i < spec.k; ++i) t += rng.exponential(spec.rate(i));
  return t;
}

double sample_hypoexp_gamma_approx(const HypoexpSpec& spec, const HypoexpMoments& m, Rng& rng) {
  if (spec.g == 0 || spec.k == 1) return rng.gamma(static_cast<double>(spec.k), spec.rate(0));
  return rng.gamma(m.mean * m.mean / m.variance, m.mean / m.variance);
}

double sample_hypoexp_gamma_approx(const HypoexpSpec& spec, Rng& rng) {
  return sample_hypoexp_gamma_approx(spec, hypoexp_moments(spec), rng);
}

// ---------------------------------------------------------------------------

HypoexpDensity::HypoexpDensity(const HypoexpSpec& spec) : spec_(spec), rates_(spec.rates()) {
  validate(spec);
  top_ = *std::max_element(rates_.begin(), rates_.end());
}

HypoexpDensity::Sums HypoexpDensity::sums(double t) const {
  const std::size_t k = rates_.size();
  Sums s{-kInf, -kInf, -kInf};
  if (t <= 0.0) {
    s.log_all = 0.0;
    if (k == 1) s.log_last = 0.0;
    if (k == 2) s.log_prev = 0.0;
    return s;
  }
  const double x = top_ * t;
  const double lx = std::log(x);
  std::vector<double> stay(k), move(k);
  for (std::size_t i = 0; i < k; ++i) {
    move[i] = rates_[i] / top_;
    stay[i] = 1.0 - move[i];
  }
  std::vector<double> pi(k, 0.0);
  pi[0] = 1.0;
  double lscale = 0.0;
  const double m_cap = x + 60.0 * std::sqrt(x) + static_cast<double>(k) + 200.0;
  for (std::size_t m = 0;; ++m) {
    const double lw = -x + static_cast<double>(m) * lx - std::lgamma(static_cast<double>(m) + 1.0) + lscale;
    const std::size_t hi = std::min(m, k - 1);
    double mass = 0.0;
    for (std::size_t i = 0; i <= hi; ++i) mass += pi[i];
    if (pi[k - 1] > 0.0) s.log_last = lse(s.log_last, lw + std::log(pi[k - 1]));
    if (k >= 2 && pi[k - 2] > 0.0) s.log_prev = lse(s.log_prev, lw + std::log(pi[k - 2]));
    if (mass > 0.0) s.log_all = lse(s.log_all, lw + std::log(mass));
    const double md = static_cast<double>(m);
    if (md > x && m + 1 >= k) {
      const double next = lw + std::log(std::max(mass, 1e-300));
      if ((s.log_last > -kInf && next < s.log_last - 40.0 && next < s.log_all - 40.0) || md > m_cap) break;
    }
    if (mass == 0.0 || md > m_cap) break;
    const std::size_t top_stage = std::min(m + 1, k - 1);
    for (std::size_t i = top_stage; i >= 1; --i) pi[i] = pi[i] * stay[i] + pi[i - 1] * move[i - 1];
    pi[0] *= stay[0];
    if (mass < 1e-200) {
      for (std::size_t i = 0; i <= top_stage; ++i) pi[i] *= 1e200;
      lscale -= 200.0 * std::log(10.0);
    }
  }
  return s;
}

HypoexpDensity::Value HypoexpDensity::eval(double t) const {
  const std::size_t k = rates_.size();
  if (k == 1) return {std::log(rates_[0]) - rates_[0] * t, -rates_[0]};
  Sums s = sums(t);
  Value v{std::log(rates_[k - 1]) + s.log_last, -rates_[k - 1]};
  if (s.log_last > -kInf && s.log_prev > -kInf) v.slope += rates_[k - 2] * std::exp(s.log_prev - s.log_last);
  if (s.log_last == -kInf) v.slope = kInf;
  return v;
}

double HypoexpDensity::log_survival(double t) const {
  if (rates_.size() == 1) return -rates_[0] * std::max(t, 0.0);
  return sums(t).log_all;
}

std::vector<double> HypoexpDensity::log_occupancy(double t) const {
  const std::size_t k = rates_.size();
  std::vector<double> acc(k, -kInf);
  if (t <= 0.0) {
    acc[0] = 0.0;
    return acc;
  }
  const double x = top_ * t;
  const double lx = std::log(x);
  std::vector<double> pi(k, 0.0);
  pi[0] = 1.0;
  double lscale = 0.0, log_all = -kInf;
  const double m_cap = x + 60.0 * std::sqrt(x) + static_cast<double>(k) + 200.0;
  for (std::size_t m = 0;; ++m) {
    const double lw = -x + static_cast<double>(m) * lx - std::lgamma(static_cast<double>(m) + 1.0) + lscale;
    const std::size_t hi = std::min(m, k - 1);
    double mass = 0.0;
    for (std::size_t i = 0; i <= hi; ++i) {
      if (pi[i] <= 0.0) continue;
      mass += pi[i];
      acc[i] = lse(acc[i], lw + std::log(pi[i]));
    }
    if (mass > 0.0) log_all = lse(log_all, lw + std::log(mass));
    const double md = static_cast<double>(m);
    if (mass == 0.0 || md > m_cap) break;
    if (md > x && lw + std::log(mass) < log_all - 40.0) break;
    const std::size_t top_stage = std::min(m + 1, k - 1);
    for (std::size_t i = top_stage; i >= 1; --i) pi[i] = pi[i] * (1.0 - rates_[i] / top_) + pi[i - 1] * rates_[i - 1] / top_;
    pi[0] *= 1.0 - rates_[0] / top_;
    if (mass < 1e-200) {
      for (std::size_t i = 0; i <= top_stage; ++i) pi[i] *= 1e200;
      lscale -= 200.0 * std::log(10.0);
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

// log of the integral of exp(ua + d s) over s in [0, w].
double log_piece_mass(double ua, double d, double w) {
  if (std::isinf(w)) return d < 0.0 ? ua - std::log(-d) : kInf;
  if (std::fabs(d * w) < 1e-10) return ua + std::log(w) + 0.5 * d * w;
  if (d > 0.0) return ua + d * w + std::log(-std::expm1(-d * w)) - std::log(d);
  return ua + std::log(-std::expm1(d * w)) - std::log(-d);
}

double sample_piece_offset(double d, double w, double u) {
  double s;
  if (!std::isinf(w) && std::fabs(d * w) < 1e-10) {
    s = u * w;
  } else if (d > 0.0) {
    s = w + std::log(u + (1.0 - u) * std::exp(-d * w)) / d;
  } else {
    s = std::log1p(-u * (-std::expm1(d * w))) / d;
  }
  return std::clamp(s, 0.0, w);
}

constexpr std::size_t kMaxArsPoints = 256;

}  // namespace

ArsEnvelope::ArsEnvelope(const HypoexpSpec& spec) : initialized_(true), spec_(spec) {
  density_.emplace_back(spec);
  double mu = 0.0, var = 0.0;
  for (double lam : spec.rates()) {
    mu += 1.0 / lam;
    var += 1.0 / (lam * lam);
  }
  const double sd = std::sqrt(var);
  std::vector<double> init{0.5 * mu, mu, 2.0 * mu};
  if (mu - sd > 0.5 * mu) init.push_back(mu - sd);
  if (mu + sd < 2.0 * mu) init.push_back(mu + sd);
  for (double x : init) {
    HypoexpDensity::Value v = density_[0].eval(x);
    ++evaluations_;
    if (std::isfinite(v.log_pdf) && std::isfinite(v.slope)) add_point(x, v.log_pdf, v.slope);
  }
  for (int guard = 0; guard < 64 && (xs_.empty() || ds_.back() >= 0.0); ++guard) {
    double x = xs_.empty() ? 4.0 * mu : 2.0 * xs_.back();
    HypoexpDensity::Value v = density_[0].eval(x);
    ++evaluations_;
    if (std::isfinite(v.log_pdf) && std::isfinite(v.slope)) add_point(x, v.log_pdf, v.slope);
  }
  if (xs_.empty() || ds_.back() >= 0.0) throw NumericUnderflow("could not bracket the hypoexponential mode");
  rebuild();
}

void ArsEnvelope::add_point(double x, double h, double d) {
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  if (it != xs_.end() && *it == x) return;
  const auto pos = it - xs_.begin();
  xs_.insert(it, x);
  hs_.insert(hs_.begin() + pos, h);
  ds_.insert(ds_.begin() + pos, d);
}

void ArsEnvelope::rebuild() {
  const std::size_t m = xs_.size();
  z_.assign(m + 1, 0.0);
  z_[m] = kInf;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double denom = ds_[j] - ds_[j + 1];
    double z = 0.5 * (xs_[j] + xs_[j + 1]);
    if (denom > 1e-12 * (std::fabs(ds_[j]) + std::fabs(ds_[j + 1])) && denom > 0.0)
      z = (hs_[j + 1] - hs_[j] - ds_[j + 1] * xs_[j + 1] + ds_[j] * xs_[j]) / denom;
    z_[j + 1] = std::clamp(z, xs_[j], xs_[j + 1]);
  }
  log_mass_.resize(m);
  double top = -kInf;
  for (std::size_t j = 0; j < m; ++j) {
    log_mass_[j] = log_piece_mass(upper(j, z_[j]), ds_[j], z_[j + 1] - z_[j]);
    top = std::max(top, log_mass_[j]);
  }
  cum_mass_.resize(m);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    acc += std::exp(log_mass_[j] - top);
    cum_mass_[j] = acc;
  }
  for (double& c : cum_mass_) c /= acc;
}

double ArsEnvelope::upper(std::size_t piece, double x) const {
  return hs_[piece] + ds_[piece] * (x - xs_[piece]);
}

double ArsEnvelope::lower(double x) const {
  if (x < xs_.front() || x > xs_.back()) return -kInf;
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  if (it == xs_.end()) return hs_.back();
  const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double w = xs_[i + 1] - xs_[i];
  return ((xs_[i + 1] - x) * hs_[i] + (x - xs_[i]) * hs_[i + 1]) / w;
}

double ArsEnvelope::sample(Rng& rng) {
  if (!initialized_) throw InvalidParams("envelope not initialized");
  for (;;) {
    const double u = rng.uniform();
    const std::size_t j =
        std::min<std::size_t>(std::upper_bound(cum_mass_.begin(), cum_mass_.end(), u) - cum_mass_.begin(),
                              cum_mass_.size() - 1);
    const double w = z_[j + 1] - z_[j];
    const double x = z_[j] + sample_piece_offset(ds_[j], w, rng.uniform());
    const double log_w = std::log(rng.uniform_pos());
    const double ux = upper(j, x);
    if (log_w <= lower(x) - ux) return x;
    HypoexpDensity::Value v = density_[0].eval(x);
    ++evaluations_;
    const bool accept = log_w <= v.log_pdf - ux;
    if (std::isfinite(v.log_pdf) && std::isfinite(v.slope) && xs_.size() < kMaxArsPoints) {
      add_point(x, v.log_pdf, v.slope);
      rebuild();
    }
    if (accept) return x;
  }
}

double sample_hypoexp_exact(const HypoexpSpec& spec, ArsEnvelope& envelope, Rng& rng) {
  validate(spec);
  if (envelope.initialized() && !(envelope.spec() == spec))
    throw EnvelopeMismatch("envelope was built for a different spec");
  if (spec.k == 1) return rng.exponential(spec.rate(0));
  if (spec.g == 0) return rng.gamma(static_cast<double>(spec.k), spec.rate(0));
  if (!envelope.initialized()) envelope = ArsEnvelope(spec);
  return envelope.sample(rng);
}

EndOfRun sample_end_of_run(const HypoexpSpec& spec, double remaining, Rng& rng, std::uint64_t rejection_cap) {
  validate(spec);
  EndOfRun out;
  if (!(remaining > 0.0)) return out;
  const std::vector<double> rates = spec.rates();
  for (; out.rejections < rejection_cap; ++out.rejections) {
    double cum = 0.0;
    out.times.clear();
    for (Count i = 0; i < spec.k; ++i) {
      cum += rng.exponential(rates[i]);
      if (cum > remaining) {
        out.reactions = i;
        return out;
      }
      out.times.push_back(cum);
    }
  }
  throw RejectionLimitExceeded("end-of-run sampling exceeded the rejection cap");
}

Count sample_end_of_run_exact(const HypoexpSpec& spec, double remaining, Rng& rng) {
  validate(spec);
  if (!(remaining > 0.0)) return 0;
  const std::vector<double> occ = HypoexpDensity(spec).log_occupancy(remaining);
  const double top = *std::max_element(occ.begin(), occ.end());
  if (top == -kInf) return spec.k - 1;
  double total = 0.0;
  for (double l : occ) total += std::exp(l - top);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const double w = std::exp(occ[i] - top);
    if (u < w) return static_cast<Count>(i);
    u -= w;
  }
  return spec.k - 1;
}

}  // namespace crnbatch
