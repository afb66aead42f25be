#ifndef CRNBATCH_SRC_REGIME_HPP
#define CRNBATCH_SRC_REGIME_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "crnbatch/crn.hpp"
#include "crnbatch/numeric.hpp"
#include "crnbatch/uniformize.hpp"

namespace crnbatch::detail {

// Keeps a uniformized CRN and rebuilds it when n leaves [f n_ref, n_ref / f].
class Regime {
 public:
  Regime(const Crn& crn, Volume v, double factor) : crn_(crn), v_(v), factor_(factor) {
    order_ = std::max(order_and_generativity(crn).o, 1);
  }

  bool update(Count n) {
    const double nd = static_cast<double>(n), ref = static_cast<double>(n_ref_);
    if (u_ && nd >= factor_ * ref && factor_ * nd <= ref) return false;
    u_.emplace(uniformize(crn_, v_, std::max<Count>(n, static_cast<Count>(order_))));
    n_ref_ = n;
    return true;
  }

  const UniformizedCrn& u() const { return *u_; }

 private:
  const Crn& crn_;
  Volume v_;
  double factor_;
  int order_ = 1;
  Count n_ref_ = 0;
  std::optional<UniformizedCrn> u_;
};

inline SlowdownReport current_slowdown(const UniformizedCrn& u, const Configuration& c) {
  const Configuration ext = u.embed(c);
  const double p = u.nonpassive_probability(ext);
  const double inf = std::numeric_limits<double>::infinity();
  return {p * u.k_max() * binom(ext.n(), u.order()), u.k_max(), p > 0.0 ? 1.0 / p : inf};
}

}  // namespace crnbatch::detail

#endif  // CRNBATCH_SRC_REGIME_HPP
