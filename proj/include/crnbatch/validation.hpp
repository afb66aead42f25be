#ifndef CRNBATCH_VALIDATION_HPP
#define CRNBATCH_VALIDATION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "crnbatch/crn.hpp"
#include "crnbatch/trajectory.hpp"

namespace crnbatch {

using Histogram = std::map<std::int64_t, std::uint64_t>;

// Runs one trial and returns the observed value; must be safe to call concurrently
// for distinct trial indices.
using TrialRunner = std::function<std::int64_t(std::uint64_t trial)>;

// CRNBATCH_THREADS if set, else the hardware concurrency.
unsigned default_threads();

Histogram endpoint_histogram(const TrialRunner& runner, std::uint64_t trials, unsigned threads = 0);

std::uint64_t histogram_total(const Histogram& h);
double histogram_mean(const Histogram& h);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
  std::size_t bins = 0;  // after merging
};

// Two-sample Pearson test; adjacent bins are merged until each pooled
// expected count is at least `min_expected` in both samples.
ChiSquareResult chisq_compare(const Histogram& a, const Histogram& b, double min_expected = 5.0);
// Goodness of fit of observed counts against probabilities over the same keys.
ChiSquareResult chisq_goodness(const Histogram& observed, const std::map<std::int64_t, double>& probs,
                               double min_expected = 5.0);

double tvd(const Histogram& a, const Histogram& b);
double ks_statistic(const Histogram& a, const Histogram& b);

std::vector<double> passive_fraction_series(const std::vector<TrajectoryRecord>& records);

struct BenchRow {
  Count n = 0;
  std::string method;
  double seconds = 0.0;
};

// Wall time of `run(n, method)` per size and method, best of `repeats`.
std::vector<BenchRow> scaling_bench(const std::function<void(Count, const std::string&)>& run,
                                    const std::vector<Count>& sizes, const std::vector<std::string>& methods,
                                    int repeats = 1);

// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace crnbatch

#endif  // CRNBATCH_VALIDATION_HPP
