#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "stoparea/arealaw.h"
#include "stoparea/dist.h"
#include "stoparea/rng.h"

namespace stoparea::stats {

// Result of a Kolmogorov–Smirnov comparison.  n2 == 0 marks a one-sample test
// against an exact CDF; otherwise both batch sizes are recorded.
struct KsReport {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double significance = 0.01;
  bool passed = true;
};

// Empirical s-moment of a batch against a theoretical value, with a bootstrap
// standard error and the resulting z-score.
struct MomentTestReport {
  double s = 0.0;
  double empirical = 0.0;
  double theoretical = 0.0;
  double bootstrap_se = 0.0;
  double z_score = 0.0;
};

// Survival function Q(lambda) = P(K > lambda) of the Kolmogorov distribution,
// evaluated by whichever of the two theta-series converges fastest.
double kolmogorov_q(double lambda);

// Exact sup-distance between the two empirical CDFs; the p-value uses the
// asymptotic Kolmogorov law at effective size n1*n2/(n1+n2) with the standard
// finite-sample correction factor.
KsReport ks_two_sample(const SampleBatch& a, const SampleBatch& b,
                       double significance = 0.01);

// Sup-distance between the empirical CDF of `a` and the exact CDF `cdf_fn`.
// Detects (and rejects) a cdf_fn that decreases or leaves [0,1] along the
// sorted sample.
KsReport ks_one_sample(const SampleBatch& a,
                       const std::function<double(double)>& cdf_fn,
                       double significance = 0.01);

// Mean of x^s over the batch, its bootstrap SE over n_boot resamples, and the
// z-score against `theoretical`.  A batch with zero bootstrap SE is accepted
// only when the empirical and theoretical values already agree (z = 0);
// otherwise it is reported as degenerate.
MomentTestReport moment_test(const SampleBatch& a, double s, double theoretical,
                             std::size_t n_boot, RngState rng);

// Counts strict local maxima of the stopped-area density along `grid`
// (strictly increasing, at least 100 points) by tracking sign changes of
// successive finite differences; flat stretches do not break a mode.
std::size_t unimodality_scan(const arealaw::AlphaContext& ctx,
                             const std::vector<double>& grid);

// Log-spaced grid with n points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// Median of a sample (by value; averages the two central order statistics for
// even sizes) and the bootstrap SE of that median.
double median(std::vector<double> values);
double bootstrap_median_se(const std::vector<double>& values,
                           std::size_t n_boot, Rng& g);

}  // namespace stoparea::stats
