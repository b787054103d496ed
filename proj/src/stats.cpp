#include "stoparea/stats.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stoparea::stats {

namespace {

// Finite-sample correction for the asymptotic Kolmogorov p-value
// (Stephens 1970): the null distribution of (sqrt(ne)+0.12+0.11/sqrt(ne))*D
// is close to the limiting law even for small ne.
double ks_p_value(double d, double ne) {
  const double sq = std::sqrt(ne);
  return kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda >= 1.18) {
    // 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      sum += sign * term;
      if (term < 1e-17) break;
      sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
  }
  // Jacobi-transformed series, rapidly convergent for small lambda:
  // P(K <= lambda) = sqrt(2π)/lambda * sum_{k>=1} exp(-(2k-1)^2 π^2/(8 λ^2))
  double sum = 0.0;
  const double c = M_PI * M_PI / (8.0 * lambda * lambda);
  for (int k = 1; k <= 100; ++k) {
    const double m = 2.0 * k - 1.0;
    const double term = std::exp(-m * m * c);
    sum += term;
    if (term < 1e-300 || term < 1e-17 * sum) break;
  }
  const double p = std::sqrt(2.0 * M_PI) / lambda * sum;
  return std::min(1.0, std::max(0.0, 1.0 - p));
}

KsReport ks_two_sample(const SampleBatch& a, const SampleBatch& b,
                       double significance) {
  if (a.values.empty() || b.values.empty())
    throw std::invalid_argument("ks_two_sample: empty batch");
  std::vector<double> x = a.values;
  std::vector<double> y = b.values;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const std::size_t n1 = x.size();
  const std::size_t n2 = y.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < n1 && j < n2) {
    const double v = std::min(x[i], y[j]);
    while (i < n1 && x[i] == v) ++i;
    while (j < n2 && y[j] == v) ++j;
    const double diff = std::abs(static_cast<double>(i) / n1 -
                                 static_cast<double>(j) / n2);
    d = std::max(d, diff);
  }
  // Once one sample is exhausted the gap only shrinks back to 0, so the sup
  // has already been seen.
  KsReport r;
  r.statistic = std::min(1.0, d);
  r.n1 = n1;
  r.n2 = n2;
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                    (static_cast<double>(n1) + static_cast<double>(n2));
  r.p_value = ks_p_value(r.statistic, ne);
  r.significance = significance;
  r.passed = r.p_value > significance;
  return r;
}

KsReport ks_one_sample(const SampleBatch& a,
                       const std::function<double(double)>& cdf_fn,
                       double significance) {
  if (a.values.empty()) throw std::invalid_argument("ks_one_sample: empty batch");
  std::vector<double> x = a.values;
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  double d = 0.0;
  double prev_f = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf_fn(x[i]);
    if (!(f >= -1e-12 && f <= 1.0 + 1e-12))
      throw std::invalid_argument("ks_one_sample: cdf value outside [0,1]");
    if (f < prev_f - 1e-12)
      throw std::invalid_argument("ks_one_sample: cdf not monotone on sample");
    prev_f = std::max(prev_f, f);
    const double lo = f - static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n - f;
    d = std::max(d, std::max(lo, hi));
  }
  KsReport r;
  r.statistic = std::min(1.0, std::max(0.0, d));
  r.n1 = n;
  r.n2 = 0;
  r.p_value = ks_p_value(r.statistic, static_cast<double>(n));
  r.significance = significance;
  r.passed = r.p_value > significance;
  return r;
}

MomentTestReport moment_test(const SampleBatch& a, double s, double theoretical,
                             std::size_t n_boot, RngState rng) {
  if (a.values.empty()) throw std::invalid_argument("moment_test: empty batch");
  if (n_boot < 2) throw std::invalid_argument("moment_test: n_boot < 2");
  const std::size_t n = a.values.size();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.values[i] <= 0.0 && s != std::floor(s))
      throw std::invalid_argument("moment_test: non-positive value with fractional order");
    t[i] = std::pow(a.values[i], s);
  }
  double mean = 0.0;
  for (double v : t) mean += v;
  mean /= static_cast<double>(n);

  Rng g(rng);
  double bsum = 0.0;
  double bsq = 0.0;
  for (std::size_t b = 0; b < n_boot; ++b) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += t[g.next_u64() % n];
    m /= static_cast<double>(n);
    bsum += m;
    bsq += m * m;
  }
  const double bmean = bsum / static_cast<double>(n_boot);
  double var = bsq / static_cast<double>(n_boot) - bmean * bmean;
  var = std::max(var, 0.0);
  const double se = std::sqrt(var * static_cast<double>(n_boot) /
                              (static_cast<double>(n_boot) - 1.0));

  MomentTestReport r;
  r.s = s;
  r.empirical = mean;
  r.theoretical = theoretical;
  r.bootstrap_se = se;
  if (se == 0.0) {
    if (std::abs(mean - theoretical) <= 1e-12 * std::max(1.0, std::abs(theoretical))) {
      r.z_score = 0.0;
      return r;
    }
    throw std::runtime_error("moment_test: degenerate batch (zero bootstrap SE)");
  }
  r.z_score = (mean - theoretical) / se;
  return r;
}

std::size_t unimodality_scan(const arealaw::AlphaContext& ctx,
                             const std::vector<double>& grid) {
  if (grid.size() < 100)
    throw std::invalid_argument("unimodality_scan: grid needs >= 100 points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]) || !(grid[i] > 0.0))
      throw std::invalid_argument("unimodality_scan: grid not strictly increasing/positive");

  arealaw::AreaLaw law(ctx);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    f[i] = law.density(grid[i]).value;

  std::size_t maxima = 0;
  int last_sign = 0;  // sign of the most recent nonzero finite difference
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double diff = f[i + 1] - f[i];
    if (diff == 0.0) continue;
    const int sign = diff > 0.0 ? 1 : -1;
    if (last_sign > 0 && sign < 0) ++maxima;
    last_sign = sign;
  }
  return maxima;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                              static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty sample");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double m = values[mid];
  if (n % 2 == 0) {
    const double lower =
        *std::max_element(values.begin(), values.begin() + mid);
    m = 0.5 * (m + lower);
  }
  return m;
}

double bootstrap_median_se(const std::vector<double>& values,
                           std::size_t n_boot, Rng& g) {
  if (values.empty()) throw std::invalid_argument("bootstrap_median_se: empty sample");
  if (n_boot < 2) throw std::invalid_argument("bootstrap_median_se: n_boot < 2");
  const std::size_t n = values.size();
  std::vector<double> resample(n);
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t b = 0; b < n_boot; ++b) {
    for (std::size_t i = 0; i < n; ++i) resample[i] = values[g.next_u64() % n];
    const double m = median(resample);
    sum += m;
    sq += m * m;
  }
  const double mean = sum / static_cast<double>(n_boot);
  double var = sq / static_cast<double>(n_boot) - mean * mean;
  var = std::max(var, 0.0);
  return std::sqrt(var * static_cast<double>(n_boot) /
                   (static_cast<double>(n_boot) - 1.0));
}

}  // namespace stoparea::stats
