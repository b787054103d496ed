// Statistical toolkit: Kolmogorov survival values, one- and two-sample tests
// on known laws, bootstrap moment z-scores, medians, grids, and the density
// modality scan.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stoparea/arealaw.h"
#include "stoparea/dist.h"
#include "stoparea/rng.h"
#include "stoparea/stats.h"

using namespace stoparea;

TEST_CASE("kolmogorov survival matches frozen values", "[stats]") {
  // 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2), frozen at 25 digits.
  REQUIRE(std::abs(stats::kolmogorov_q(0.5) - 0.96394524366487509) <= 1e-12);
  REQUIRE(std::abs(stats::kolmogorov_q(1.0) - 0.26999967167735452) <= 1e-12);
  REQUIRE(std::abs(stats::kolmogorov_q(1.5) - 0.022217962616525129) <= 1e-12);
  REQUIRE(std::abs(stats::kolmogorov_q(2.0) - 0.00067092525577969535) <= 1e-14);
  REQUIRE(stats::kolmogorov_q(0.0) == 1.0);
  REQUIRE(stats::kolmogorov_q(10.0) <= 1e-80);
  // Monotone decreasing across the series switch near 1.18.
  double prev = 1.0;
  for (double lam = 0.05; lam < 3.0; lam += 0.05) {
    const double q = stats::kolmogorov_q(lam);
    REQUIRE(q <= prev + 1e-15);
    prev = q;
  }
}

TEST_CASE("one-sample test accepts the true law, rejects a wrong one", "[stats]") {
  Rng g({31, 0});
  SampleBatch u;
  u.values.resize(5000);
  for (double& v : u.values) v = g.uniform();
  const auto good = stats::ks_one_sample(u, [](double x) { return x; });
  REQUIRE(good.passed);
  REQUIRE(good.n1 == 5000);
  REQUIRE(good.n2 == 0);
  const auto bad = stats::ks_one_sample(u, [](double x) { return x * x; });
  REQUIRE_FALSE(bad.passed);
  REQUIRE(bad.p_value < 1e-6);
}

TEST_CASE("one-sample test rejects an invalid model function", "[stats]") {
  Rng g({31, 1});
  SampleBatch u;
  u.values.resize(200);
  for (double& v : u.values) v = g.uniform();
  REQUIRE_THROWS_AS(
      stats::ks_one_sample(u, [](double x) { return 2.0 * x; }),
      std::invalid_argument);  // leaves [0,1]
  REQUIRE_THROWS_AS(
      stats::ks_one_sample(u, [](double x) { return 1.0 - x; }),
      std::invalid_argument);  // decreasing
  SampleBatch empty;
  REQUIRE_THROWS_AS(stats::ks_one_sample(empty, [](double x) { return x; }),
                    std::invalid_argument);
}

TEST_CASE("two-sample test separates equal and different shapes", "[stats]") {
  const auto a = dist::sample_gamma(3.0, 5000, {8, 0});
  const auto b = dist::sample_gamma(3.0, 5000, {8, 1});
  const auto same = stats::ks_two_sample(a, b);
  REQUIRE(same.passed);
  const auto c = dist::sample_gamma(4.0, 5000, {8, 2});
  const auto diff = stats::ks_two_sample(a, c);
  REQUIRE_FALSE(diff.passed);
  REQUIRE(diff.p_value < 1e-6);
}

TEST_CASE("the statistic ignores sample order", "[stats]") {
  auto a = dist::sample_gamma(2.0, 1000, {9, 0});
  const auto b = dist::sample_gamma(2.0, 1000, {9, 1});
  const double before = stats::ks_two_sample(a, b).statistic;
  std::reverse(a.values.begin(), a.values.end());
  std::swap(a.values[17], a.values[400]);
  REQUIRE(stats::ks_two_sample(a, b).statistic == before);
}

TEST_CASE("moment z-scores are calibrated on a known law", "[stats]") {
  const auto g = dist::sample_gamma(3.0, 20000, {14, 0});
  const auto m1 = stats::moment_test(g, 1.0, 3.0, 200, {14, 50});
  REQUIRE(std::abs(m1.z_score) <= 4.0);
  REQUIRE(m1.bootstrap_se > 0.0);
  // E[G^2] = 12 for shape 3.
  const auto m2 = stats::moment_test(g, 2.0, 12.0, 200, {14, 51});
  REQUIRE(std::abs(m2.z_score) <= 4.0);
  // A theoretical value off by ~40 standard errors must be flagged.
  const auto wrong = stats::moment_test(g, 1.0, 3.5, 200, {14, 52});
  REQUIRE(std::abs(wrong.z_score) > 4.0);
}

TEST_CASE("moment test guards degenerate and invalid input", "[stats]") {
  SampleBatch constant;
  constant.values.assign(100, 2.0);
  const auto ok = stats::moment_test(constant, 1.0, 2.0, 50, {1, 0});
  REQUIRE(ok.z_score == 0.0);
  REQUIRE(ok.bootstrap_se == 0.0);
  REQUIRE_THROWS_AS(stats::moment_test(constant, 1.0, 2.5, 50, {1, 0}),
                    std::runtime_error);
  SampleBatch with_neg;
  with_neg.values = {1.0, -2.0, 3.0};
  REQUIRE_THROWS_AS(stats::moment_test(with_neg, 0.5, 1.0, 50, {1, 0}),
                    std::invalid_argument);
  // Integer orders on signed values are fine.
  REQUIRE_NOTHROW(stats::moment_test(with_neg, 2.0, 4.6667, 50, {1, 0}));
  SampleBatch empty;
  REQUIRE_THROWS_AS(stats::moment_test(empty, 1.0, 0.0, 50, {1, 0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(stats::moment_test(constant, 1.0, 2.0, 1, {1, 0}),
                    std::invalid_argument);
}

TEST_CASE("median handles parity and the bootstrap error is sane", "[stats]") {
  REQUIRE(stats::median({3.0, 1.0, 2.0}) == 2.0);
  REQUIRE(stats::median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  REQUIRE(stats::median({7.0}) == 7.0);
  REQUIRE_THROWS_AS(stats::median({}), std::invalid_argument);

  const auto g = dist::sample_gamma(3.0, 2000, {25, 0});
  Rng boots({25, 1});
  const double se = stats::bootstrap_median_se(g.values, 200, boots);
  REQUIRE(se > 0.0);
  // The bootstrap SE of a 2000-point median should be far below the spread.
  REQUIRE(se < 0.5);
}

TEST_CASE("log grid hits endpoints with constant ratio", "[stats]") {
  const auto g = stats::log_grid(0.01, 100.0, 41);
  REQUIRE(g.size() == 41);
  REQUIRE(g.front() == 0.01);
  REQUIRE(g.back() == 100.0);
  const double r0 = g[1] / g[0];
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    REQUIRE(std::abs(g[i + 1] / g[i] - r0) <= 1e-12 * r0);
  }
  REQUIRE_THROWS_AS(stats::log_grid(0.0, 1.0, 10), std::invalid_argument);
  REQUIRE_THROWS_AS(stats::log_grid(2.0, 1.0, 10), std::invalid_argument);
  REQUIRE_THROWS_AS(stats::log_grid(1.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("modality scan finds one mode in the stopped-area density", "[stats]") {
  const auto ctx = arealaw::make_alpha_context(1.5);
  REQUIRE(stats::unimodality_scan(ctx, stats::log_grid(0.05, 50.0, 400)) == 1);
  // alpha=2: the closed density peaks at x = 1/12.
  const auto ctx2 = arealaw::make_alpha_context(2.0);
  REQUIRE(stats::unimodality_scan(ctx2, stats::log_grid(0.02, 50.0, 400)) == 1);
}

TEST_CASE("modality scan validates its grid", "[stats]") {
  const auto ctx = arealaw::make_alpha_context(1.5);
  REQUIRE_THROWS_AS(stats::unimodality_scan(ctx, stats::log_grid(0.1, 1.0, 50)),
                    std::invalid_argument);
  auto bad = stats::log_grid(0.1, 1.0, 200);
  std::swap(bad[10], bad[11]);
  REQUIRE_THROWS_AS(stats::unimodality_scan(ctx, bad), std::invalid_argument);
}
