// Levy-exponent layer and the exponential-functional simulator: gamma-ratio
// identities for the exponent, the quadrature cross-route, jump-density
// inversion, horizon policy, and the degenerate pure-drift boundary.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "stoparea/errors.h"
#include "stoparea/perpetuity.h"
#include "stoparea/specfun.h"
#include "stoparea/stats.h"

using namespace stoparea;
using perpetuity::LevyExponentSpec;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("area exponent closed forms at the boundary indices", "[perpetuity]") {
  const auto d2 = perpetuity::make_area_process_spec(2.0);
  for (double lam : {0.3, 1.0, 2.0}) {
    REQUIRE(rel_close(perpetuity::exponent_eval(d2, lam),
                      3.0 * lam + 9.0 * lam * lam, 1e-12));
  }
  const auto d1 = perpetuity::make_area_process_spec(1.0);
  for (double lam : {0.5, 4.0}) {
    REQUIRE(rel_close(perpetuity::exponent_eval(d1, lam), 2.0 * lam, 1e-12));
  }
  REQUIRE(perpetuity::exponent_eval(perpetuity::make_area_process_spec(1.5),
                                    0.0) == 0.0);
}

TEST_CASE("area exponent equals its gamma-ratio form", "[perpetuity]") {
  // psi(lam) = Gamma(alpha + (alpha+1) lam) / Gamma((alpha+1) lam).
  for (double alpha : {1.2, 1.5, 1.8}) {
    const auto spec = perpetuity::make_area_process_spec(alpha);
    for (double lam : {0.2, 1.0, 3.0}) {
      const double u = (alpha + 1.0) * lam;
      const double ref =
          std::exp(specfun::log_gamma(alpha + u) - specfun::log_gamma(u));
      REQUIRE(rel_close(perpetuity::exponent_eval(spec, lam), ref, 1e-10));
    }
  }
}

TEST_CASE("frechet exponent equals its gamma-ratio form", "[perpetuity]") {
  // psi(lam) = Gamma(alpha + (alpha-1) lam) / ((alpha-1) Gamma((alpha-1) lam)).
  for (double alpha : {1.3, 1.5, 1.9}) {
    const auto spec = perpetuity::make_frechet_process_spec(alpha);
    for (double lam : {0.4, 2.0}) {
      const double u = (alpha - 1.0) * lam;
      const double ref =
          std::exp(specfun::log_gamma(alpha + u) - specfun::log_gamma(u)) /
          (alpha - 1.0);
      REQUIRE(rel_close(perpetuity::exponent_eval(spec, lam), ref, 1e-10));
    }
  }
  REQUIRE_THROWS_AS(perpetuity::make_frechet_process_spec(1.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(perpetuity::make_frechet_process_spec(2.0),
                    std::invalid_argument);
}

TEST_CASE("quadrature route reproduces the closed exponent", "[perpetuity]") {
  for (double alpha : {1.2, 1.5, 1.8}) {
    const auto spec = perpetuity::make_area_process_spec(alpha);
    for (double lam : {0.5, 2.0}) {
      const double closed = perpetuity::exponent_eval(spec, lam);
      const double quad = perpetuity::exponent_integral_check(spec, lam);
      REQUIRE(std::abs(quad - closed) <= 1e-8 * std::max(1.0, std::abs(closed)));
    }
  }
  REQUIRE_THROWS_AS(
      perpetuity::exponent_integral_check(
          perpetuity::make_frechet_process_spec(1.5), 1.0),
      std::invalid_argument);
}

TEST_CASE("jump tail mass inverts exactly and differentiates to the density",
          "[perpetuity]") {
  const double alpha = 1.5;
  for (double x : {-2.0, -0.7, -0.05}) {
    const double m = perpetuity::levy_tail_mass(alpha, x);
    REQUIRE(m > 0.0);
    REQUIRE(rel_close(perpetuity::levy_tail_inverse(alpha, m), x, 1e-12));
    // d/dx of the tail mass is the density.
    const double h = 1e-6 * std::abs(x);
    const double fd = (perpetuity::levy_tail_mass(alpha, x + h) -
                       perpetuity::levy_tail_mass(alpha, x - h)) /
                      (2.0 * h);
    REQUIRE(rel_close(fd, perpetuity::levy_density(alpha, x), 1e-6));
  }
  // Mass grows toward the origin (more small jumps than large ones).
  REQUIRE(perpetuity::levy_tail_mass(alpha, -0.05) >
          perpetuity::levy_tail_mass(alpha, -2.0));
  // Spectral negativity: positive arguments are rejected outright.
  REQUIRE_THROWS_AS(perpetuity::levy_density(alpha, 0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(perpetuity::levy_tail_mass(alpha, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(perpetuity::levy_density(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("variance rate matches the curvature of the exponent", "[perpetuity]") {
  // Var[Z_1] is the second derivative of the exponent at zero; Richardson
  // finite differences of the closed form cross-check the quadrature route.
  for (double alpha : {1.2, 1.5, 1.8}) {
    const auto spec = perpetuity::make_area_process_spec(alpha);
    const double var = perpetuity::exponent_variance_rate(spec);
    auto psi = [&](double lam) { return perpetuity::exponent_eval(spec, lam); };
    const double h = 1e-3;
    // Forward second differences (psi(0) = 0) have a first-order error term,
    // so the halved-step Richardson combination is 2*fine - coarse.
    const double coarse = (psi(2.0 * h) - 2.0 * psi(h)) / (h * h);
    const double fine = (psi(h) - 2.0 * psi(0.5 * h)) / (0.25 * h * h);
    const double curvature = 2.0 * fine - coarse;
    REQUIRE(rel_close(var, curvature, 1e-4));
  }
  // Boundaries: pure drift has no variance, the alpha=2 spec is Brownian.
  REQUIRE(perpetuity::exponent_variance_rate(
              perpetuity::make_area_process_spec(1.0)) == 0.0);
  REQUIRE(rel_close(perpetuity::exponent_variance_rate(
                        perpetuity::make_area_process_spec(2.0)),
                    18.0, 1e-12));
}

TEST_CASE("default horizon satisfies its defining equation", "[perpetuity]") {
  // h solves drift*h - margin*sqrt(var*h) = target.
  for (const auto& spec : {perpetuity::make_area_process_spec(1.5),
                           perpetuity::make_frechet_process_spec(1.5)}) {
    const double h = perpetuity::default_horizon(spec, 40.0, 4.5);
    const double var = perpetuity::exponent_variance_rate(spec);
    const double lhs = spec.drift * h - 4.5 * std::sqrt(var * h);
    REQUIRE(rel_close(lhs, 40.0, 1e-9));
  }
}

TEST_CASE("pure drift perpetuity integrates to one half", "[perpetuity]") {
  // At alpha=1 the walk is deterministic (Z_t = 2t), so every draw equals
  // the integral of exp(-2t): one half, up to trapezoid curvature error.
  const auto spec = perpetuity::make_area_process_spec(1.0);
  const double h = perpetuity::default_horizon(spec);
  REQUIRE(rel_close(h, 20.0, 1e-12));  // 40 / drift with zero variance
  const auto batch =
      perpetuity::simulate_perpetuity(spec, 0.05, h, 1e-3, 20, {2, 0});
  REQUIRE(batch.values.size() == 20);
  for (double v : batch.values) REQUIRE(std::abs(v - 0.5) <= 1e-5);
}

TEST_CASE("perpetuity draws match a stopped-area moment", "[perpetuity]") {
  // E[P^{-1/2}] for the area exponent at alpha=1.5, frozen from the
  // gamma-ratio formula.
  const auto spec = perpetuity::make_area_process_spec(1.5);
  const double h = perpetuity::default_horizon(spec);
  const auto batch =
      perpetuity::simulate_perpetuity(spec, 0.05, h, 2e-3, 200, {81, 0});
  const auto m = stats::moment_test(batch, -0.5, 1.2656867824947542, 300, {81, 7});
  REQUIRE(std::abs(m.z_score) <= 4.0);
  REQUIRE(batch.law == LawTag::kPerpetuity);
}

TEST_CASE("tail tolerance raises when the horizon is too short", "[perpetuity]") {
  const auto spec = perpetuity::make_area_process_spec(1.5);
  REQUIRE_THROWS_AS(
      perpetuity::simulate_perpetuity(spec, 0.05, 1.0, 1e-3, 3, {2, 0}),
      ToleranceError);
}

TEST_CASE("spec guards reject invalid configurations", "[perpetuity]") {
  REQUIRE_THROWS_AS(perpetuity::make_area_process_spec(0.9),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(perpetuity::make_area_process_spec(2.5),
                    std::invalid_argument);
  LevyExponentSpec bad = perpetuity::make_area_process_spec(1.5);
  bad.rate_factor = -1.0;
  REQUIRE_THROWS_AS(perpetuity::exponent_eval(bad, 1.0), std::invalid_argument);
  const auto spec = perpetuity::make_area_process_spec(1.5);
  REQUIRE_THROWS_AS(perpetuity::exponent_eval(spec, -0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(
      perpetuity::simulate_perpetuity(spec, 0.0, 10.0, 1e-3, 5, {1, 0}),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      perpetuity::simulate_perpetuity(spec, 0.05, 10.0, 1e-3, 0, {1, 0}),
      std::invalid_argument);
}
