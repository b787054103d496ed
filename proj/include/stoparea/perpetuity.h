#pragma once

#include <cstddef>

#include "stoparea/dist.h"
#include "stoparea/rng.h"

namespace stoparea::perpetuity {

enum class ExponentKind { kAreaProcess, kFrechetProcess, kCustom };

// A spectrally negative Levy process Z with log E[exp(lam*Z_1)] =
//   drift*lam + gaussian_coeff*lam^2 + rate_factor * I(jump_scale*lam),
// where I(u) = integral over x<0 of (e^{ux}-1-ux) f(x) dx against the base
// jump density f(x) = e^{ax}/(Gamma(-a)(1-e^x)^{a+1}), a = alpha.  The pair
// (jump_scale, rate_factor) describes the Levy density: jumps are
// jump_scale * x with x drawn from f, at rate_factor times the base intensity;
// jump_scale = 0 disables jumps (pure drift + Brownian part).  Since the jump
// term is fully compensated, E[Z_1] = drift.
struct LevyExponentSpec {
  ExponentKind kind = ExponentKind::kCustom;
  double alpha = 1.5;
  double drift = 0.0;
  double gaussian_coeff = 0.0;
  double jump_scale = 0.0;
  double rate_factor = 0.0;
};

// Exponent lam -> Gamma(alpha + (alpha+1)lam) / Gamma((alpha+1)lam), whose
// perpetuity integral e^{-Z} reproduces the stopped-area law.  alpha in [1,2]:
// alpha = 1 is the pure-drift case (2*lam) and alpha = 2 the drift+Brownian
// case (3*lam + 9*lam^2) with no jump machinery.
LevyExponentSpec make_area_process_spec(double alpha);

// Exponent lam -> Gamma(alpha + (alpha-1)lam) / ((alpha-1) Gamma((alpha-1)lam)),
// whose perpetuity reproduces exponential variates raised to the power
// 1 - alpha.  Requires alpha strictly inside (1,2).
LevyExponentSpec make_frechet_process_spec(double alpha);

// Laplace exponent value log E[exp(lam*Z_1)] at lam >= 0, via the closed
// Gamma-ratio form of the jump integral.
double exponent_eval(const LevyExponentSpec& spec, double lam);

// Independent evaluation of the same exponent through the drift-plus-integral
// representation drift*lam + integral of (e^{s x}-1-s x) f(x) dx by adaptive
// quadrature; serves as the oracle for exponent_eval.  Area-process kind only.
double exponent_integral_check(const LevyExponentSpec& spec, double lam);

// Base jump density f on x < 0, its left tail mass N(x) = integral of f over
// (-inf, x], and the exact inverse of N (closed form, no spline needed).
double levy_density(double alpha, double x);
double levy_tail_mass(double alpha, double x);
double levy_tail_inverse(double alpha, double mass);

// Variance rate Var[Z_1] = 2*gaussian_coeff + rate_factor*jump_scale^2 *
// integral of x^2 f(x) dx, by quadrature.
double exponent_variance_rate(const LevyExponentSpec& spec);

// Horizon h such that drift*h stays above z_target even z_margin standard
// deviations of Z_h below the mean, so the neglected tail integral past h is
// about exp(-z_target)/drift for essentially every path.
double default_horizon(const LevyExponentSpec& spec, double z_target = 40.0,
                       double z_margin = 4.5);

// n draws of the perpetuity integral of e^{-Z} up to `horizon`.  Z is walked
// on steps of size dt as drift plus a Brownian increment (jumps of magnitude
// below eps_jump enter through the drift compensation and a variance-matched
// Gaussian term) plus exactly-placed compound-Poisson jumps of magnitude
// >= eps_jump drawn by inverse CDF; the integral accumulates by the trapezoid
// rule on the piecewise-linear levels between jump times.  Each path reports
// the neglected-tail estimate exp(-Z_horizon)/drift — the typical remaining
// mass under the law of large numbers (the strict mean of the remainder is
// infinite for these heavy-tailed laws, so no mean bound exists); an estimate
// above tail_tol on any path raises ToleranceError.  Batch params record
// {alpha, eps_jump, horizon, dt, max tail estimate}.
SampleBatch simulate_perpetuity(const LevyExponentSpec& spec, double eps_jump,
                                double horizon, double dt, std::size_t n,
                                RngState state, double tail_tol = 1e-8);

}  // namespace stoparea::perpetuity
