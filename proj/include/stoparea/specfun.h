#pragma once

// Real-argument gamma-family special functions used throughout the library.
//
// log_gamma / gamma_signed delegate to libm's lgamma_r (thread-safe, ~2 ulp);
// recip_gamma extends 1/Gamma to the whole real line as an entire function,
// returning exactly 0 at the poles 0, -1, -2, ...  The regularized incomplete
// gamma functions gamma_p / gamma_q back the closed-form pieces of the area
// CDF and several test oracles.

namespace stoparea::specfun {

// log Gamma(x) for x > 0.  Throws std::domain_error otherwise.
double log_gamma(double x);

// log |Gamma(x)| for any non-pole x; sign receives the sign of Gamma(x).
// At a pole (x a non-positive integer within 1e-12) returns +infinity with
// sign = 0.
double log_abs_gamma(double x, int& sign);

// Gamma(x) for any non-pole real x (negative non-integers included, via the
// signed libm evaluation).  Throws std::domain_error at poles.  Overflows to
// +/-infinity for large |x| as usual.
double gamma_signed(double x);

// 1/Gamma(x), entire in x.  Arguments within 1e-12 of a non-positive integer
// are treated as exact poles and yield exactly 0.0.
double recip_gamma(double x);

// sin(pi x) with exact range reduction (exact zeros at integer x).
double sin_pi(double x);

// Regularized lower / upper incomplete gamma functions P(a,x), Q(a,x) for
// a > 0, x >= 0.  P + Q = 1.  Series for x < a+1, Lentz continued fraction
// otherwise; absolute accuracy ~1e-14.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace stoparea::specfun
