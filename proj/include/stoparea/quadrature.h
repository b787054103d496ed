#pragma once

// Adaptive Simpson quadrature on finite intervals.  Callers handle improper
// integrals by substitution (the library integrates smooth transformed
// integrands only).

#include <cmath>
#include <utility>

namespace stoparea::quadrature {

namespace detail {

inline double simpson_rule(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_rec(F& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, double noise,
                    int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(a, m, fa, flm, fm);
  const double right = simpson_rule(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  // The noise floor stops refinement once the defect is at the level produced
  // by evaluation jitter alone (which scales like noise * width, exactly as
  // the per-level tolerance does, so plain halving would never terminate).
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= noise * (b - a)) {
    return left + right + delta / 15.0;
  }
  return adaptive_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, noise,
                      depth - 1) +
         adaptive_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, noise,
                      depth - 1);
}

}  // namespace detail

// Integrates f over [a, b] to absolute tolerance ~tol.  `noise` is the
// caller's bound on the integrand's evaluation-noise amplitude per unit
// length; it adds at most noise * (b - a) / 15 to the result's error.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        double noise = 0.0, int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = detail::simpson_rule(a, b, fa, fm, fb);
  return detail::adaptive_rec(f, a, fa, b, fb, m, fm, whole, tol, noise,
                              max_depth);
}

}  // namespace stoparea::quadrature
