#include "stoparea/perpetuity.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stoparea/errors.h"
#include "stoparea/parallel.h"
#include "stoparea/quadrature.h"
#include "stoparea/specfun.h"

namespace stoparea::perpetuity {

namespace {

// Gamma(-alpha) is positive for alpha in (1,2), which keeps the base density
// and its tail mass positive.
double gamma_neg(double alpha) { return specfun::gamma_signed(-alpha); }

// Gamma(alpha+u)/Gamma(u) for u >= 0, continuous at 0 (pole of the
// denominator kills the value).
double gamma_ratio(double alpha, double u) {
  if (u == 0.0) return 0.0;
  return std::exp(specfun::log_gamma(alpha + u) - specfun::log_gamma(u));
}

// e^w - 1 - w without cancellation for small |w|.
double expm1_minus(double w) {
  if (std::abs(w) >= 1e-4) return std::expm1(w) - w;
  return 0.5 * w * w * (1.0 + w / 3.0 + w * w / 12.0 + w * w * w / 60.0);
}

// Upper limit for the substitution x = -e^t: beyond it the e^{alpha x} factor
// of the density underflows to zero.
double t_cut(double alpha) { return std::log(760.0 / alpha); }

// integral over (-inf,-1] of fn(x) f(x) dx via x = -e^t.
template <class Fn>
double far_piece(double alpha, double tol, Fn&& fn) {
  const double hi = t_cut(alpha);
  return quadrature::adaptive_simpson(
      [&](double t) {
        const double x = -std::exp(t);
        const double f = levy_density(alpha, x);
        return f == 0.0 ? 0.0 : fn(x) * f * std::exp(t);
      },
      0.0, hi, tol);
}

// integral over [-1,0) of fn(x) f(x) dx via x = -v^{1/(2-alpha)}, where
// `limit` is the v -> 0 limit of fn(x) f(x) |dx/dv|, supplied by the caller
// from the x -> 0 behaviour fn(x) ~ fn2 * x^2.
double near_piece(double alpha, double tol, double fn2,
                  const std::function<double(double)>& fn, double v_hi) {
  const double q = 1.0 / (2.0 - alpha);
  const double limit = fn2 * q / gamma_neg(alpha);
  return quadrature::adaptive_simpson(
      [&](double v) {
        if (v <= 0.0) return limit;
        const double x = -std::pow(v, q);
        if (x > -1e-290) return limit;
        return fn(x) * levy_density(alpha, x) * q * std::pow(v, q - 1.0);
      },
      0.0, v_hi, tol);
}

// W(delta) = integral over (-inf,-delta] of (-x) f(x) dx.
double abs_moment_tail(double alpha, double delta, double tol) {
  const double hi = t_cut(alpha);
  const double lo = std::log(delta);
  if (lo >= hi) return 0.0;
  return quadrature::adaptive_simpson(
      [&](double t) {
        const double x = -std::exp(t);
        const double f = levy_density(alpha, x);
        return f == 0.0 ? 0.0 : -x * f * std::exp(t);
      },
      lo, hi, tol);
}

// V(delta) = integral over [-delta,0) of x^2 f(x) dx.
double x2_moment_small(double alpha, double delta, double tol) {
  const double v_hi = std::pow(delta, 2.0 - alpha);
  return near_piece(
      alpha, tol, 1.0, [](double x) { return x * x; }, v_hi);
}

// Full second moment of the base density.
double x2_moment_full(double alpha, double tol) {
  return x2_moment_small(alpha, 1.0, tol) +
         far_piece(alpha, tol, [](double x) { return x * x; });
}

void validate_common(const LevyExponentSpec& spec) {
  if (spec.jump_scale > 0.0 && spec.rate_factor > 0.0 &&
      !(spec.alpha > 1.0 && spec.alpha < 2.0))
    throw std::invalid_argument(
        "perpetuity: jump machinery requires alpha strictly inside (1,2)");
  if (spec.gaussian_coeff < 0.0 || spec.jump_scale < 0.0 || spec.rate_factor < 0.0)
    throw std::invalid_argument("perpetuity: negative coefficient in spec");
}

bool has_jumps(const LevyExponentSpec& spec) {
  return spec.jump_scale > 0.0 && spec.rate_factor > 0.0;
}

// Precomputed per-batch sampling constants.
struct Engine {
  double alpha = 0.0;
  double s = 0.0;         // jump_scale
  double mass = 0.0;      // base tail mass beyond the cutoff
  double rate = 0.0;      // Poisson rate of retained jumps
  double mu_eff = 0.0;    // walk slope between jumps
  double sigma_eff = 0.0; // Brownian scale (includes small-jump compensation)
  double drift = 0.0;     // mean slope E[Z_1]
  bool jumps = false;
};

Engine build_engine(const LevyExponentSpec& spec, double eps_jump) {
  validate_common(spec);
  if (!(spec.drift > 0.0))
    throw std::invalid_argument("perpetuity: spec must drift to +infinity");
  if (!(eps_jump > 0.0))
    throw std::invalid_argument("perpetuity: eps_jump must be positive");

  Engine e;
  e.alpha = spec.alpha;
  e.s = spec.jump_scale;
  e.drift = spec.drift;
  e.jumps = has_jumps(spec);
  double var = 2.0 * spec.gaussian_coeff;
  double mu = spec.drift;
  if (e.jumps) {
    const double delta = eps_jump / spec.jump_scale;
    const double tol = 1e-11;
    e.mass = levy_tail_mass(spec.alpha, -delta);
    e.rate = spec.rate_factor * e.mass;
    mu += spec.rate_factor * spec.jump_scale *
          abs_moment_tail(spec.alpha, delta, tol);
    var += spec.rate_factor * spec.jump_scale * spec.jump_scale *
           x2_moment_small(spec.alpha, delta, tol);
  }
  if (!(mu > 0.0))
    throw std::invalid_argument("perpetuity: effective drift non-positive");
  e.mu_eff = mu;
  e.sigma_eff = std::sqrt(var);
  return e;
}

// One perpetuity draw.  The continuous part of Z moves linearly across each
// step (drift plus one Brownian increment); retained jumps land at exact
// uniform times inside the step; the integral of e^{-Z} uses the trapezoid
// rule on every linear segment.  Once Z exceeds z_cut the remaining
// contribution is below e^{-80} * horizon and the path stops early.
double run_path(const Engine& e, double horizon, double dt, Rng& g,
                std::vector<double>& jump_buf, double& tail_estimate) {
  constexpr double kZCut = 80.0;
  double z = 0.0;
  double exp_z = 1.0;
  double integral = 0.0;
  double t = 0.0;
  while (t < horizon) {
    const double h = std::min(dt, horizon - t);
    const double dc = e.mu_eff * h + e.sigma_eff * std::sqrt(h) * g.normal();
    jump_buf.clear();
    if (e.jumps) {
      const std::uint64_t k = g.poisson(e.rate * h);
      for (std::uint64_t i = 0; i < k; ++i) jump_buf.push_back(h * g.uniform());
      std::sort(jump_buf.begin(), jump_buf.end());
    }
    double t_prev = 0.0;
    double jumps_so_far = 0.0;
    double prev_exp = exp_z;
    for (double ti : jump_buf) {
      const double z_before = z + dc * (ti / h) + jumps_so_far;
      integral += 0.5 * (prev_exp + std::exp(-z_before)) * (ti - t_prev);
      const double y = e.s * levy_tail_inverse(e.alpha, e.mass * g.uniform());
      jumps_so_far += y;
      prev_exp = std::exp(-(z_before + y));
      t_prev = ti;
    }
    z += dc + jumps_so_far;
    exp_z = std::exp(-z);
    integral += 0.5 * (prev_exp + exp_z) * (h - t_prev);
    t += h;
    if (z > kZCut) break;
  }
  // Typical mass past the horizon under the law-of-large-numbers slope
  // (conservative after an early exit, since z only grows on average).
  tail_estimate = exp_z / e.drift;
  return integral;
}

}  // namespace

LevyExponentSpec make_area_process_spec(double alpha) {
  if (!(alpha >= 1.0 && alpha <= 2.0))
    throw std::invalid_argument("make_area_process_spec: alpha must lie in [1,2]");
  LevyExponentSpec spec;
  spec.kind = ExponentKind::kAreaProcess;
  spec.alpha = alpha;
  if (alpha == 1.0) {
    spec.drift = 2.0;
    return spec;
  }
  if (alpha == 2.0) {
    spec.drift = 3.0;
    spec.gaussian_coeff = 9.0;
    return spec;
  }
  spec.drift = specfun::gamma_signed(alpha) * (alpha + 1.0);
  spec.jump_scale = alpha + 1.0;
  spec.rate_factor = 1.0;
  return spec;
}

LevyExponentSpec make_frechet_process_spec(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument(
        "make_frechet_process_spec: alpha must lie strictly inside (1,2)");
  LevyExponentSpec spec;
  spec.kind = ExponentKind::kFrechetProcess;
  spec.alpha = alpha;
  spec.drift = specfun::gamma_signed(alpha);
  spec.jump_scale = alpha - 1.0;
  spec.rate_factor = 1.0 / (alpha - 1.0);
  return spec;
}

double exponent_eval(const LevyExponentSpec& spec, double lam) {
  validate_common(spec);
  if (!(lam >= 0.0)) throw std::invalid_argument("exponent_eval: lam must be >= 0");
  double v = spec.drift * lam + spec.gaussian_coeff * lam * lam;
  if (has_jumps(spec)) {
    const double u = spec.jump_scale * lam;
    v += spec.rate_factor *
         (gamma_ratio(spec.alpha, u) - specfun::gamma_signed(spec.alpha) * u);
  }
  return v;
}

double exponent_integral_check(const LevyExponentSpec& spec, double lam) {
  if (spec.kind != ExponentKind::kAreaProcess)
    throw std::invalid_argument("exponent_integral_check: area-process kind only");
  if (!(lam >= 0.0))
    throw std::invalid_argument("exponent_integral_check: lam must be >= 0");
  if (!has_jumps(spec))
    return spec.drift * lam + spec.gaussian_coeff * lam * lam;

  const double alpha = spec.alpha;
  const double s = (alpha + 1.0) * lam;
  const double scale = 1.0 + std::abs(exponent_eval(spec, lam));
  const double tol = 1e-11 * scale;
  const double near = near_piece(
      alpha, tol, 0.5 * s * s, [s](double x) { return expm1_minus(s * x); },
      1.0);
  const double far =
      far_piece(alpha, tol, [s](double x) { return expm1_minus(s * x); });
  return specfun::gamma_signed(alpha) * s + near + far;
}

double levy_density(double alpha, double x) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("levy_density: alpha must lie strictly inside (1,2)");
  if (!(x < 0.0)) throw std::invalid_argument("levy_density: x must be negative");
  const double eax = std::exp(alpha * x);
  if (eax == 0.0) return 0.0;
  const double one_minus = -std::expm1(x);  // 1 - e^x, accurate near 0
  return eax / (gamma_neg(alpha) * std::pow(one_minus, alpha + 1.0));
}

double levy_tail_mass(double alpha, double x) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("levy_tail_mass: alpha must lie strictly inside (1,2)");
  if (!(x < 0.0)) throw std::invalid_argument("levy_tail_mass: x must be negative");
  const double r = 1.0 / std::expm1(-x);  // e^x/(1-e^x)
  return std::pow(r, alpha) / (alpha * gamma_neg(alpha));
}

double levy_tail_inverse(double alpha, double mass) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("levy_tail_inverse: alpha must lie strictly inside (1,2)");
  if (!(mass > 0.0)) throw std::invalid_argument("levy_tail_inverse: mass must be positive");
  const double r = std::pow(mass * alpha * gamma_neg(alpha), 1.0 / alpha);
  return -std::log1p(1.0 / r);
}

double exponent_variance_rate(const LevyExponentSpec& spec) {
  validate_common(spec);
  double var = 2.0 * spec.gaussian_coeff;
  if (has_jumps(spec))
    var += spec.rate_factor * spec.jump_scale * spec.jump_scale *
           x2_moment_full(spec.alpha, 1e-11);
  return var;
}

double default_horizon(const LevyExponentSpec& spec, double z_target,
                       double z_margin) {
  if (!(spec.drift > 0.0))
    throw std::invalid_argument("default_horizon: spec must drift to +infinity");
  const double var = exponent_variance_rate(spec);
  // Solve drift*h - z_margin*sqrt(var*h) = z_target as a quadratic in sqrt(h).
  const double b = z_margin * std::sqrt(var);
  const double u =
      (b + std::sqrt(b * b + 4.0 * spec.drift * z_target)) / (2.0 * spec.drift);
  return u * u;
}

SampleBatch simulate_perpetuity(const LevyExponentSpec& spec, double eps_jump,
                                double horizon, double dt, std::size_t n,
                                RngState state, double tail_tol) {
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("simulate_perpetuity: horizon and dt must be positive");
  if (n == 0) throw std::invalid_argument("simulate_perpetuity: n must be positive");
  const Engine engine = build_engine(spec, eps_jump);

  std::vector<double> values(n, 0.0);
  std::vector<double> tails(n, 0.0);
  detail::parallel_for(n, 64, [&](std::size_t i) {
    Rng g(RngState{state.seed, state.stream_id + i});
    std::vector<double> jump_buf;
    values[i] = run_path(engine, horizon, dt, g, jump_buf, tails[i]);
  });

  double max_tail = 0.0;
  for (double r : tails) max_tail = std::max(max_tail, r);
  if (max_tail > tail_tol)
    throw ToleranceError("simulate_perpetuity: neglected-tail estimate " +
                         std::to_string(max_tail) + " exceeds tolerance");

  SampleBatch batch;
  batch.values = std::move(values);
  batch.law = LawTag::kPerpetuity;
  batch.params = {spec.alpha, eps_jump, horizon, dt, max_tail};
  batch.rng = state;
  return batch;
}

}  // namespace stoparea::perpetuity
