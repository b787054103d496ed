#include "stoparea/arealaw.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stoparea/errors.h"
#include "stoparea/quadrature.h"
#include "stoparea/specfun.h"

namespace stoparea::arealaw {

namespace {

constexpr double kXHi = 1e6;        // above this the closed power tail is used
constexpr int kMaxTerms = 4000;     // hard cap on series length
constexpr int kTailTerms = 6;       // closed-form integrated tail terms
// Evaluation jitter of the series near the seam (measured: < 4e-9 per unit
// log-x, decaying below 1e-12 within a factor e^2 of the seam); quadrature
// must not refine below this or it recurses to exhaustion chasing roundoff.
// Away from the seam only truncation-count transitions (jumps <= eps) remain.
constexpr double kSeriesNoise = 2e-8;
constexpr double kFarNoise = 2e-10;
constexpr double kNoiseBand = 2.0;  // log-x width of the noisy region

void neumaier_add(double& sum, double& comp, double t) {
  const double s = sum + t;
  if (std::abs(sum) >= std::abs(t)) {
    comp += (sum - s) + t;
  } else {
    comp += (t - s) + sum;
  }
  sum = s;
}

}  // namespace

AlphaContext make_alpha_context(double alpha) {
  if (!(alpha >= 1.0) || !(alpha <= 2.0)) {
    throw std::invalid_argument("make_alpha_context: alpha must be in [1,2], got " +
                                std::to_string(alpha));
  }
  AlphaContext ctx;
  ctx.alpha = alpha;
  const double beta = alpha + 1.0;
  ctx.tail_power = -1.0 / beta - 1.0;
  // 1/Gamma vanishes at the alpha=1 pole, correctly degenerating the tail.
  ctx.tail_const =
      std::pow(beta, 1.0 / beta - 1.0) * specfun::recip_gamma((alpha - 1.0) / beta);
  if (alpha == 1.0) {
    ctx.c_alpha = 0.0;
    ctx.kappa_alpha = std::numeric_limits<double>::infinity();
    ctx.zero_power = -std::numeric_limits<double>::infinity();
    ctx.zero_exp_power = -std::numeric_limits<double>::infinity();
    return ctx;
  }
  ctx.c_alpha = (alpha - 1.0) * std::pow(beta, alpha / (1.0 - alpha));
  ctx.kappa_alpha = std::exp(specfun::log_gamma(alpha / beta)) *
                    std::sqrt(beta / (alpha - 1.0)) /
                    (2.0 * M_PI * std::pow(beta, alpha / (alpha * alpha - 1.0)));
  ctx.zero_power = alpha * alpha / (1.0 - alpha * alpha);
  ctx.zero_exp_power = 1.0 / (1.0 - alpha);
  return ctx;
}

double fractional_moment(const AlphaContext& ctx, double s) {
  const double beta = ctx.alpha + 1.0;
  if (!(s < 1.0 / beta)) {
    if (ctx.alpha == 1.0) {
      // Point mass at 1/2: every moment exists.  Beyond s = 1/2 the Gamma
      // factors hit poles that cancel pairwise (duplication formula), so
      // return the limit directly; below it the generic route applies.
      return std::pow(2.0, -s);
    }
    throw std::domain_error("fractional_moment: requires s < 1/(alpha+1)");
  }
  const double w = ctx.alpha / beta;
  const double lv = s * std::log(beta) + specfun::log_gamma(w) +
                    specfun::log_gamma(1.0 - beta * s) -
                    specfun::log_gamma(w - s) - specfun::log_gamma(1.0 - s);
  return std::exp(lv);
}

const char* to_string(DensityRegime regime) {
  switch (regime) {
    case DensityRegime::kSeries: return "series";
    case DensityRegime::kZeroAsymptote: return "zero_asymptote";
    case DensityRegime::kTailAsymptote: return "tail_asymptote";
  }
  return "unknown";
}

AreaLaw::AreaLaw(const AlphaContext& ctx, double eps) : ctx_(ctx), eps_(eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("AreaLaw: eps must be > 0");
  // Rejects hand-rolled aggregates that skipped make_alpha_context.
  if (!(ctx.alpha >= 1.0) || !(ctx.alpha <= 2.0)) {
    throw std::invalid_argument("AreaLaw: context not built by make_alpha_context");
  }
}

AreaLaw::AreaLaw(double alpha, double eps)
    : AreaLaw(make_alpha_context(alpha), eps) {}

double AreaLaw::density_zero_asymptote(double x) const {
  if (!(x > 0.0)) throw std::domain_error("density_zero_asymptote: x must be > 0");
  if (ctx_.alpha == 1.0) {
    throw std::domain_error("density_zero_asymptote: law degenerate at alpha=1");
  }
  // Log-space evaluation avoids inf*0 when the power overflows but the
  // exponential dominates.
  const double lv = std::log(ctx_.kappa_alpha) + ctx_.zero_power * std::log(x) -
                    ctx_.c_alpha * std::pow(x, ctx_.zero_exp_power);
  return std::exp(lv);
}

double AreaLaw::density_tail_asymptote(double x) const {
  if (!(x > 0.0)) throw std::domain_error("density_tail_asymptote: x must be > 0");
  return ctx_.tail_const * std::pow(x, ctx_.tail_power);
}

void AreaLaw::ensure_coefs(std::size_t n) const {
  const double beta = ctx_.alpha + 1.0;
  const double lnbeta = std::log(beta);
  const double lgw = specfun::log_gamma(ctx_.alpha / beta);
  while (coefs_.size() <= n) {
    const double k = static_cast<double>(coefs_.size());
    Coef c;
    int s1 = 0;
    int s2 = 0;
    const double lg1 = specfun::log_abs_gamma(1.0 - (k + 1.0) / beta, s1);
    const double lg2 = specfun::log_abs_gamma(1.0 - (k + 2.0) / beta, s2);
    if (s1 != 0 && s2 != 0) {
      const double power_piece = ((k + 1.0) / beta - 1.0) * lnbeta;
      const double lgfact = specfun::log_gamma(k + 1.0);
      c.log_mag = lgw + power_piece - lgfact - lg1 - lg2;
      const int parity = (static_cast<std::size_t>(k) % 2 == 0) ? 1 : -1;
      c.sign = parity * s1 * s2;
      c.piece_sum = std::abs(lgw) + std::abs(power_piece) + std::abs(lgfact) +
                    std::abs(lg1) + std::abs(lg2);
    }
    coefs_.push_back(c);
  }
}

double AreaLaw::series_term(int n, double x) const {
  if (n < 0) throw std::invalid_argument("series_term: n must be >= 0");
  if (!(x > 0.0)) throw std::domain_error("series_term: x must be > 0");
  std::lock_guard<std::mutex> lock(mu_);
  ensure_coefs(static_cast<std::size_t>(n));
  const Coef& c = coefs_[static_cast<std::size_t>(n)];
  if (c.sign == 0) return 0.0;
  const double beta = ctx_.alpha + 1.0;
  const double e_n = -(n + 1.0) / beta - 1.0;
  return c.sign * std::exp(c.log_mag + e_n * std::log(x));
}

AreaLaw::SeriesEval AreaLaw::eval_series(double x) const {
  const double beta = ctx_.alpha + 1.0;
  const double lnbeta = std::log(beta);
  const double lgw = specfun::log_gamma(ctx_.alpha / beta);
  const double lx = std::log(x);
  const double inv_pow = std::pow(beta * x, 1.0 / beta);
  const double ln2pi2 = 2.0 * std::log(M_PI);

  SeriesEval out;
  double sum = 0.0;
  double comp = 0.0;
  double round_acc = 0.0;
  double trunc = std::numeric_limits<double>::infinity();
  int n_used = kMaxTerms;
  for (int n = 0; n < kMaxTerms; ++n) {
    ensure_coefs(static_cast<std::size_t>(n));
    const Coef& c = coefs_[static_cast<std::size_t>(n)];
    const double e_n = -(n + 1.0) / beta - 1.0;
    if (c.sign != 0) {
      const double t = c.sign * std::exp(c.log_mag + e_n * lx);
      neumaier_add(sum, comp, t);
      round_acc += std::abs(t) * (c.piece_sum + std::abs(e_n * lx) + 2.0) * 3e-16;
    }
    // Remainder majorant: |1/Gamma(1-u)| <= Gamma(u)/pi turns the tail into a
    // positive series whose term ratio is bounded by rho below, decreasing in
    // n; once rho < 1 the geometric sum bounds the remainder.
    const double rho = std::pow(n + 4.0, 2.0 / beta) / (inv_pow * (n + 2.0));
    if (rho < 1.0) {
      const double lM = lgw + ((n + 2.0) / beta - 1.0) * lnbeta +
                        (-(n + 2.0) / beta - 1.0) * lx +
                        specfun::log_gamma((n + 2.0) / beta) +
                        specfun::log_gamma((n + 3.0) / beta) - ln2pi2 -
                        specfun::log_gamma(n + 2.0);
      trunc = std::exp(lM) / (1.0 - rho);
      // Scale the gate by the (settled) sum so small far-tail densities are
      // resolved relatively, not just to an absolute floor.
      if (trunc <= eps_ * std::min(1.0, std::abs(sum))) {
        n_used = n + 1;
        break;
      }
    }
  }
  (void)n_used;
  out.value = sum + comp;
  out.trunc = trunc;
  out.round = round_acc;
  out.certified = trunc <= eps_ * std::min(1.0, std::abs(out.value)) &&
                  round_acc <= std::max(eps_, 0.05 * std::abs(out.value)) &&
                  (out.value > 0.0 || trunc < 1e-300);
  return out;
}

void AreaLaw::ensure_seam() const {
  if (seam_ready_) return;
  if (ctx_.alpha == 1.0) {
    throw std::domain_error("density: law degenerate at alpha=1 (point mass at 1/2)");
  }
  // The certification predicate is monotone in practice: bisect for the
  // smallest certifiable x.
  double lo = 1e-3;
  double hi = 2.0;
  if (eval_series(lo).certified) {
    seam_x_ = lo;
  } else {
    while (!eval_series(hi).certified) hi *= 2.0;  // defensive; hi=2 certifies
    while (hi / lo > 1.0005) {
      const double mid = std::sqrt(lo * hi);
      if (eval_series(mid).certified) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    seam_x_ = hi;
  }
  const double raw_asym =
      std::exp(std::log(ctx_.kappa_alpha) + ctx_.zero_power * std::log(seam_x_) -
               ctx_.c_alpha * std::pow(seam_x_, ctx_.zero_exp_power));
  seam_ratio_ = eval_series(seam_x_).value / raw_asym;
  seam_ready_ = true;
}

double AreaLaw::smallest_series_x() const {
  std::lock_guard<std::mutex> lock(mu_);
  ensure_seam();
  return seam_x_;
}

DensityValue AreaLaw::density(double x) const {
  if (!(x > 0.0)) throw std::domain_error("density: x must be > 0");
  std::lock_guard<std::mutex> lock(mu_);
  ensure_seam();
  DensityValue out;
  out.x = x;
  if (x >= seam_x_) {
    const SeriesEval ev = eval_series(x);
    if (ev.certified) {
      out.value = std::max(ev.value, 0.0);
      out.regime = DensityRegime::kSeries;
      out.error_bound = ev.trunc + ev.round;
      return out;
    }
  }
  // Below the seam: asymptote rescaled to match the series at the seam, so
  // the returned density is continuous across the switch.
  const double raw =
      std::exp(std::log(ctx_.kappa_alpha) + ctx_.zero_power * std::log(x) -
               ctx_.c_alpha * std::pow(x, ctx_.zero_exp_power));
  out.value = seam_ratio_ * raw;
  out.regime = DensityRegime::kZeroAsymptote;
  out.error_bound = std::abs(seam_ratio_ - 1.0) * out.value;
  return out;
}

double AreaLaw::head_integral(double x, double s) const {
  // int_0^x u^s * seam_ratio * kappa u^p exp(-c u^q) du in closed form via
  // the upper incomplete gamma (substitute v = c u^q, q < 0).
  const double alpha = ctx_.alpha;
  const double beta = alpha + 1.0;
  const double a = 1.0 / beta + s * (1.0 - alpha);
  if (!(a > 0.0)) {
    throw std::domain_error("head_integral: moment order too large for the head");
  }
  const double z = ctx_.c_alpha * std::pow(x, ctx_.zero_exp_power);
  if (z > 5000.0) return 0.0;  // Q(a,z) underflows; the head mass is nil
  const double lv = std::log(ctx_.kappa_alpha) + std::log(alpha - 1.0) -
                    a * std::log(ctx_.c_alpha) + specfun::log_gamma(a);
  return seam_ratio_ * std::exp(lv) * specfun::gamma_q(a, z);
}

double AreaLaw::tail_integral(double x, double s) const {
  // Termwise closed-form integral of the first kTailTerms series terms over
  // [x, inf); each term integrates to x^{s+e_n+1}/((n+1)/beta - s).
  const double beta = ctx_.alpha + 1.0;
  const double lx = std::log(x);
  double total = 0.0;
  for (int n = 0; n < kTailTerms; ++n) {
    ensure_coefs(static_cast<std::size_t>(n));
    const Coef& c = coefs_[static_cast<std::size_t>(n)];
    if (c.sign == 0) continue;
    const double denom = (n + 1.0) / beta - s;
    const double e_n = -(n + 1.0) / beta - 1.0;
    total += c.sign * std::exp(c.log_mag + (s + e_n + 1.0) * lx) / denom;
  }
  return total;
}

void AreaLaw::ensure_cdf_table() const {
  if (table_ready_) return;
  ensure_seam();
  const double t_lo = std::log(seam_x_);
  const double t_hi = std::log(kXHi);
  const std::size_t n_panels =
      static_cast<std::size_t>(std::ceil((t_hi - t_lo) / 0.05));
  panel_t_.resize(n_panels + 1);
  panel_cum_.resize(n_panels + 1);
  for (std::size_t i = 0; i <= n_panels; ++i) {
    panel_t_[i] = t_lo + (t_hi - t_lo) * static_cast<double>(i) /
                             static_cast<double>(n_panels);
  }
  const auto integrand = [this](double t) {
    const double x = std::exp(t);
    const SeriesEval ev = eval_series(x);
    return ev.value * x;  // f(x) dx = f(e^t) e^t dt
  };
  panel_cum_[0] = 0.0;
  for (std::size_t i = 0; i < n_panels; ++i) {
    const double floor = panel_t_[i] < t_lo + kNoiseBand ? kSeriesNoise : kFarNoise;
    panel_cum_[i + 1] =
        panel_cum_[i] + quadrature::adaptive_simpson(integrand, panel_t_[i],
                                                     panel_t_[i + 1], 1e-13,
                                                     floor);
  }
  head_at_seam_ = head_integral(seam_x_, 0.0);
  // Error budget: seam-mismatch of the head model, quadrature slop, and the
  // truncation of the closed tail (estimated by the next omitted term).
  const double e3 = -(kTailTerms + 1.0) / (ctx_.alpha + 1.0) - 1.0;
  ensure_coefs(kTailTerms);
  const Coef& c3 = coefs_[kTailTerms];
  const double tail_trunc =
      c3.sign == 0
          ? 0.0
          : std::exp(c3.log_mag + (e3 + 1.0) * std::log(kXHi)) /
                ((kTailTerms + 1.0) / (ctx_.alpha + 1.0));
  table_err_ = std::abs(seam_ratio_ - 1.0) * head_at_seam_ +
               1e-13 * static_cast<double>(n_panels) +
               (kSeriesNoise * kNoiseBand + kFarNoise * (t_hi - t_lo)) / 15.0 +
               tail_trunc + 1e-10;
  table_ready_ = true;
}

double AreaLaw::cdf(double x, double eps_cdf) const {
  if (!(x > 0.0)) throw std::domain_error("cdf: x must be > 0");
  if (ctx_.alpha == 1.0) return x < 0.5 ? 0.0 : 1.0;  // point mass at 1/2
  std::lock_guard<std::mutex> lock(mu_);
  ensure_cdf_table();
  if (table_err_ > eps_cdf) {
    throw ToleranceError("cdf: cannot certify requested tolerance " +
                         std::to_string(eps_cdf));
  }
  double value = 0.0;
  if (x <= seam_x_) {
    value = head_integral(x, 0.0);
  } else if (x >= kXHi) {
    value = head_at_seam_ + panel_cum_.back() + tail_integral(kXHi, 0.0) -
            tail_integral(x, 0.0);
  } else {
    const double t = std::log(x);
    const auto it = std::upper_bound(panel_t_.begin(), panel_t_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - panel_t_.begin()) - 1;
    const auto integrand = [this](double u) {
      const double xx = std::exp(u);
      return eval_series(xx).value * xx;
    };
    const double floor =
        panel_t_[k] < panel_t_.front() + kNoiseBand ? kSeriesNoise : kFarNoise;
    value = head_at_seam_ + panel_cum_[k] +
            quadrature::adaptive_simpson(integrand, panel_t_[k], t, 1e-13,
                                         floor);
  }
  return std::clamp(value, 0.0, 1.0);
}

double AreaLaw::mellin_moment(double s) const {
  const double beta = ctx_.alpha + 1.0;
  if (ctx_.alpha == 1.0) {
    throw std::domain_error("mellin_moment: law degenerate at alpha=1");
  }
  if (!(s < 1.0 / beta)) {
    throw std::domain_error("mellin_moment: requires s < 1/(alpha+1)");
  }
  std::lock_guard<std::mutex> lock(mu_);
  ensure_seam();
  const double head = head_integral(seam_x_, s);
  const auto integrand = [this, s](double t) {
    const double x = std::exp(t);
    return eval_series(x).value * std::exp((s + 1.0) * t);
  };
  // x^s amplifies the near-seam jitter for negative s; widen the floor there.
  const double amp = std::pow(seam_x_, std::min(s, 0.0));
  const double t_lo = std::log(seam_x_);
  const double t_cut = std::min(t_lo + kNoiseBand, std::log(kXHi));
  const double mid =
      quadrature::adaptive_simpson(integrand, t_lo, t_cut, 1e-10,
                                   kSeriesNoise * amp) +
      quadrature::adaptive_simpson(integrand, t_cut, std::log(kXHi), 1e-10,
                                   kFarNoise * amp);
  const double tail = tail_integral(kXHi, s);
  return head + mid + tail;
}

DensityValue density(const AlphaContext& ctx, double x, double eps) {
  return AreaLaw(ctx, eps).density(x);
}

double density_zero_asymptote(const AlphaContext& ctx, double x) {
  return AreaLaw(ctx).density_zero_asymptote(x);
}

double density_tail_asymptote(const AlphaContext& ctx, double x) {
  return AreaLaw(ctx).density_tail_asymptote(x);
}

double cdf(const AlphaContext& ctx, double x, double eps) {
  return AreaLaw(ctx).cdf(x, eps);
}

double area_draw(double alpha, Rng& g) {
  const double beta = alpha + 1.0;
  const double z = dist::positive_stable_draw(2.0 / beta, g);
  const double b = dist::beta_draw(0.5, (alpha - 1.0) / (2.0 * beta), g);
  return 0.25 * beta * z * z / b;
}

namespace {

SampleBatch shifted_batch(const AlphaContext& ctx, double x0, double y0,
                          std::size_t n, RngState state, LawTag tag) {
  if (!(ctx.alpha > 1.0) || !(ctx.alpha < 2.0)) {
    throw std::invalid_argument(
        "sample_area: factorization requires alpha strictly in (1,2)");
  }
  if (!(y0 > 0.0)) throw std::invalid_argument("sample_area_shifted: y0 must be > 0");
  if (!(x0 >= 0.0)) throw std::invalid_argument("sample_area_shifted: x0 must be >= 0");
  SampleBatch batch;
  batch.law = tag;
  batch.params = {ctx.alpha, x0, y0};
  batch.rng = state;
  batch.values.resize(n);
  const double scale = std::pow(y0, ctx.alpha + 1.0);
  Rng g(state);
  for (auto& v : batch.values) v = x0 + scale * area_draw(ctx.alpha, g);
  return batch;
}

}  // namespace

SampleBatch sample_area(const AlphaContext& ctx, std::size_t n, RngState state) {
  SampleBatch batch = shifted_batch(ctx, 0.0, 1.0, n, state, LawTag::kArea);
  batch.params = {ctx.alpha};
  return batch;
}

SampleBatch sample_area_shifted(const AlphaContext& ctx, double x0, double y0,
                                std::size_t n, RngState state) {
  return shifted_batch(ctx, x0, y0, n, state, LawTag::kAreaShifted);
}

SampleBatch sample_area_any(const AlphaContext& ctx, std::size_t n,
                            RngState state) {
  SampleBatch batch;
  batch.law = LawTag::kArea;
  batch.params = {ctx.alpha};
  batch.rng = state;
  batch.values.resize(n);
  if (ctx.alpha == 1.0) {
    std::fill(batch.values.begin(), batch.values.end(), 0.5);
    return batch;
  }
  Rng g(state);
  if (ctx.alpha == 2.0) {
    for (auto& v : batch.values) v = 1.0 / (9.0 * dist::gamma_draw(1.0 / 3.0, g));
    return batch;
  }
  for (auto& v : batch.values) v = area_draw(ctx.alpha, g);
  return batch;
}

}  // namespace stoparea::arealaw
