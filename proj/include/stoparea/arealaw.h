#pragma once

// Closed-form knowledge about the stopped-area law: the factorization
// sampler, fractional moments, the alternating series density with a rigorous
// truncation bound, both asymptotic regimes, the CDF, and the shifted
// starting-point law.
//
// The law is that of the area swept by a spectrally positive strictly
// alpha-stable process started at 1 and stopped when it first hits zero,
// under the normalization E[exp(-t L_1)] = exp(t^alpha).  For alpha in (1,2)
// it factorizes as ((alpha+1)/4) * Z^2 / B with Z positive stable of index
// 2/(alpha+1) and B ~ Beta(1/2, (alpha-1)/(2(alpha+1))) independent; at
// alpha=1 the law is a point mass at 1/2 and at alpha=2 it is
// 1/(9*Gamma(1/3)).

#include <cstddef>
#include <mutex>
#include <vector>

#include "stoparea/dist.h"
#include "stoparea/rng.h"

namespace stoparea::arealaw {

// Derived constants used across the formulas.  The asymptote fields are
// meaningful for alpha in (1,2]; at alpha=1 the law degenerates to a point
// mass and they are set to their (infinite or zero) limits.
struct AlphaContext {
  double alpha = 1.5;
  double c_alpha = 0;        // zero-asymptote exponential rate
  double kappa_alpha = 0;    // zero-asymptote prefactor
  double zero_power = 0;     // alpha^2/(1-alpha^2)
  double zero_exp_power = 0; // 1/(1-alpha)
  double tail_power = 0;     // -1/(alpha+1) - 1
  double tail_const = 0;     // (alpha+1)^{1/(alpha+1)-1}/Gamma((alpha-1)/(alpha+1))
};

// Validates alpha in [1,2] and fills all derived constants.
AlphaContext make_alpha_context(double alpha);

// E[A^s] = (alpha+1)^s Gamma(w) Gamma(1-(alpha+1)s) / (Gamma(w-s) Gamma(1-s))
// with w = alpha/(alpha+1), valid for s < 1/(alpha+1).  At alpha=1 this
// collapses to 2^{-s}.
double fractional_moment(const AlphaContext& ctx, double s);

enum class DensityRegime { kSeries, kZeroAsymptote, kTailAsymptote };
const char* to_string(DensityRegime regime);

struct DensityValue {
  double x = 0;
  double value = 0;
  DensityRegime regime = DensityRegime::kSeries;
  // For regime kSeries: rigorous absolute bound on the truncation remainder.
  // For kZeroAsymptote: the seam-mismatch scale |ratio-1|*value (heuristic).
  double error_bound = 0;
};

// Caching evaluator for density, CDF and Mellin moments at fixed (alpha,
// eps).  Prefer this class for bulk evaluation; the free functions below
// construct a fresh evaluator per call.
//
// Series evaluation sums the alternating series with compensated
// accumulation and certifies two bounds: a rigorous truncation majorant
// (from |1/Gamma(1-u)| <= Gamma(u)/pi and a monotone geometric ratio bound)
// and an accumulated roundoff estimate.  Below the smallest certifiable x
// the density falls back to the zero asymptote rescaled by the series/
// asymptote ratio at the seam, which keeps the returned function continuous
// (a raw switch would leave a jump that fabricates extrema in modality
// scans); the raw asymptote remains available separately.
class AreaLaw {
 public:
  explicit AreaLaw(const AlphaContext& ctx, double eps = 1e-10);
  AreaLaw(double alpha, double eps = 1e-10);
  AreaLaw(const AreaLaw&) = delete;
  AreaLaw& operator=(const AreaLaw&) = delete;

  const AlphaContext& context() const { return ctx_; }
  double eps() const { return eps_; }

  // Series density with fallback (see class comment).  Requires alpha > 1.
  DensityValue density(double x) const;

  // kappa * x^{zero_power} * exp(-c * x^{zero_exp_power}), the exact formula
  // with no seam patching.  At alpha=2 this IS the closed-form density.
  double density_zero_asymptote(double x) const;

  // tail_const * x^{tail_power}.
  double density_tail_asymptote(double x) const;

  // Integral of the density from 0 to x: closed-form head below the seam
  // (upper incomplete gamma), cached panel quadrature in log x through the
  // series region, closed-form power tail above 1e6.  Throws ToleranceError
  // if the internal error estimate exceeds eps_cdf.
  double cdf(double x, double eps_cdf = 1e-6) const;

  // Quadrature evaluation of E[A^s] from the density (head + panels + tail
  // in closed form); the independent cross-check for fractional_moment.
  double mellin_moment(double s) const;

  // Smallest x at which the series certifies both bounds at this eps.
  double smallest_series_x() const;

  // n-th series term at x; exactly 0.0 at reciprocal-gamma poles (at alpha=2
  // every term with n not divisible by 3 vanishes).
  double series_term(int n, double x) const;

 private:
  struct Coef {
    double log_mag = 0;   // log magnitude of the x-independent factor
    int sign = 0;         // 0 when the term vanishes at a pole
    double piece_sum = 0; // sum of |log pieces| for roundoff tracking
  };
  struct SeriesEval {
    double value = 0;
    double trunc = 0;
    double round = 0;
    bool certified = false;
  };

  void ensure_coefs(std::size_t n) const;
  SeriesEval eval_series(double x) const;
  void ensure_seam() const;
  void ensure_cdf_table() const;
  double head_integral(double x, double s) const;  // int_0^x u^s * patched asymptote
  double tail_integral(double x, double s) const;  // int_x^inf u^s * leading terms

  AlphaContext ctx_;
  double eps_;

  mutable std::mutex mu_;
  mutable std::vector<Coef> coefs_;
  mutable bool seam_ready_ = false;
  mutable double seam_x_ = 0;
  mutable double seam_ratio_ = 1;
  mutable bool table_ready_ = false;
  mutable std::vector<double> panel_t_;    // panel edges, t = log x
  mutable std::vector<double> panel_cum_;  // cumulative mass up to edge i
  mutable double head_at_seam_ = 0;
  mutable double table_err_ = 0;           // head-model + tail-truncation error
};

// Free-function forms; each constructs a throwaway evaluator.
DensityValue density(const AlphaContext& ctx, double x, double eps = 1e-10);
double density_zero_asymptote(const AlphaContext& ctx, double x);
double density_tail_asymptote(const AlphaContext& ctx, double x);
double cdf(const AlphaContext& ctx, double x, double eps = 1e-6);

// One draw of the factorized law, alpha strictly in (1,2).
double area_draw(double alpha, Rng& g);

// n draws of the factorized law; requires 1 < alpha < 2 (boundary alphas are
// a parameter error here; see sample_area_any).
SampleBatch sample_area(const AlphaContext& ctx, std::size_t n, RngState state);

// Law of the area started from level y0 with x0 already accumulated:
// x0 + y0^{alpha+1} * A.  (x0=0, y0=1) reproduces sample_area draw for draw.
SampleBatch sample_area_shifted(const AlphaContext& ctx, double x0, double y0,
                                std::size_t n, RngState state);

// Boundary-aware sampling over the full alpha range [1,2]: point mass 1/2 at
// alpha=1, 1/(9*Gamma(1/3)) at alpha=2, factorization in between.
SampleBatch sample_area_any(const AlphaContext& ctx, std::size_t n,
                            RngState state);

}  // namespace stoparea::arealaw
