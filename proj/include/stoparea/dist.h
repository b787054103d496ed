#pragma once

// Base samplers: gamma, beta, one-sided positive stable, and increments of
// the spectrally positive strictly stable process normalized so that
// E[exp(-t L_1)] = exp(t^alpha).
//
// Scalar draw functions consume an Rng in place; batch functions construct
// their own generator from an explicit RngState and tag the output with the
// law it came from.  Identical states give bit-identical batches.

#include <cstddef>
#include <string>
#include <vector>

#include "stoparea/rng.h"

namespace stoparea {

enum class LawTag {
  kGamma,
  kBeta,
  kPositiveStable,
  kStableIncrement,
  kArea,
  kAreaShifted,
  kHittingTime,
  kPathArea,
  kPerpetuity,
};

std::string to_string(LawTag tag);

struct SampleBatch {
  std::vector<double> values;
  LawTag law = LawTag::kGamma;
  std::vector<double> params;  // law parameters (shape, alpha, ...)
  RngState rng;                // state the batch was generated from
};

namespace dist {

// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by the boost
// G_{a+1} * U^{1/a}.  Requires shape > 0.
double gamma_draw(double shape, Rng& g);

// Beta(a, b) as a ratio of gammas.  Requires a, b > 0.
double beta_draw(double a, double b, Rng& g);

// One-sided positive stable Z_a with E[exp(-lambda Z_a)] = exp(-lambda^a),
// 0 < a < 1, by Kanter's representation.
double positive_stable_draw(double a, Rng& g);

// Unit-time increment L_1 of the spectrally positive stable process with
// E[exp(-t L_1)] = exp(t^alpha), alpha in (1, 2].  Chambers-Mallows-Stuck
// with total positive skew; the normalization makes the scale factor exactly
// 1 (at alpha = 2 this reduces to N(0, 2)).
double stable_increment_draw(double alpha, Rng& g);

// Increment over time dt: dt^{1/alpha} * L_1 draw.
double stable_increment_draw(double alpha, double dt, Rng& g);

SampleBatch sample_gamma(double shape, std::size_t n, RngState state);
SampleBatch sample_beta(double a, double b, std::size_t n, RngState state);
SampleBatch sample_positive_stable(double a, std::size_t n, RngState state);
SampleBatch sample_stable_increment(double alpha, double dt, std::size_t n,
                                    RngState state);

}  // namespace dist
}  // namespace stoparea
