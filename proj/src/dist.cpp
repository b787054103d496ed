#include "stoparea/dist.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stoparea {

std::string to_string(LawTag tag) {
  switch (tag) {
    case LawTag::kGamma: return "gamma";
    case LawTag::kBeta: return "beta";
    case LawTag::kPositiveStable: return "positive_stable";
    case LawTag::kStableIncrement: return "stable_increment";
    case LawTag::kArea: return "area";
    case LawTag::kAreaShifted: return "area_shifted";
    case LawTag::kHittingTime: return "hitting_time";
    case LawTag::kPathArea: return "path_area";
    case LawTag::kPerpetuity: return "perpetuity";
  }
  return "unknown";
}

namespace dist {

namespace {

// Marsaglia-Tsang for shape >= 1.
double gamma_draw_ge1(double shape, Rng& g) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = g.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = g.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double gamma_draw(double shape, Rng& g) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("gamma_draw: shape must be > 0");
  }
  if (shape >= 1.0) return gamma_draw_ge1(shape, g);
  // Boost: G_a = G_{a+1} * U^{1/a}.
  const double boost = std::pow(g.uniform(), 1.0 / shape);
  return gamma_draw_ge1(shape + 1.0, g) * boost;
}

double beta_draw(double a, double b, Rng& g) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("beta_draw: shapes must be > 0");
  }
  const double ga = gamma_draw(a, g);
  const double gb = gamma_draw(b, g);
  return ga / (ga + gb);
}

double positive_stable_draw(double a, Rng& g) {
  if (!(a > 0.0) || !(a < 1.0)) {
    throw std::invalid_argument("positive_stable_draw: requires 0 < a < 1");
  }
  const double u = g.uniform();
  const double w = g.exponential();
  const double su = std::sin(M_PI * u);
  const double s1 = std::sin(a * M_PI * u);
  const double s2 = std::sin((1.0 - a) * M_PI * u);
  return s1 / std::pow(su, 1.0 / a) * std::pow(s2 / w, (1.0 - a) / a);
}

double stable_increment_draw(double alpha, Rng& g) {
  if (!(alpha > 1.0) || !(alpha <= 2.0)) {
    throw std::invalid_argument("stable_increment_draw: requires alpha in (1,2]");
  }
  const double v = g.uniform(-M_PI / 2.0, M_PI / 2.0);
  const double w = g.exponential();
  // Chambers-Mallows-Stuck, total positive skew.  The shift makes
  // alpha*(v+b) = alpha*v + pi*(alpha/2 - 1); in the normalization
  // E[exp(-t L_1)] = exp(t^alpha) the scale factor cancels exactly.
  const double avb = alpha * v + M_PI * (0.5 * alpha - 1.0);
  return std::sin(avb) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - avb) / w, (1.0 - alpha) / alpha);
}

double stable_increment_draw(double alpha, double dt, Rng& g) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("stable_increment_draw: requires dt > 0");
  }
  return std::pow(dt, 1.0 / alpha) * stable_increment_draw(alpha, g);
}

namespace {

template <class Draw>
SampleBatch fill_batch(std::size_t n, RngState state, LawTag law,
                       std::vector<double> params, Draw draw) {
  SampleBatch batch;
  batch.law = law;
  batch.params = std::move(params);
  batch.rng = state;
  batch.values.resize(n);
  Rng g(state);
  for (auto& v : batch.values) v = draw(g);
  return batch;
}

}  // namespace

SampleBatch sample_gamma(double shape, std::size_t n, RngState state) {
  return fill_batch(n, state, LawTag::kGamma, {shape},
                    [shape](Rng& g) { return gamma_draw(shape, g); });
}

SampleBatch sample_beta(double a, double b, std::size_t n, RngState state) {
  return fill_batch(n, state, LawTag::kBeta, {a, b},
                    [a, b](Rng& g) { return beta_draw(a, b, g); });
}

SampleBatch sample_positive_stable(double a, std::size_t n, RngState state) {
  return fill_batch(n, state, LawTag::kPositiveStable, {a},
                    [a](Rng& g) { return positive_stable_draw(a, g); });
}

SampleBatch sample_stable_increment(double alpha, double dt, std::size_t n,
                                    RngState state) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("sample_stable_increment: requires dt > 0");
  }
  const double scale = std::pow(dt, 1.0 / alpha);
  return fill_batch(n, state, LawTag::kStableIncrement, {alpha, dt},
                    [alpha, scale](Rng& g) {
                      return scale * stable_increment_draw(alpha, g);
                    });
}

}  // namespace dist
}  // namespace stoparea
