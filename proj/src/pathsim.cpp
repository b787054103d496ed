#include "stoparea/pathsim.h"

#include <cmath>
#include <vector>

#include "stoparea/parallel.h"

namespace stoparea::pathsim {

namespace {

void validate(const arealaw::AlphaContext& ctx, const PathConfig& cfg) {
  if (!(ctx.alpha >= 1.0 && ctx.alpha <= 2.0))
    throw std::invalid_argument("pathsim: alpha must lie in [1,2]");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("pathsim: dt must be positive");
  if (!(cfg.refine_factor > 0.0 && cfg.refine_factor < 1.0))
    throw std::invalid_argument("pathsim: refine_factor must lie in (0,1)");
  if (!(cfg.refine_threshold > 0.0))
    throw std::invalid_argument("pathsim: refine_threshold must be positive");
  if (!(cfg.max_time > 0.0))
    throw std::invalid_argument("pathsim: max_time must be positive");
  if (!(cfg.coarsen_start >= cfg.refine_threshold))
    throw std::invalid_argument("pathsim: coarsen_start below refine_threshold");
  if (!(cfg.start_level > 0.0))
    throw std::invalid_argument("pathsim: start_level must be positive");
}

}  // namespace

StoppedAreaDraw simulate_stopped_area(const arealaw::AlphaContext& ctx,
                                      const PathConfig& cfg, RngState state) {
  validate(ctx, cfg);
  const double alpha = ctx.alpha;
  const bool deterministic = alpha == 1.0;
  Rng g(state);

  StoppedAreaDraw draw;
  double level = cfg.start_level;
  double t = 0.0;
  double area = 0.0;
  for (;;) {
    double h = cfg.dt;
    if (level < cfg.refine_threshold) {
      h = cfg.dt * cfg.refine_factor;
      draw.refined = true;
    } else if (level > cfg.coarsen_start) {
      h = cfg.dt * std::pow(level / cfg.coarsen_start, alpha);
    }
    const double next =
        deterministic ? level - h : level + dist::stable_increment_draw(alpha, h, g);
    ++draw.n_steps;
    if (next <= 0.0) {
      // Continuous downward crossing: interpolate the hitting time inside the
      // step and close the area with the final triangle.
      const double frac = level / (level - next);
      draw.hitting_time = t + frac * h;
      draw.area = area + 0.5 * level * frac * h;
      return draw;
    }
    area += 0.5 * (level + next) * h;
    t += h;
    level = next;
    if (t >= cfg.max_time) throw HorizonError(t, area);
  }
}

StoppedAreaBatches batch_stopped_areas(const arealaw::AlphaContext& ctx,
                                       const PathConfig& cfg, std::size_t n,
                                       RngState state) {
  validate(ctx, cfg);
  if (n == 0) throw std::invalid_argument("batch_stopped_areas: n must be positive");

  std::vector<double> times(n, 0.0);
  std::vector<double> areas(n, 0.0);
  std::vector<unsigned char> failed(n, 0);
  std::vector<std::uint64_t> steps(n, 0);

  detail::parallel_for(n, 64, [&](std::size_t i) {
    const RngState path_state{state.seed, state.stream_id + i};
    try {
      const StoppedAreaDraw d = simulate_stopped_area(ctx, cfg, path_state);
      times[i] = d.hitting_time;
      areas[i] = d.area;
      steps[i] = d.n_steps;
    } catch (const HorizonError&) {
      failed[i] = 1;
    }
  });

  StoppedAreaBatches out;
  out.hitting_times.values.reserve(n);
  out.areas.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.total_steps += steps[i];
    if (failed[i]) {
      ++out.horizon_failures;
      continue;
    }
    out.hitting_times.values.push_back(times[i]);
    out.areas.values.push_back(areas[i]);
  }
  out.hitting_times.law = LawTag::kHittingTime;
  out.hitting_times.params = {ctx.alpha, cfg.dt, cfg.start_level};
  out.hitting_times.rng = state;
  out.areas.law = LawTag::kPathArea;
  out.areas.params = {ctx.alpha, cfg.dt, cfg.start_level};
  out.areas.rng = state;

  if (static_cast<double>(out.horizon_failures) > 1e-3 * static_cast<double>(n))
    throw std::runtime_error("batch_stopped_areas: horizon-failure rate above 0.1%");
  return out;
}

}  // namespace stoparea::pathsim
