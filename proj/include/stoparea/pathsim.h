#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "stoparea/arealaw.h"
#include "stoparea/dist.h"
#include "stoparea/rng.h"

namespace stoparea::pathsim {

// Euler walk configuration.
//
// The base step dt applies while the level sits in [refine_threshold,
// coarsen_start].  Below refine_threshold the step shrinks by refine_factor
// (hitting-time bias concentrates near zero, where the drift-to-noise ratio
// degrades).  Above coarsen_start the step grows as (level/coarsen_start)^alpha
// so the clock keeps pace with the self-similar excursion scale; without this
// the heavy upper tail of the hitting time (infinite mean) makes fixed-step
// batches intractable, and with it the per-step resolution relative to the
// local excursion length stays constant.  max_time defaults so that the
// probability of a path outliving it is below 1e-6 for every alpha in (1,2].
struct PathConfig {
  double dt = 0.01;
  double refine_threshold = 0.1;
  double refine_factor = 0.25;
  double max_time = 1e12;
  double coarsen_start = 2.0;
  double start_level = 1.0;
};

// One simulated path: first hitting time of zero, accumulated area, step
// count, and whether the refined tier was ever active.
struct StoppedAreaDraw {
  double hitting_time = 0.0;
  double area = 0.0;
  std::uint64_t n_steps = 0;
  bool refined = false;
};

// Thrown by simulate_stopped_area when a path reaches max_time without
// crossing zero.  Batch drivers catch and count these.
struct HorizonError : std::runtime_error {
  HorizonError(double time_reached_, double area_so_far_)
      : std::runtime_error("path simulation reached max_time without crossing"),
        time_reached(time_reached_),
        area_so_far(area_so_far_) {}
  double time_reached;
  double area_so_far;
};

// T-batch and A-batch from n independent paths, plus the number of paths that
// hit the safety horizon.  Failed paths are counted here and excluded from the
// value arrays; a failure rate above 0.1% raises an error.
struct StoppedAreaBatches {
  SampleBatch hitting_times;
  SampleBatch areas;
  std::size_t horizon_failures = 0;
  std::uint64_t total_steps = 0;
};

// Simulates the level process from start_level with exact stable increments
// until the first step that crosses zero.  The crossing is continuous from
// above (no negative jumps), so the hitting time and the final area sliver are
// filled by linear interpolation within the crossing step; elsewhere the area
// accumulates by the trapezoid rule.  alpha = 1 is the deterministic unit-drift
// case; otherwise requires 1 < alpha <= 2.
StoppedAreaDraw simulate_stopped_area(const arealaw::AlphaContext& ctx,
                                      const PathConfig& cfg, RngState state);

// n independent paths on streams [state.stream_id, state.stream_id + n).
// Deterministic for a fixed state regardless of thread count.
StoppedAreaBatches batch_stopped_areas(const arealaw::AlphaContext& ctx,
                                       const PathConfig& cfg, std::size_t n,
                                       RngState state);

}  // namespace stoparea::pathsim
