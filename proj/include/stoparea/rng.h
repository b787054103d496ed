#pragma once

// Deterministic, stream-partitioned random number generation.
//
// Every sampler in the library draws from an Rng constructed from an explicit
// RngState {seed, stream_id}.  The generator is xoshiro256++ seeded through a
// splitmix64 expansion of (seed, stream_id), so distinct stream ids give
// decorrelated sequences and identical states reproduce bit-identical output
// on every platform.  Batch drivers partition work by assigning one stream per
// path/chunk, which makes results independent of execution order and worker
// count.

#include <array>
#include <cstdint>

namespace stoparea {

struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

class Rng {
 public:
  explicit Rng(RngState state);

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform();

  // Uniform on (lo, hi).
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (second draw of each pair is cached).
  double normal();

  // Exponential with unit mean.
  double exponential();

  // Poisson with the given mean.  Product-of-uniforms method below mean 30;
  // larger means split dyadically (a sum of independent Poisson halves is
  // exact), so all means stay reproducible without platform-dependent paths.
  std::uint64_t poisson(double mean);

 private:
  std::array<std::uint64_t, 4> s_{};
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace stoparea
