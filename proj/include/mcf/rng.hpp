#pragma once

#include <cstdint>
#include <random>

#include "mcf/scalar.hpp"

namespace mcf {

/// Deterministic generator addressed by (seed, stream).
///
/// Each (seed, stream) pair seeds an independent mt19937_64 through std::seed_seq, both of
/// which are fully specified by the standard, so sequences are identical across platforms,
/// runs and worker counts. Parallel code assigns streams to fixed work chunks, never to threads.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Standard exponential variate.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

/// Uniform point of the open unit simplex in dimension d (float mode).
Vec<double> random_simplex_point(Rng& rng, std::size_t d);

/// Random strictly positive rational point with coordinate sum 1 (exact mode).
Vec<Rational> random_simplex_point_exact(Rng& rng, std::size_t d);

}  // namespace mcf
