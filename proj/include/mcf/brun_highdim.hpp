#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "mcf/scalar.hpp"

namespace mcf {

/// Invariant density of the projective d-dimensional Brun map at a point sorted in
/// increasing order, 2 <= d <= 8. `x` holds either all d coordinates (sum 1) or the
/// first d-1, in which case x_d = 1 - sum is implied.
///
///   delta(x) = 1/((d-1)! x_{d-1}) * sum over chains {d-1} = A_1 < ... < A_{d-1} = {1..d-1}
///              of prod_k 1/(1 - sum_{i in A_k} x_i)
template <Scalar T>
T brun_density_d(std::span<const T> x, std::size_t d);

/// The chain sum alone (density times (d-1)! x_{d-1}).
template <Scalar T>
T brun_chain_sum(std::span<const T> x, std::size_t d);

/// Index set I (bitmask over zero-based coordinates), pivot l in I and positive weights
/// x_1..x_d summing to 1.
template <Scalar T>
struct PolytopeSpec {
  std::uint32_t index_set;
  std::size_t pivot;
  Vec<T> weights;

  void validate() const;
};

/// Volume of {beta_i (i in I) : beta_i < 0 for i != l; sum_I beta_j x_j - beta_i < 1 for
/// i in I; sum_I beta_j x_j < 1} by the pyramid recursion, memoized on subsets of I.
/// Base case |I| = 1 is the interval -1/(1-x_l) < beta_l < 1/x_l.
/// Requires sum_{i in I} x_i < 1 (DomainError otherwise).
template <Scalar T>
T polytope_volume_recursive(const PolytopeSpec<T>& p);

struct VolumeEstimate {
  double estimate;
  double stderr_;
  std::size_t samples;
  std::size_t hits;
};

/// Rejection-sampling volume of the same polytope inside an explicit bounding box:
/// with c = 1/(1 - sum_I x), beta_i in (-c, 0) for i != l and
/// beta_l in (-c, (1 + c (sum_I x - x_l)) / x_l). An empty box gives 0. Requires |I| <= 6.
VolumeEstimate polytope_volume_oracle(const PolytopeSpec<double>& p, std::size_t n_samples,
                                      std::uint64_t seed);

}  // namespace mcf
