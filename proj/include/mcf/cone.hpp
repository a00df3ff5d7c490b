#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mcf/rng.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

enum class ConeStatus { kInside, kBoundary, kOutside };

/// Open polyhedral cone {x > 0 : r . x > 0 for every row r} with integer rows.
///
/// Every partition piece in this library (branch cones, image cones, dual cones and their
/// pieces) is of this form. `status` assumes its argument is already in the open positive
/// orthant; the orthant facets are added explicitly only for extreme-ray enumeration.
class LinearCone {
 public:
  LinearCone() = default;
  LinearCone(std::size_t dim, std::vector<Vec<long>> rows);

  /// The whole open positive orthant.
  static LinearCone positive(std::size_t dim) { return LinearCone(dim, {}); }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Vec<long>>& rows() const noexcept { return rows_; }

  template <Scalar T>
  ConeStatus status(std::span<const T> x) const;

  template <Scalar T>
  bool contains(std::span<const T> x) const {
    return status(x) == ConeStatus::kInside;
  }

  LinearCone intersect(const LinearCone& other) const;

  /// Extreme rays (orthant facets included), each scaled to coordinate sum 1 and sorted
  /// lexicographically. Exact; intended for d <= 8.
  std::vector<Vec<Rational>> extreme_rays() const;

  std::string describe() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Vec<long>> rows_;
};

/// Strictly positive combination of the given rays with random integer weights; lies in the
/// interior of the cone they generate.
Vec<Rational> random_interior_point(std::span<const Vec<Rational>> rays, Rng& rng);

/// Sum of the rays, a canonical interior point.
Vec<Rational> central_point(std::span<const Vec<Rational>> rays);

/// Scales a nonzero nonnegative vector to coordinate sum 1.
Vec<Rational> normalized_ray(std::span<const Rational> v);

}  // namespace mcf
