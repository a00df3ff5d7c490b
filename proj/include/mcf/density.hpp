#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcf/algorithms.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

enum class DensityKind {
  kFarey,       // 1/(x y) on the segment x + y = 1
  kReverse,     // 1/((y+z)(x+z)(x+y)) on the simplex
  kCassaigne,   // 1/(2 (y+z)(x+y)) on the simplex
  kBrun,        // 1/(2 x_b x_c (x_a + x_c)) on each ordering sector x_a < x_b < x_c
  kBrunSorted,  // the same expression on the sector x_1 < x_2 < x_3 only
  kBrunSup,     // 1/(2 x_2 (1 + x_1)) on 0 < x_1 < x_2 < 1 (sup-norm section)
  kBrunD,       // d-dimensional Brun, piecewise over ordering sectors
};

/// Closed-form invariant density. Simplex models take all d coordinates of a point with
/// coordinate sum 1; factors 1 - x_i are evaluated as sums of the other coordinates.
class DensityModel {
 public:
  /// "farey", "reverse", "cassaigne", "brun", "brun-sorted", "brun-sup", "brun d=<n>".
  static DensityModel named(std::string_view name);

  const std::string& name() const noexcept { return name_; }
  DensityKind kind() const noexcept { return kind_; }
  /// Number of coordinates of an evaluation point.
  std::size_t dim() const noexcept { return dim_; }
  bool finite_mass() const noexcept { return kind_ != DensityKind::kFarey; }

  /// Checked evaluation: throws DomainError outside the open domain piece.
  template <Scalar T>
  T evaluate(std::span<const T> x) const;

  /// No domain checks; used inside quadrature where points may touch edges.
  double evaluate_unchecked(std::span<const double> x) const;

 private:
  DensityModel(std::string name, DensityKind kind, std::size_t dim)
      : name_(std::move(name)), kind_(kind), dim_(dim) {}

  std::string name_;
  DensityKind kind_;
  std::size_t dim_;
};

template <Scalar T>
T density(const DensityModel& model, std::span<const T> x) {
  return model.evaluate(x);
}

struct TransferResidual {
  double residual;  // |lhs - rhs|
  double lhs;       // delta(x)
  double rhs;       // sum over preimages of delta(h_i(x)) |Jac h_i(x)|
  std::size_t preimages;
  std::size_t skipped;  // preimages on a partition boundary
};

/// Transfer-operator residual of a density at an interior simplex point.
TransferResidual transfer_residual(const Algorithm& alg, const DensityModel& model,
                                   std::span<const double> x);

enum class MassMethod { kAuto, kReduced1d, kAdaptive2d, kMonteCarlo };

std::optional<MassMethod> parse_mass_method(std::string_view s);
std::string_view mass_method_name(MassMethod m);

struct MassResult {
  bool infinite = false;
  double value = 0.0;
  double error = 0.0;  // quadrature estimate or Monte-Carlo standard error
  MassMethod method = MassMethod::kAuto;
};

/// Total mass of a model over its domain. kAuto picks reduced-1d when available.
/// Farey reports infinite mass instead of a number.
MassResult total_mass(const DensityModel& model, MassMethod method, double tol,
                      std::uint64_t seed = 0, std::size_t mc_samples = 1000000);

/// Mass of a 3-d simplex model over one ordering sector x_{p0} < x_{p1} < x_{p2}.
double sector_mass(const DensityModel& model, std::span<const std::size_t> order, double tol);

/// Area 1/2 |ab - bc - ac| of the triangle with vertices (a,0), (0,b), (c,c).
template <Scalar T>
T triangle_area(const T& a, const T& b, const T& c) {
  return abs_of(T(a * b - b * c - a * c)) / T(2);
}

/// k x k equal-area barycentric cells of the 2-simplex.
class SimplexGrid {
 public:
  explicit SimplexGrid(std::size_t k);
  std::size_t k() const noexcept { return k_; }
  std::size_t cells() const noexcept { return k_ * k_; }
  /// Cell containing an interior point (x1, x2, x3).
  std::size_t locate(std::span<const double> x) const;
  /// Vertices of a cell with exact lattice coordinates.
  std::array<std::array<double, 3>, 3> vertices(std::size_t cell) const;

 private:
  std::size_t k_;
};

struct HistogramCell {
  std::size_t id;
  double observed;
  double expected;
};

struct HistogramComparison {
  std::string algorithm;
  std::size_t steps = 0;
  std::size_t restarts = 0;
  std::vector<std::string> diagnostics;
  std::vector<HistogramCell> cells;
  double l1 = 0.0;
  double sup = 0.0;

  std::string to_csv() const;
};

/// Model mass of every grid cell, normalized to sum 1.
std::vector<double> expected_cell_mass(const DensityModel& model, const SimplexGrid& grid,
                                       unsigned threads = 1);

/// Histogram of a projective orbit of n_steps (after burn_in discarded steps) against the
/// model's cell masses. Orbits that hit a boundary restart from a fresh random point.
HistogramComparison empirical_density(const Algorithm& alg, const DensityModel& model,
                                      std::size_t n_steps, std::size_t k, std::uint64_t seed,
                                      std::size_t burn_in = 1000, unsigned threads = 1);

}  // namespace mcf
