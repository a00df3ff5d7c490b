#include "mcf/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mcf/brun_highdim.hpp"
#include "mcf/errors.hpp"
#include "mcf/parallel.hpp"
#include "mcf/quadrature.hpp"
#include "mcf/rng.hpp"

namespace mcf {

DensityModel DensityModel::named(std::string_view name) {
  if (name == "farey") return {"farey", DensityKind::kFarey, 2};
  if (name == "reverse") return {"reverse", DensityKind::kReverse, 3};
  if (name == "cassaigne") return {"cassaigne", DensityKind::kCassaigne, 3};
  if (name == "brun" || name == "brun d=3") return {"brun", DensityKind::kBrun, 3};
  if (name == "brun-sorted" || name == "brun-sorted d=3") {
    return {"brun-sorted", DensityKind::kBrunSorted, 3};
  }
  if (name == "brun-sup") return {"brun-sup", DensityKind::kBrunSup, 2};
  if (name.substr(0, 7) == "brun d=") {
    const std::string rest(name.substr(7));
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != rest.size() || d < 2 || d > 8) throw DomainError("bad density model '" + std::string(name) + "'");
    return {"brun d=" + std::to_string(d), DensityKind::kBrunD, static_cast<std::size_t>(d)};
  }
  throw UnsupportedError("no closed-form density for '" + std::string(name) + "'");
}

namespace {

// Brun 3-d value on the sector x_a < x_b < x_c.
template <class T>
T brun3(const T& xa, const T& xb, const T& xc) {
  return T(1) / (T(2) * xb * xc * (xa + xc));
}

template <Scalar T>
Vec<T> sorted_copy(std::span<const T> x) {
  Vec<T> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

template <Scalar T>
T DensityModel::evaluate(std::span<const T> x) const {
  if (x.size() != dim_) throw DomainError(name_ + " density: expected " + std::to_string(dim_) + " coordinates");
  for (const T& c : x) {
    require_finite(c, "density argument");
    if (!(c > 0)) throw DomainError(name_ + " density: point not interior: " + format_vector(x));
  }
  if (kind_ == DensityKind::kBrunSup) {
    if (!(x[0] < x[1] && x[1] < 1)) throw DomainError("brun-sup density: need 0 < x1 < x2 < 1");
    return T(1) / (T(2) * x[1] * (T(1) + x[0]));
  }
  T sum(0);
  for (const T& c : x) sum += c;
  if constexpr (std::same_as<T, Rational>) {
    if (sum != 1) throw DomainError(name_ + " density: coordinates must sum to 1");
  } else {
    if (std::fabs(sum - 1.0) > 1e-10) throw DomainError(name_ + " density: coordinates must sum to 1");
  }
  switch (kind_) {
    case DensityKind::kFarey:
      return T(1) / (x[0] * x[1]);
    case DensityKind::kReverse:
      return T(1) / ((x[1] + x[2]) * (x[0] + x[2]) * (x[0] + x[1]));
    case DensityKind::kCassaigne:
      return T(1) / (T(2) * (x[1] + x[2]) * (x[0] + x[1]));
    case DensityKind::kBrun:
    case DensityKind::kBrunD: {
      const Vec<T> s = sorted_copy(x);
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (!(s[i] < s[i + 1])) throw DomainError(name_ + " density: point on a sector boundary");
      }
      if (kind_ == DensityKind::kBrun) return brun3(s[0], s[1], s[2]);
      return brun_density_d(view(s), dim_);
    }
    case DensityKind::kBrunSorted:
      if (!(x[0] < x[1] && x[1] < x[2])) throw DomainError("brun-sorted density: need x1 < x2 < x3");
      return brun3(x[0], x[1], x[2]);
    case DensityKind::kBrunSup:
      break;
  }
  throw DomainError("unreachable density kind");
}

double DensityModel::evaluate_unchecked(std::span<const double> x) const {
  switch (kind_) {
    case DensityKind::kFarey:
      return 1.0 / (x[0] * x[1]);
    case DensityKind::kReverse:
      return 1.0 / ((x[1] + x[2]) * (x[0] + x[2]) * (x[0] + x[1]));
    case DensityKind::kCassaigne:
      return 0.5 / ((x[1] + x[2]) * (x[0] + x[1]));
    case DensityKind::kBrun:
    case DensityKind::kBrunSorted: {
      double a = x[0], b = x[1], c = x[2];
      if (a > b) std::swap(a, b);
      if (b > c) std::swap(b, c);
      if (a > b) std::swap(a, b);
      return brun3(a, b, c);
    }
    case DensityKind::kBrunSup:
      return 0.5 / (x[1] * (1.0 + x[0]));
    case DensityKind::kBrunD: {
      Vec<double> s = sorted_copy(x);
      return brun_density_d(view(s), dim_);
    }
  }
  return 0.0;
}

template double DensityModel::evaluate(std::span<const double>) const;
template Rational DensityModel::evaluate(std::span<const Rational>) const;

TransferResidual transfer_residual(const Algorithm& alg, const DensityModel& model,
                                   std::span<const double> x) {
  TransferResidual r{0.0, model.evaluate(x), 0.0, 0, 0};
  for (std::size_t i = 0; i < alg.branches().size(); ++i) {
    const Branch& b = alg.branch(i);
    const ConeStatus img = alg.image_cone(i).status(x);
    if (img == ConeStatus::kBoundary) ++r.skipped;
    if (img != ConeStatus::kInside) continue;
    Vec<double> y = apply(b.matrix_f, x);
    if (!strictly_positive(view(y))) continue;
    const ConeStatus st = b.cone.status(view(y));
    if (st == ConeStatus::kBoundary) ++r.skipped;
    if (st != ConeStatus::kInside) continue;
    const double norm = l1_norm(view(y));
    for (double& c : y) c /= norm;
    const double jac = std::fabs(b.matrix_f.determinant()) / std::pow(norm, static_cast<double>(alg.dim()));
    r.rhs += model.evaluate(view(y)) * jac;
    ++r.preimages;
  }
  r.residual = std::fabs(r.lhs - r.rhs);
  return r;
}

std::optional<MassMethod> parse_mass_method(std::string_view s) {
  if (s == "auto") return MassMethod::kAuto;
  if (s == "reduced-1d") return MassMethod::kReduced1d;
  if (s == "adaptive-2d") return MassMethod::kAdaptive2d;
  if (s == "monte-carlo") return MassMethod::kMonteCarlo;
  return std::nullopt;
}

std::string_view mass_method_name(MassMethod m) {
  switch (m) {
    case MassMethod::kAuto:
      return "auto";
    case MassMethod::kReduced1d:
      return "reduced-1d";
    case MassMethod::kAdaptive2d:
      return "adaptive-2d";
    case MassMethod::kMonteCarlo:
      return "monte-carlo";
  }
  return "?";
}

namespace {

// log(x) and x - 1 near x = 1 from the endpoint complement.
double log_x(double x, double xc) { return xc > 0.0 ? std::log1p(-xc) : std::log(x); }
double x_minus_1(double x, double xc) { return xc > 0.0 ? -xc : x - 1.0; }

MassResult reduced_1d(const DensityModel& model, double tol) {
  MassResult r;
  r.method = MassMethod::kReduced1d;
  QuadratureResult q{0.0, 0.0};
  double factor = 1.0;
  switch (model.kind()) {
    case DensityKind::kReverse:
      q = integrate_1d(
          [](double x, double xc) { return 2.0 * log_x(x, xc) / ((x + 1.0) * x_minus_1(x, xc)); }, 0.0,
          1.0, tol);
      break;
    case DensityKind::kCassaigne:
      q = integrate_1d([](double x, double xc) { return log_x(x, xc) / (2.0 * x_minus_1(x, xc)); }, 0.0,
                       1.0, tol);
      break;
    case DensityKind::kBrun:
      factor = 6.0;
      [[fallthrough]];
    case DensityKind::kBrunSorted:
    case DensityKind::kBrunSup:
      q = integrate_1d([](double x, double) { return std::log1p(x) / (2.0 * x); }, 0.0, 1.0, tol);
      break;
    default:
      throw UnsupportedError("no one-variable reduction for " + model.name());
  }
  r.value = factor * q.value;
  r.error = factor * q.error;
  return r;
}

Point3 unit(std::size_t i) {
  Point3 p{0.0, 0.0, 0.0};
  p[i] = 1.0;
  return p;
}

Integrand2d integrand(const DensityModel& model) {
  return [&model](const Point3& p) { return model.evaluate_unchecked(std::span<const double>(p.data(), 3)); };
}

MassResult adaptive_2d(const DensityModel& model, double tol) {
  MassResult r;
  r.method = MassMethod::kAdaptive2d;
  if (model.kind() == DensityKind::kBrunSup) {
    const QuadratureResult q =
        integrate_triangle(integrand(model), {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, tol);
    r.value = q.value;
    r.error = q.error;
    return r;
  }
  if (model.dim() != 3) throw UnsupportedError("adaptive-2d quadrature needs a 2-simplex model");
  for (const auto& p : permutations(3)) {
    if (model.kind() == DensityKind::kBrunSorted && p != std::vector<std::size_t>{0, 1, 2}) continue;
    r.value += sector_mass(model, p, tol);
  }
  r.error = tol * r.value;
  return r;
}

double simplex_volume(std::size_t d) {
  double v = 1.0;
  for (std::size_t k = 2; k < d; ++k) v *= static_cast<double>(k);
  return 1.0 / v;
}

MassResult monte_carlo(const DensityModel& model, std::uint64_t seed, std::size_t n) {
  MassResult r;
  r.method = MassMethod::kMonteCarlo;
  if (n < 2) throw DomainError("monte-carlo mass needs at least 2 samples");
  Rng rng(seed, 0);
  double mean = 0.0, m2 = 0.0;
  double volume = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    if (model.kind() == DensityKind::kBrunSup) {
      const double a = rng.uniform_open(), b = rng.uniform_open();
      if (a < b) v = model.evaluate_unchecked(std::array<double, 2>{a, b});
    } else {
      Vec<double> p = random_simplex_point(rng, model.dim());
      const bool sorted_only = model.kind() == DensityKind::kBrunSorted;
      if (!sorted_only || std::is_sorted(p.begin(), p.end())) v = model.evaluate_unchecked(view(p));
      volume = simplex_volume(model.dim());
    }
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  r.value = volume * mean;
  r.error = volume * std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  return r;
}

}  // namespace

double sector_mass(const DensityModel& model, std::span<const std::size_t> order, double tol) {
  if (model.dim() != 3 || order.size() != 3) throw UnsupportedError("sector mass needs a 2-simplex model");
  const Point3 top = unit(order[2]);
  Point3 mid{0.0, 0.0, 0.0};
  mid[order[2]] = 0.5;
  mid[order[1]] = 0.5;
  const Point3 centroid{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return integrate_triangle(integrand(model), top, mid, centroid, tol).value;
}

MassResult total_mass(const DensityModel& model, MassMethod method, double tol, std::uint64_t seed,
                      std::size_t mc_samples) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!model.finite_mass()) {
    MassResult r;
    r.infinite = true;
    r.method = method;
    return r;
  }
  switch (method) {
    case MassMethod::kAuto:
      if (model.kind() == DensityKind::kBrunD) return monte_carlo(model, seed, mc_samples);
      return reduced_1d(model, tol);
    case MassMethod::kReduced1d:
      return reduced_1d(model, tol);
    case MassMethod::kAdaptive2d:
      return adaptive_2d(model, tol);
    case MassMethod::kMonteCarlo:
      return monte_carlo(model, seed, mc_samples);
  }
  throw DomainError("unknown mass method");
}

// ---------------------------------------------------------------------------------------
// Histograms

SimplexGrid::SimplexGrid(std::size_t k) : k_(k) {
  if (k == 0) throw DomainError("grid resolution must be positive");
}

namespace {

// First cell id of row i; row i holds 2(k - i) - 1 cells.
std::size_t row_start(std::size_t k, std::size_t i) { return i * (2 * k - i); }

}  // namespace

std::size_t SimplexGrid::locate(std::span<const double> x) const {
  const double kd = static_cast<double>(k_);
  const double a = x[0] * kd, b = x[1] * kd;
  std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::max(a, 0.0)), k_ - 1);
  std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(std::max(b, 0.0)), k_ - 1 - i);
  const double fi = a - static_cast<double>(i), fj = b - static_cast<double>(j);
  const bool down = fi + fj >= 1.0 && i + j + 2 <= k_;
  return row_start(k_, i) + 2 * j + (down ? 1 : 0);
}

std::array<std::array<double, 3>, 3> SimplexGrid::vertices(std::size_t cell) const {
  if (cell >= cells()) throw DomainError("cell index out of range");
  std::size_t i = 0;
  while (row_start(k_, i + 1) <= cell) ++i;
  const std::size_t pos = cell - row_start(k_, i);
  const std::size_t j = pos / 2;
  const bool down = pos % 2 == 1;
  const double kd = static_cast<double>(k_);
  auto pt = [&](std::size_t a, std::size_t b) {
    return std::array<double, 3>{static_cast<double>(a) / kd, static_cast<double>(b) / kd,
                                 static_cast<double>(k_ - a - b) / kd};
  };
  if (!down) return {pt(i, j), pt(i + 1, j), pt(i, j + 1)};
  return {pt(i + 1, j), pt(i, j + 1), pt(i + 1, j + 1)};
}

std::vector<double> expected_cell_mass(const DensityModel& model, const SimplexGrid& grid,
                                       unsigned threads) {
  if (model.dim() != 3) throw UnsupportedError("histograms need a 2-simplex model");
  const bool piecewise = model.kind() == DensityKind::kBrun || model.kind() == DensityKind::kBrunSorted;
  std::vector<double> mass(grid.cells(), 0.0);
  const Integrand2d f = integrand(model);
  const double tol = 1e-9;
  parallel_for(grid.cells(), threads, [&](std::size_t c) {
    const auto v = grid.vertices(c);
    std::vector<Point3> tri{v[0], v[1], v[2]};
    if (!piecewise) {
      mass[c] = integrate_polygon(f, tri, tol).value;
      return;
    }
    double acc = 0.0;
    for (const auto& p : permutations(3)) {
      if (model.kind() == DensityKind::kBrunSorted && p != std::vector<std::size_t>{0, 1, 2}) continue;
      Point3 c1{0.0, 0.0, 0.0}, c2{0.0, 0.0, 0.0};
      c1[p[1]] = 1.0;
      c1[p[0]] = -1.0;
      c2[p[2]] = 1.0;
      c2[p[1]] = -1.0;
      const std::vector<Point3> piece = clip_polygon(clip_polygon(tri, c1), c2);
      acc += integrate_polygon(f, piece, tol).value;
    }
    mass[c] = acc;
  });
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  for (double& m : mass) m /= total;
  return mass;
}

std::string HistogramComparison::to_csv() const {
  std::ostringstream out;
  out << "cell-id,observed,expected,residual\n";
  for (const auto& c : cells) {
    out << c.id << ',' << format_scalar(c.observed) << ',' << format_scalar(c.expected) << ','
        << format_scalar(c.observed - c.expected) << '\n';
  }
  return out.str();
}

HistogramComparison empirical_density(const Algorithm& alg, const DensityModel& model,
                                      std::size_t n_steps, std::size_t k, std::uint64_t seed,
                                      std::size_t burn_in, unsigned threads) {
  if (alg.dim() != 3 || model.dim() != 3) throw UnsupportedError("histograms need a 3-d algorithm");
  if (n_steps == 0) throw DomainError("histogram needs at least one step");
  const SimplexGrid grid(k);
  HistogramComparison out;
  out.algorithm = alg.name();
  out.steps = n_steps;

  std::vector<std::uint64_t> counts(grid.cells(), 0);
  Rng rng(seed, 0);
  const bool sorted_domain = !alg.domain().rows().empty();
  auto fresh = [&] {
    Vec<double> p = random_simplex_point(rng, 3);
    if (sorted_domain) std::sort(p.begin(), p.end());
    return p;
  };
  Vec<double> x = fresh();
  std::size_t warm = 0;
  std::size_t counted = 0;
  while (counted < n_steps) {
    try {
      auto s = alg.step_projective<double>(view(x));
      x = std::move(s.x);
    } catch (const Error& e) {
      ++out.restarts;
      if (out.diagnostics.size() < 10) {
        out.diagnostics.push_back("restart after " + std::to_string(counted) + " counted steps: " + e.what());
      }
      if (out.restarts > 1000) throw NumericError("too many orbit restarts");
      x = fresh();
      warm = 0;
      continue;
    }
    if (warm < burn_in) {
      ++warm;
      continue;
    }
    ++counts[grid.locate(view(x))];
    ++counted;
  }

  const std::vector<double> expected = expected_cell_mass(model, grid, threads);
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    const double obs = static_cast<double>(counts[c]) / static_cast<double>(n_steps);
    out.cells.push_back({c, obs, expected[c]});
    const double diff = std::fabs(obs - expected[c]);
    out.l1 += diff;
    out.sup = std::max(out.sup, diff);
  }
  return out;
}

}  // namespace mcf
