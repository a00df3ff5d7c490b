#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mcf/algorithms.hpp"
#include "mcf/density.hpp"
#include "mcf/dilog.hpp"
#include "mcf/errors.hpp"
#include "mcf/quadrature.hpp"
#include "mcf/rng.hpp"

using namespace mcf;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

Rational q(long n, long d = 1) { return make_rational(n, d); }

double shoelace(double ax, double ay, double bx, double by, double cx, double cy) {
  return 0.5 * std::fabs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay));
}

// Li2 by plain summation, valid for |z| <= 1 (slow but independent).
double li2_series(double z) {
  long double s = 0, p = 1;
  for (int n = 1; n < 2000000; ++n) {
    p *= z;
    s += p / (static_cast<long double>(n) * n);
  }
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("density values") {
  const auto farey = DensityModel::named("farey");
  CHECK(farey.evaluate<Rational>(view(Vec<Rational>{q(1, 2), q(1, 2)})) == q(4));
  CHECK_FALSE(farey.finite_mass());
  const auto rev = DensityModel::named("reverse");
  CHECK(rev.evaluate<Rational>(view(Vec<Rational>{q(1, 3), q(1, 3), q(1, 3)})) == q(27, 8));
  const auto brun = DensityModel::named("brun-sorted");
  CHECK(brun.evaluate<Rational>(view(Vec<Rational>{q(1, 5), q(3, 10), q(1, 2)})) == q(100, 21));
  CHECK(DensityModel::named("brun").evaluate<Rational>(view(Vec<Rational>{q(1, 2), q(1, 5), q(3, 10)})) == q(100, 21));
  CHECK(DensityModel::named("brun-sup").evaluate<double>(view(Vec<double>{0.5, 0.75})) ==
        doctest::Approx(1.0 / (2 * 0.75 * 1.5)));
  CHECK(DensityModel::named("cassaigne").evaluate<Rational>(view(Vec<Rational>{q(1, 3), q(1, 3), q(1, 3)})) == q(9, 8));
}

TEST_CASE("density domain errors") {
  const auto rev = DensityModel::named("reverse");
  CHECK_THROWS_AS(rev.evaluate<Rational>(view(Vec<Rational>{q(0), q(1, 2), q(1, 2)})), DomainError);
  CHECK_THROWS_AS(rev.evaluate<Rational>(view(Vec<Rational>{q(1, 3), q(1, 3), q(1, 2)})), DomainError);
  CHECK_THROWS_AS(rev.evaluate<Rational>(view(Vec<Rational>{q(1, 2), q(1, 2)})), DomainError);
  CHECK_THROWS_AS(DensityModel::named("brun-sorted").evaluate<Rational>(view(Vec<Rational>{q(1, 2), q(1, 5), q(3, 10)})),
                  DomainError);
  CHECK_THROWS_AS(DensityModel::named("brun").evaluate<Rational>(view(Vec<Rational>{q(1, 4), q(1, 4), q(1, 2)})),
                  DomainError);
  CHECK_THROWS_AS(DensityModel::named("selmer"), UnsupportedError);
  CHECK_THROWS_AS(DensityModel::named("brun d=12"), DomainError);
}

TEST_CASE("farey transfer residual against the one-dimensional preimage formulas") {
  const auto model = DensityModel::named("farey");
  const Algorithm& alg = get_algorithm("farey");
  for (double x : {1.0 / 3.0, 0.1, 0.5 + 1e-3, 0.77, 0.93}) {
    // y1 = x/(1+x), y2 = 1/(2-x); derivatives of the forward map are 1/(1-y)^2 and 1/y^2.
    const double y1 = x / (1 + x), y2 = 1 / (2 - x);
    const double oracle = 1 / (y1 * (1 - y1)) * (1 - y1) * (1 - y1) + 1 / (y2 * (1 - y2)) * y2 * y2;
    CHECK(oracle == doctest::Approx(1 / (x * (1 - x))).epsilon(1e-13));
    const Vec<double> p{x, 1 - x};
    const auto r = transfer_residual(alg, model, view(p));
    CHECK(r.preimages == 2);
    CHECK(r.rhs == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(r.residual < 1e-12 * r.lhs);
  }
}

TEST_CASE("transfer residuals at random points") {
  Rng rng(31, 0);
  for (const std::string n : {"farey", "reverse", "cassaigne", "brun", "brun-sorted d=3", "brun d=4"}) {
    const Algorithm& alg = get_algorithm(n);
    const auto model = DensityModel::named(*alg.density_model());
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      Vec<double> x = random_simplex_point(rng, alg.dim());
      if (!alg.domain().contains<double>(view(x))) std::sort(x.begin(), x.end());
      const auto r = transfer_residual(alg, model, view(x));
      worst = std::max(worst, r.residual / r.lhs);
    }
    CAPTURE(n);
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("triangle areas") {
  CHECK(triangle_area(q(1), q(1), q(0)) == q(1, 2));
  CHECK(triangle_area(q(2), q(3), q(1)) == q(1, 2));
  // (2,0), (0,2), (1,1) are collinear.
  CHECK(triangle_area(q(2), q(2), q(1)) == q(0));

  Rng rng(32, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = 0.05 + 0.4 * rng.uniform(), y = 0.05 + 0.4 * rng.uniform();
    const double area = triangle_area(1 / (x - 1), 1 / (y - 1), 1 / (x + y));
    CHECK(area == doctest::Approx(1 / ((x + y) * (1 - x) * (1 - y))).epsilon(1e-12));

    // Brun: base on the second axis from 1/(x2-1) to 1/x2, apex at height 1/(x1+x2-1).
    const double x1 = 0.3 * rng.uniform_open(), x2 = x1 + (1 - 3 * x1) / 2 * rng.uniform_open();
    const double c = 1 / (x1 + x2 - 1);
    const double tri = shoelace(0, 1 / (x2 - 1), 0, 1 / x2, c, c);
    const Vec<double> pt{x1, x2, 1 - x1 - x2};
    CHECK(tri == doctest::Approx(DensityModel::named("brun-sorted").evaluate<double>(view(pt))).epsilon(1e-12));
  }
}

TEST_CASE("total masses") {
  CHECK(total_mass(DensityModel::named("farey"), MassMethod::kAuto, 1e-8).infinite);
  const struct {
    const char* model;
    double value;
  } cases[] = {{"reverse", kPi2 / 4},    {"cassaigne", kPi2 / 12},  {"brun", kPi2 / 4},
               {"brun-sorted", kPi2 / 24}, {"brun-sup", kPi2 / 24}};
  for (const auto& c : cases) {
    for (MassMethod m : {MassMethod::kReduced1d, MassMethod::kAdaptive2d}) {
      const auto r = total_mass(DensityModel::named(c.model), m, 1e-10);
      CAPTURE(c.model);
      CAPTURE(mass_method_name(m));
      CHECK(std::fabs(r.value - c.value) < 1e-9);
    }
    const auto mc = total_mass(DensityModel::named(c.model), MassMethod::kMonteCarlo, 1e-6, 3, 400000);
    CHECK(std::fabs(mc.value - c.value) < 4 * mc.error);
  }
  CHECK_THROWS_AS(total_mass(DensityModel::named("reverse"), MassMethod::kAuto, 0.0), DomainError);
  CHECK(parse_mass_method("adaptive-2d") == MassMethod::kAdaptive2d);
  CHECK_FALSE(parse_mass_method("simpson").has_value());
}

TEST_CASE("each ordering sector of the reverse density carries a sixth of the mass") {
  for (const auto& p : permutations(3)) {
    CHECK(std::fabs(sector_mass(DensityModel::named("reverse"), p, 1e-10) - kPi2 / 24) < 1e-9);
  }
}

TEST_CASE("dilogarithm") {
  CHECK(dilog(0.0) == 0.0);
  CHECK(std::fabs(dilog(1.0) - kPi2 / 6) < 1e-14);
  CHECK(std::fabs(dilog(-1.0) + kPi2 / 12) < 1e-14);
  CHECK(std::fabs(dilog(0.5) - (kPi2 / 12 - 0.5 * std::log(2.0) * std::log(2.0))) < 1e-15);
  for (double z : {-0.9, -1.0 / 3.0, 0.2, 1.0 / 3.0, 2.0 / 3.0, 0.9}) {
    CAPTURE(z);
    CHECK(std::fabs(dilog(z) - li2_series(z)) < 2e-13);
  }
  // Inversion identity for z < -1.
  for (double z : {-3.0, -10.0}) {
    const double oracle = -kPi2 / 6 - 0.5 * std::log(-z) * std::log(-z) - dilog(1 / z);
    CHECK(std::fabs(dilog(z) - oracle) < 1e-13);
  }
  CHECK_THROWS_AS(dilog(1.5), DomainError);
  CHECK(dilog_identity_check() < 1e-12);
}

TEST_CASE("one-dimensional quadrature with endpoint singularities") {
  const auto r = integrate_1d([](double x, double) { return std::log(x); }, 0.0, 1.0, 1e-12);
  CHECK(std::fabs(r.value + 1.0) < 1e-12);
  const auto s = integrate_1d([](double x, double) { return 1 / std::sqrt(x); }, 0.0, 4.0, 1e-12);
  CHECK(std::fabs(s.value - 4.0) < 1e-10);
}

TEST_CASE("triangle quadrature") {
  const Point3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
  CHECK(std::fabs(integrate_triangle([](const Point3&) { return 1.0; }, a, b, c, 1e-12).value - 0.5) < 1e-13);
  CHECK(std::fabs(integrate_triangle([](const Point3& p) { return p[0] * p[1]; }, a, b, c, 1e-12).value -
                  1.0 / 24) < 1e-13);
  // 1/r singularity at the collapse vertex.
  const double v =
      integrate_triangle([](const Point3& p) { return 1 / std::hypot(p[0], p[1]); }, a, b, c, 1e-12).value;
  CHECK(std::fabs(v - std::sqrt(2.0) * std::log(1 + std::sqrt(2.0))) < 1e-10);
  CHECK(twice_area(a, b, c) == 1.0);
  const auto half = clip_polygon({a, b, c}, Point3{-1, 1, 0});
  CHECK(integrate_polygon([](const Point3&) { return 1.0; }, half, 1e-12).value == doctest::Approx(0.25));
}

TEST_CASE("simplex grid") {
  const SimplexGrid g(4);
  CHECK(g.cells() == 16);
  double total = 0.0;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const auto v = g.vertices(c);
    const Point3 p0{v[0][0], v[0][1], 0}, p1{v[1][0], v[1][1], 0}, p2{v[2][0], v[2][1], 0};
    CHECK(std::fabs(twice_area(p0, p1, p2)) == doctest::Approx(1.0 / 16));
    total += std::fabs(twice_area(p0, p1, p2)) / 2;
    const Vec<double> centroid{(v[0][0] + v[1][0] + v[2][0]) / 3, (v[0][1] + v[1][1] + v[2][1]) / 3,
                               (v[0][2] + v[1][2] + v[2][2]) / 3};
    CHECK(g.locate(view(centroid)) == c);
  }
  CHECK(total == doctest::Approx(0.5));
  CHECK_THROWS_AS(SimplexGrid(0), DomainError);
  CHECK_THROWS_AS(g.vertices(16), DomainError);
}

TEST_CASE("expected cell masses sum to one and match direct quadrature") {
  const auto model = DensityModel::named("cassaigne");
  const SimplexGrid g(8);
  const auto m = expected_cell_mass(model, g, 4);
  CHECK(std::accumulate(m.begin(), m.end(), 0.0) == doctest::Approx(1.0));
  CHECK(m == expected_cell_mass(model, g, 1));
  for (double v : m) CHECK(v > 0.0);
}

TEST_CASE("histogram discrepancy shrinks with orbit length") {
  const Algorithm& alg = get_algorithm("cassaigne");
  const auto model = DensityModel::named("cassaigne");
  const auto small = empirical_density(alg, model, 100000, 16, 5);
  const auto large = empirical_density(alg, model, 1000000, 16, 5);
  CHECK(large.l1 * 2 < small.l1);
  CHECK(large.restarts == 0);
  const std::string csv = large.to_csv();
  CHECK(csv.rfind("cell-id,observed,expected,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 257);
}
