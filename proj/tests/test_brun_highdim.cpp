#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mcf/brun_highdim.hpp"
#include "mcf/density.hpp"
#include "mcf/errors.hpp"
#include "mcf/rng.hpp"

using namespace mcf;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

Vec<Rational> sorted_point(Rng& rng, std::size_t d) {
  while (true) {
    Vec<Rational> p = random_simplex_point_exact(rng, d);
    std::sort(p.begin(), p.end());
    if (std::adjacent_find(p.begin(), p.end()) == p.end()) return p;
  }
}

// Closed form by explicit enumeration of the chains {d-1} = A_1 < ... < A_{d-1}: every order
// in which the remaining indices 1..d-2 are added gives one chain.
Rational closed_form(const Vec<Rational>& x) {
  const std::size_t d = x.size();
  std::vector<std::size_t> order(d - 2);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rational sum(0);
  do {
    Rational in = x[d - 2];
    Rational prod = 1 / (1 - in);
    for (std::size_t k : order) {
      in += x[k];
      prod /= (1 - in);
    }
    sum += prod;
  } while (std::next_permutation(order.begin(), order.end()));
  Rational fact(1);
  for (std::size_t k = 2; k < d; ++k) fact *= static_cast<long>(k);
  return sum / (fact * x[d - 2]);
}

}  // namespace

TEST_CASE("low-dimensional closed forms") {
  const Vec<Rational> two{q(1, 3), q(2, 3)};
  CHECK(brun_density_d(view(two), 2) == q(9, 2));  // 1/(x1 (1 - x1))
  const Vec<Rational> three{q(1, 5), q(3, 10)};
  CHECK(brun_density_d(view(three), 3) == q(100, 21));
  // d = 4 two-term expression at (0.1, 0.2, 0.3).
  const Vec<Rational> four{q(1, 10), q(2, 10), q(3, 10)};
  const Rational x1 = q(1, 10), x2 = q(2, 10), x3 = q(3, 10);
  const Rational by_hand =
      (1 / ((1 - x3) * (1 - x1 - x3) * (1 - x1 - x2 - x3)) + 1 / ((1 - x3) * (1 - x2 - x3) * (1 - x1 - x2 - x3))) /
      (6 * x3);
  CHECK(brun_density_d(view(four), 4) == by_hand);
}

TEST_CASE("three-dimensional form agrees with the sorted Brun density") {
  Rng rng(41, 0);
  const auto model = DensityModel::named("brun-sorted");
  for (int i = 0; i < 1000; ++i) {
    Vec<double> x = random_simplex_point(rng, 3);
    std::sort(x.begin(), x.end());
    const double a = brun_density_d(view(x), 3), b = model.evaluate<double>(view(x));
    CHECK(std::fabs(a - b) < 1e-12 * b);
  }
}

TEST_CASE("recursive volume equals the closed form exactly") {
  Rng rng(42, 0);
  for (std::size_t d = 3; d <= 6; ++d) {
    for (int i = 0; i < 20; ++i) {
      const Vec<Rational> x = sorted_point(rng, d);
      const PolytopeSpec<Rational> spec{(1u << (d - 1)) - 1, d - 2, x};
      const Rational vol = polytope_volume_recursive(spec);
      CHECK(vol == closed_form(x));
      CHECK(vol == brun_density_d(view(x), d));
    }
  }
}

TEST_CASE("two-element index set reproduces the Brun triangle") {
  Rng rng(43, 0);
  for (int i = 0; i < 50; ++i) {
    const Vec<Rational> x = sorted_point(rng, 3);
    const Rational vol = polytope_volume_recursive(PolytopeSpec<Rational>{0b011, 1, x});
    CHECK(vol == 1 / (2 * x[1] * (1 - x[1]) * (1 - x[0] - x[1])));
  }
}

TEST_CASE("base case interval and the Monte-Carlo oracle") {
  const Vec<double> w{0.2, 0.3, 0.5};
  const PolytopeSpec<double> one{0b010, 1, w};
  // -1/(1-x_l) < beta_l < 1/x_l
  CHECK(polytope_volume_recursive(one) == doctest::Approx(1 / 0.7 + 1 / 0.3));
  const auto est1 = polytope_volume_oracle(one, 200000, 1);
  CHECK(std::fabs(est1.estimate - polytope_volume_recursive(one)) < 3 * est1.stderr_ + 1e-12);

  for (const auto& spec : {PolytopeSpec<double>{0b011, 1, w}, PolytopeSpec<double>{0b101, 2, w},
                           PolytopeSpec<double>{0b0111, 2, {0.25, 0.25, 0.25, 0.25}},
                           PolytopeSpec<double>{0b0111, 1, {0.1, 0.2, 0.3, 0.4}}}) {
    const double exact = polytope_volume_recursive(spec);
    const auto est = polytope_volume_oracle(spec, 1000000, 7);
    CHECK(std::fabs(est.estimate - exact) < 3 * est.stderr_);
  }
}

TEST_CASE("polytope errors") {
  CHECK_THROWS_AS(polytope_volume_recursive(PolytopeSpec<Rational>{0b111, 2, {q(1, 3), q(1, 3), q(1, 3)}}),
                  DomainError);
  CHECK_THROWS_AS(polytope_volume_recursive(PolytopeSpec<Rational>{0b011, 2, {q(1, 3), q(1, 3), q(1, 3)}}),
                  DomainError);
  CHECK_THROWS_AS(polytope_volume_recursive(PolytopeSpec<Rational>{0b011, 1, {q(1, 3), q(1, 3), q(1, 2)}}),
                  DomainError);
  CHECK_THROWS_AS(brun_density_d(view(Vec<Rational>{q(1, 2), q(1, 4), q(1, 4)}), 3), DomainError);
  CHECK_THROWS_AS(brun_density_d(view(Vec<Rational>{q(1, 4), q(1, 4), q(1, 2)}), 3), DomainError);
  CHECK_THROWS_AS(brun_density_d(view(Vec<Rational>{q(1, 4), q(3, 4)}), 9), DomainError);
  // Full index set: the box is empty, the oracle reports zero.
  const auto e = polytope_volume_oracle(PolytopeSpec<double>{0b111, 2, {0.2, 0.3, 0.5}}, 1000, 1);
  CHECK(e.estimate == 0.0);
}
