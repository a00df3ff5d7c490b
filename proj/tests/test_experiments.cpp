#include <doctest.h>

#include <cmath>
#include <set>

#include "mcf/errors.hpp"
#include "mcf/experiments.hpp"
#include "mcf/rng.hpp"

using namespace mcf;

namespace {

NatExtState<double> state(Vec<double> x, Vec<double> a) {
  return NatExtState<double>{ConeVector<double>(std::move(x)), ConeVector<double>(std::move(a))};
}

bool in_reverse_triangle(const Vec<double>& a) {
  const double s = a[0] + a[1] + a[2];
  for (double v : a)
    if (2 * v >= s) return false;
  return true;
}

}  // namespace

TEST_CASE("barycentric embedding") {
  const double h = std::sqrt(3.0) / 2;
  const auto c = simplex_embed(view(Vec<double>{1, 1, 1}));
  CHECK(c[0] == doctest::Approx(0.0));
  CHECK(c[1] == doctest::Approx(0.0));
  const auto v1 = simplex_embed(view(Vec<double>{1, 0, 0}));
  CHECK(v1[0] == doctest::Approx(0.0));
  CHECK(v1[1] == doctest::Approx(1.0));
  const auto v2 = simplex_embed(view(Vec<double>{0, 2, 0}));
  CHECK(v2[0] == doctest::Approx(-h));
  CHECK(v2[1] == doctest::Approx(-0.5));
  const auto m = simplex_embed(view(Vec<double>{0, 1, 1}));
  CHECK(m[0] == doctest::Approx(0.0));
  CHECK(m[1] == doctest::Approx(-0.5));
  CHECK_THROWS_AS(simplex_embed(view(Vec<double>{0.5, 0.5})), UnsupportedError);
  const auto d = difference_coords(view(Vec<double>{0.5, 0.3, 0.2}));
  CHECK(d[0] == doctest::Approx(0.3));
  CHECK(d[1] == doctest::Approx(0.1));
}

TEST_CASE("orbit samples") {
  const Algorithm& alg = get_algorithm("reverse");
  const auto zero = orbit_cloud(alg, state({0.2, 0.33, 0.47}, {1, 1, 1}), 0, 1);
  REQUIRE(zero.samples.size() == 1);
  CHECK(zero.samples[0].n == 0);
  CHECK(zero.samples[0].x[2] == doctest::Approx(0.47));
  CHECK(zero.samples[0].a[0] == doctest::Approx(1.0 / 3));

  const auto one = orbit_cloud(alg, state({0.2, 0.33, 0.47}, {1, 1, 1}), 1000, 7);
  const auto two = orbit_cloud(alg, state({0.2, 0.33, 0.47}, {1, 1, 1}), 1000, 7);
  REQUIRE(one.samples.size() == two.samples.size());
  for (std::size_t i = 0; i < one.samples.size(); ++i) {
    CHECK(one.samples[i].branch == two.samples[i].branch);
    CHECK(one.samples[i].x == two.samples[i].x);
    CHECK(one.samples[i].a == two.samples[i].a);
  }
  for (const auto& s : one.samples) {
    double sx = 0, sa = 0;
    for (double v : s.x) sx += v;
    for (double v : s.a) sa += v;
    CHECK(sx == doctest::Approx(1.0));
    CHECK(sa == doctest::Approx(1.0));
  }
  CHECK(orbit_csv_header(3) == "n,branch,x1,x2,x3,a1,a2,a3\n");
  const std::string row = orbit_csv_row(alg, one.samples[0]);
  CHECK(row.rfind("0,", 0) == 0);
}

TEST_CASE("reverse dual points enter the central triangle and stay") {
  const Algorithm& alg = get_algorithm("reverse");
  Rng rng(51, 0);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_simplex_point(rng, 3);
    const auto a = random_simplex_point(rng, 3);
    const auto cloud = orbit_cloud(alg, state(x, a), 3000, t);
    std::size_t first = cloud.samples.size();
    for (std::size_t i = 0; i < cloud.samples.size(); ++i)
      if (in_reverse_triangle(cloud.samples[i].a)) {
        first = i;
        break;
      }
    REQUIRE(first < 1000);
    for (std::size_t i = first; i < cloud.samples.size(); ++i) CHECK(in_reverse_triangle(cloud.samples[i].a));
  }
}

TEST_CASE("raster grid") {
  RasterGrid g(Window{-1, 1, -1, 1}, 4, 4);
  CHECK(g.occupied() == 0);
  CHECK(g.pixel_of({0.9, 0.9}) == std::optional<std::size_t>(3));
  CHECK(g.pixel_of({-0.9, -0.9}) == std::optional<std::size_t>(12));
  CHECK_FALSE(g.pixel_of({1.0, 0.0}).has_value());
  const auto c = g.pixel_center(0, 0);
  CHECK(c[0] == doctest::Approx(-0.75));
  CHECK(c[1] == doctest::Approx(0.75));
  CHECK(g.plot({0.1, 0.1}, 2, 1));
  CHECK(g.plot({0.1, 0.1}, 3, 0));
  CHECK(g.branch_at(*g.pixel_of({0.1, 0.1})) == 2);
  CHECK(g.hits_at(*g.pixel_of({0.1, 0.1})) == 2);
  CHECK_FALSE(g.plot({5, 5}, 1));
  CHECK(g.occupancy() == doctest::Approx(1.0 / 16));
  CHECK_THROWS_AS(RasterGrid(Window{1, -1, 0, 1}, 4, 4), DomainError);
}

TEST_CASE("panels") {
  const Algorithm& alg = get_algorithm("reverse");
  const auto empty = render_panels(alg, {}, PanelOptions{});
  for (const auto& p : empty) CHECK(p.occupied() == 0);

  const auto cloud = orbit_cloud(alg, state({0.2, 0.33, 0.47}, {0.6, 0.3, 0.1}), 20000, 3);
  PanelOptions o;
  o.width = o.height = 128;
  const auto panels = render_panels(alg, cloud.samples, o);
  CHECK(panels[0].occupied() > 0);
  // Past absorption the a-panel lies in the central triangle, whose embedding has |y| <= 1/2.
  const auto& an = panels[3];
  std::size_t outside = 0;
  for (std::size_t r = 0; r < an.height(); ++r)
    for (std::size_t c = 0; c < an.width(); ++c)
      if (an.branch_at(r * an.width() + c) >= 0 && an.pixel_center(c, r)[1] > 0.5 + 2.0 / 128) ++outside;
  CHECK(outside <= 4);
}

TEST_CASE("fractal rendering") {
  const Algorithm& arp = get_algorithm("arp");
  FractalOptions o;
  o.steps = 100000;
  o.width = o.height = 256;
  const auto one = render_fractal(arp, o);
  const auto two = render_fractal(arp, o);
  CHECK(encode_p6(one.image) == encode_p6(two.image));
  CHECK(one.image.occupancy() > 0.0);
  CHECK(one.image.occupancy() < 1.0);
  std::set<int> colours;
  for (std::size_t i = 0; i < 256 * 256; ++i) colours.insert(one.image.branch_at(i));
  CHECK(colours.size() > 2);

  FractalOptions miss = o;
  miss.window = Window{5, 6, 5, 6};
  const auto m = render_fractal(arp, miss);
  CHECK(m.image.occupied() == 0);
  CHECK_FALSE(m.warnings.empty());

  // Reverse: the a-points fill the central triangle.
  FractalOptions r;
  r.steps = 400000;
  r.width = r.height = 128;
  r.window = Window{-1, 1, -1, 1};
  r.order = DrawOrder::kLastWriter;
  const auto rev = render_fractal(get_algorithm("reverse"), r);
  std::size_t inside = 0, filled = 0;
  for (std::size_t row = 0; row < 128; ++row)
    for (std::size_t col = 0; col < 128; ++col) {
      const auto p = rev.image.pixel_center(col, row);
      // central triangle: vertices at the edge midpoints (0,-1/2), (+-sqrt3/4, 1/4)
      const double s3 = std::sqrt(3.0);
      const bool in = p[1] > -0.5 + 0.03 && p[1] < 0.25 - 0.03 && std::fabs(p[0]) < (p[1] + 0.5) / s3 - 0.03;
      if (!in) continue;
      ++inside;
      if (rev.image.branch_at(row * 128 + col) >= 0) ++filled;
    }
  REQUIRE(inside > 100);
  CHECK(static_cast<double>(filled) / inside > 0.99);
}

TEST_CASE("symmetry probe") {
  RasterGrid full(Window{-1, 1, -1, 1}, 64, 64);
  for (std::size_t i = 0; i < 64 * 64; ++i) full.set(i, 0);
  CHECK(symmetry_probe(full).jaccard == doctest::Approx(1.0));

  // Independent noise at density q: expected Jaccard q/(2-q).
  RasterGrid noise(Window{-1, 1, -1, 1}, 256, 256);
  Rng rng(52, 0);
  const double q = 0.3;
  for (std::size_t i = 0; i < 256 * 256; ++i)
    if (rng.uniform() < q) noise.set(i, 0);
  CHECK(symmetry_probe(noise).jaccard == doctest::Approx(q / (2 - q)).epsilon(0.05));

  CHECK_THROWS_AS(symmetry_probe(RasterGrid(Window{-1, 1, -1, 1}, 32, 16)), UnsupportedError);
  CHECK_THROWS_AS(symmetry_probe(RasterGrid(Window{0, 1, 0, 1}, 32, 32)), DomainError);

  const auto map = cyclic_branch_map(get_algorithm("arp"));
  CHECK(map.size() == get_algorithm("arp").branches().size());
  std::set<int> image(map.begin(), map.end());
  CHECK(image.size() == map.size());
}

TEST_CASE("image encoding and hashing") {
  RasterGrid g(Window{-1, 1, -1, 1}, 5, 3);
  g.set(0, 0);
  g.set(7, 4);
  g.set(14, 11);
  const std::string bytes = encode_p6(g);
  CHECK(bytes.rfind("P6\n5 3\n255\n", 0) == 0);
  CHECK(bytes.size() == 11 + 5 * 3 * 3);
  const auto back = decode_p6(bytes, g.window());
  for (std::size_t i = 0; i < 15; ++i) CHECK(back.branch_at(i) == g.branch_at(i));
  CHECK_THROWS(decode_p6("P5\n1 1\n255\n\0", g.window()));

  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}
