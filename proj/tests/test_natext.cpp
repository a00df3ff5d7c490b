#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mcf/algorithms.hpp"
#include "mcf/errors.hpp"
#include "mcf/natext.hpp"
#include "mcf/rng.hpp"

using namespace mcf;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

template <class... Args>
ConeVector<Rational> cv(Args... a) {
  return ConeVector<Rational>{Rational(a)...};
}

NatExtState<Rational> st(ConeVector<Rational> x, ConeVector<Rational> a) { return {std::move(x), std::move(a)}; }

Vec<Rational> rv(std::initializer_list<long> v) {
  Vec<Rational> out;
  for (long c : v) out.push_back(Rational(c));
  return out;
}

}  // namespace

TEST_CASE("natural extension step examples") {
  const auto f = natext_step(get_algorithm("farey"), st(cv(2, 5), cv(1, 1)));
  CHECK(f.state == st(cv(2, 3), cv(2, 1)));

  const auto r = natext_step(get_algorithm("reverse"), st(cv(2, 3, 4), cv(2, 2, 2)));
  CHECK(get_algorithm("reverse").branch(r.branch).label == "4");
  CHECK(r.state == st(cv(5, 3, 1), cv(2, 2, 2)));

  const auto b = natext_step(get_algorithm("brun"), st(cv(1, 2, 3), cv(1, 3, 2)));
  CHECK(get_algorithm("brun").branch(b.branch).label == "123");
  CHECK(b.state == st(cv(1, 2, 1), cv(1, 5, 2)));
}

TEST_CASE("natural extension inverse examples") {
  const Algorithm& brun = get_algorithm("brun");
  CHECK(natext_inverse(brun, brun.branch_index("123"), st(cv(1, 2, 1), cv(1, 5, 2))) == st(cv(1, 2, 3), cv(1, 3, 2)));
  const Algorithm& farey = get_algorithm("farey");
  const std::size_t k = natext_step(farey, st(cv(2, 5), cv(1, 1))).branch;
  CHECK(natext_inverse(farey, k, st(cv(2, 3), cv(2, 1))) == st(cv(2, 5), cv(1, 1)));
  // a = (1, 1) has no preimage with a positive dual vector under this branch.
  CHECK_THROWS_AS(natext_inverse(farey, k, st(cv(2, 3), cv(1, 1))), DomainError);
}

TEST_CASE("exact round trips and pairing conservation") {
  Rng rng(21, 0);
  for (const std::string n : {"farey", "reverse", "cassaigne", "brun", "brun d=4", "arp", "selmer"}) {
    const Algorithm& alg = get_algorithm(n);
    CAPTURE(n);
    for (int i = 0; i < (n == "brun d=4" ? 500 : 10000); ++i) {
      const NatExtState<Rational> s{ConeVector<Rational>(random_simplex_point_exact(rng, alg.dim())),
                                    ConeVector<Rational>(random_simplex_point_exact(rng, alg.dim()))};
      const auto step = natext_step(alg, s);
      CHECK(step.state.e() == s.e());
      CHECK(natext_inverse(alg, step.branch, step.state) == s);
    }
  }
}

TEST_CASE("float pairing is conserved to relative 1e-14 per step") {
  Rng rng(22, 0);
  const Algorithm& alg = get_algorithm("cassaigne");
  NatExtState<double> s{ConeVector<double>(random_simplex_point(rng, 3)), ConeVector<double>(random_simplex_point(rng, 3))};
  for (int i = 0; i < 1000; ++i) {
    const auto n = natext_step(alg, s);
    CHECK(std::fabs(n.state.e() - s.e()) <= 1e-14 * s.e());
    s = natext_step_renormalized(alg, s).state;
    CHECK(std::fabs(s.e() - 1.0) < 1e-14);
    CHECK(std::fabs(l1_norm(s.x().coords()) - 1.0) < 1e-15);
  }
}

TEST_CASE("section coordinates") {
  const auto p = to_section(st(cv(q(1, 3), q(2, 3)), cv(2, 1)));
  CHECK(p.y == Vec<Rational>{q(1, 3)});
  CHECK(p.b == Vec<Rational>{q(1)});
  CHECK(p.norm == q(1));
  CHECK(p.tau() == 0.0);
  CHECK(p.e == q(4, 3));

  Rng rng(23, 0);
  for (int i = 0; i < 1000; ++i) {
    const NatExtState<Rational> s{ConeVector<Rational>(random_simplex_point_exact(rng, 4)),
                                  ConeVector<Rational>(random_simplex_point_exact(rng, 4))};
    CHECK(from_section(to_section(s)) == s);
  }

  // tau never decreases along an orbit of unnormalized steps (branch 4 of reverse keeps the norm).
  NatExtState<double> s{ConeVector<double>{0.31, 0.27, 0.42}, ConeVector<double>{1.0, 1.0, 1.0}};
  const double tau0 = to_section(s).tau();
  double tau = tau0;
  for (int i = 0; i < 30; ++i) {
    s = natext_step(get_algorithm("reverse"), s).state;
    const double t = to_section(s).tau();
    CHECK(t >= tau);
    tau = t;
  }
  CHECK(tau > tau0);
}

TEST_CASE("dual membership examples") {
  const Algorithm& rev = get_algorithm("reverse");
  const auto m = dual_membership<Rational>(rev, view(rv({3, 3, 1})));
  CHECK(m.in_dual);
  REQUIRE(m.piece.has_value());
  CHECK(rev.branch(*m.piece).label == "3");
  CHECK_FALSE(dual_membership<Rational>(rev, view(rv({1, 1, 5}))).in_dual);

  const Algorithm& cas = get_algorithm("cassaigne");
  CHECK_THROWS_AS(dual_membership<Rational>(cas, view(rv({1, 2, 1}))), BoundaryError);
  CHECK_THROWS_AS(dual_membership<Rational>(cas, view(rv({2, 3, 2}))), BoundaryError);
  const auto c = dual_membership<Rational>(cas, view(rv({3, 5, 4})));
  CHECK(c.in_dual);
  CHECK(cas.branch(*c.piece).label == "a");

  CHECK_THROWS_AS(dual_membership<Rational>(get_algorithm("arp"), view(rv({1, 1, 1}))), UnsupportedError);
  CHECK_THROWS_AS(dual_membership<Rational>(get_algorithm("selmer"), view(rv({1, 1, 1}))), UnsupportedError);
}

TEST_CASE("absorption examples") {
  const Algorithm& rev = get_algorithm("reverse");
  // x in the branch-4 cone: absorbed after that one step whatever a is.
  const NatExtState<double> s0{ConeVector<double>{0.3, 0.33, 0.37}, ConeVector<double>{0.9, 0.05, 0.05}};
  CHECK_FALSE(in_natext_domain<double>(rev, s0.x().coords(), s0.a().coords()));
  CHECK(absorption_time(rev, s0, 10) == std::optional<std::size_t>(1));

  // a already in the dual cone stays there after a branch-1 step.
  const NatExtState<Rational> s{cv(7, 2, 1), cv(6, 6, 5)};
  CHECK(dual_membership<Rational>(rev, s.a().coords()).in_dual);
  const auto n = natext_step(rev, s);
  CHECK(rev.branch(n.branch).label == "1");
  CHECK(dual_membership<Rational>(rev, n.state.a().coords()).in_dual);

  Rng rng(24, 0);
  for (const std::string name : {"reverse", "cassaigne"}) {
    const Algorithm& alg = get_algorithm(name);
    std::size_t absorbed = 0;
    for (int i = 0; i < 200; ++i) {
      const NatExtState<double> st0{ConeVector<double>(random_simplex_point(rng, 3)),
                                    ConeVector<double>(random_simplex_point(rng, 3))};
      absorbed += absorption_time(alg, st0, 1000).has_value();
    }
    CHECK(absorbed == 200);
  }
}

TEST_CASE("dual cone is invariant once entered") {
  Rng rng(25, 0);
  for (const std::string name : {"reverse", "cassaigne", "brun"}) {
    const Algorithm& alg = get_algorithm(name);
    CAPTURE(name);
    std::size_t left = 0, steps = 0;
    for (int orbit = 0; orbit < 10; ++orbit) {
      NatExtState<double> s{ConeVector<double>(random_simplex_point(rng, 3)),
                            ConeVector<double>(random_simplex_point(rng, 3))};
      const auto t = absorption_time(alg, s, 1000);
      REQUIRE(t.has_value());
      for (std::size_t k = 0; k < *t; ++k) s = natext_step_renormalized(alg, s).state;
      for (int k = 0; k < 10000; ++k) {
        s = natext_step_renormalized(alg, s).state;
        left += !in_natext_domain<double>(alg, s.x().coords(), s.a().coords());
        ++steps;
      }
    }
    CHECK(steps == 100000);
    CHECK(left == 0);
  }
}

TEST_CASE("farey pieces exchange") {
  const Algorithm& farey = get_algorithm("farey");
  Rng rng(26, 0);
  for (int i = 0; i < 2000; ++i) {
    const NatExtState<Rational> s{ConeVector<Rational>(random_simplex_point_exact(rng, 2)),
                                  ConeVector<Rational>(random_simplex_point_exact(rng, 2))};
    if (s.x()[0] == s.x()[1]) continue;
    const auto n = natext_step(farey, s);
    const auto& dual = *farey.dual();
    CHECK(dual.target[n.branch].contains(n.state.a().coords()));
    CHECK_FALSE(dual.target[1 - n.branch].contains(n.state.a().coords()));
  }
}

TEST_CASE("bijectivity audits report no violations") {
  for (const std::string n : {"farey", "reverse", "cassaigne", "brun", "brun d=2", "brun d=4"}) {
    const AuditReport rep = bijectivity_audit(get_algorithm(n), 300, 3, 4);
    CAPTURE(n);
    CHECK(rep.total_violations() == 0);
    CHECK(rep.to_csv().rfind("piece,check,samples,violations\n", 0) == 0);
  }
  CHECK_THROWS_AS(bijectivity_audit(get_algorithm("arp"), 10, 1), UnsupportedError);
}

TEST_CASE("audit output does not depend on the worker count") {
  const AuditReport a = bijectivity_audit(get_algorithm("reverse"), 200, 9, 1);
  const AuditReport b = bijectivity_audit(get_algorithm("reverse"), 200, 9, 8);
  CHECK(a.to_csv() == b.to_csv());
}
