#include "mcf/rng.hpp"

#include <cmath>

#include "mcf/errors.hpp"

namespace mcf {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6d636621u};
  engine_.seed(seq);
}

double Rng::uniform_open() {
  for (;;) {
    double u = uniform();
    if (u > 0.0) return u;
  }
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw DomainError("Rng::below with n = 0");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t r = next();
    if (r < limit) return r % n;
  }
}

double Rng::exponential() { return -std::log(uniform_open()); }

Vec<double> random_simplex_point(Rng& rng, std::size_t d) {
  Vec<double> p(d);
  double sum = 0.0;
  for (auto& c : p) {
    c = rng.exponential();
    sum += c;
  }
  for (auto& c : p) c /= sum;
  return p;
}

Vec<Rational> random_simplex_point_exact(Rng& rng, std::size_t d) {
  Vec<Rational> p(d);
  Rational sum(0);
  for (auto& c : p) {
    c = Rational(static_cast<long>(1 + rng.below(1u << 30)));
    sum += c;
  }
  for (auto& c : p) c /= sum;
  return p;
}

}  // namespace mcf
