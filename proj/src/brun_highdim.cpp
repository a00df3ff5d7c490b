#include "mcf/brun_highdim.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/rng.hpp"

namespace mcf {

namespace {

// Full coordinate vector, sorted check included.
template <Scalar T>
Vec<T> full_sorted_point(std::span<const T> x, std::size_t d) {
  if (d < 2 || d > 8) throw DomainError("brun density: d must be in 2..8");
  Vec<T> p(x.begin(), x.end());
  if (p.size() == d - 1) {
    T rest(1);
    for (const T& c : p) rest -= c;
    p.push_back(rest);
  } else if (p.size() != d) {
    throw DomainError("brun density: expected d or d-1 coordinates");
  }
  for (std::size_t i = 0; i < d; ++i) {
    require_finite(p[i], "brun density");
    if (!(p[i] > 0)) throw DomainError("brun density: point not interior");
    if (i + 1 < d && !(p[i] < p[i + 1])) throw DomainError("brun density: point not strictly sorted");
  }
  return p;
}

}  // namespace

template <Scalar T>
T brun_chain_sum(std::span<const T> x, std::size_t d) {
  const Vec<T> p = full_sorted_point(x, d);
  // f(S) sums over chains from {d-1} to {d-1} u S, S a subset of {1..d-2} (zero-based 0..d-3).
  // 1 - sum_{A} x is evaluated as the sum of the complementary coordinates.
  const std::size_t m = d - 2;
  const std::uint32_t full = (1u << m) - 1;
  std::vector<T> f(std::size_t{1} << m, T(0));
  auto complement_sum = [&](std::uint32_t s) {
    T acc = p[d - 1];
    for (std::size_t i = 0; i < m; ++i)
      if (!(s >> i & 1u)) acc += p[i];
    return acc;
  };
  f[0] = T(1) / complement_sum(0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    T acc(0);
    for (std::size_t j = 0; j < m; ++j)
      if (s >> j & 1u) acc += f[s & ~(1u << j)];
    f[s] = acc / complement_sum(s);
  }
  return f[full];
}

template <Scalar T>
T brun_density_d(std::span<const T> x, std::size_t d) {
  const T chains = brun_chain_sum(x, d);
  const Vec<T> p = full_sorted_point(x, d);
  T fact(1);
  for (std::size_t k = 2; k < d; ++k) fact *= T(static_cast<long>(k));
  return chains / (fact * p[d - 2]);
}

template <Scalar T>
void PolytopeSpec<T>::validate() const {
  const std::size_t d = weights.size();
  if (d < 1 || d > 31) throw DomainError("polytope: bad dimension");
  if (index_set == 0 || (index_set >> d) != 0) throw DomainError("polytope: bad index set");
  if (pivot >= d || !(index_set >> pivot & 1u)) throw DomainError("polytope: pivot not in I");
  T sum(0);
  for (const T& w : weights) {
    require_finite(w, "polytope weight");
    if (!(w > 0)) throw DomainError("polytope: weights must be positive");
    sum += w;
  }
  if constexpr (std::same_as<T, Rational>) {
    if (sum != 1) throw DomainError("polytope: weights must sum to 1");
  } else {
    if (std::fabs(sum - 1.0) > 1e-12 * static_cast<double>(d))
      throw DomainError("polytope: weights must sum to 1");
  }
}

template <Scalar T>
T polytope_volume_recursive(const PolytopeSpec<T>& p) {
  p.validate();
  const std::size_t d = p.weights.size();
  const std::uint32_t top = p.index_set;
  const std::uint32_t pivot_bit = 1u << p.pivot;
  // 1 - sum_I x as the sum over the complement of I.
  auto rest = [&](std::uint32_t s) {
    T acc(0);
    for (std::size_t i = 0; i < d; ++i)
      if (!(s >> i & 1u)) acc += p.weights[i];
    return acc;
  };
  if (!(rest(top) > 0)) throw DomainError("polytope: sum of weights over I must be < 1");

  // Memo over subsets of I that contain the pivot, indexed by the raw mask.
  if (d > 20) throw DomainError("polytope: dimension too large");
  std::vector<T> memo(std::size_t{1} << d, T(0));
  std::vector<char> known(std::size_t{1} << d, 0);
  auto vol = [&](auto&& self, std::uint32_t s) -> T {
    if (known[s]) return memo[s];
    T v;
    if (s == pivot_bit) {
      const T& xl = p.weights[p.pivot];
      v = T(1) / (xl * rest(s));
    } else {
      T acc(0);
      for (std::size_t k = 0; k < d; ++k) {
        const std::uint32_t bit = 1u << k;
        if ((s & bit) && bit != pivot_bit) acc += self(self, s & ~bit);
      }
      v = acc / (T(static_cast<long>(std::popcount(s))) * rest(s));
    }
    known[s] = 1;
    memo[s] = v;
    return v;
  };
  return vol(vol, top);
}

VolumeEstimate polytope_volume_oracle(const PolytopeSpec<double>& p, std::size_t n_samples,
                                      std::uint64_t seed) {
  p.validate();
  const std::size_t d = p.weights.size();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d; ++i)
    if (p.index_set >> i & 1u) idx.push_back(i);
  if (idx.size() > 6) throw DomainError("polytope oracle: |I| must be <= 6");

  double big_x = 0.0;
  for (auto i : idx) big_x += p.weights[i];
  VolumeEstimate out{0.0, 0.0, n_samples, 0};
  if (!(big_x < 1.0) || n_samples == 0) return out;
  const double c = 1.0 / (1.0 - big_x);
  const double xl = p.weights[p.pivot];
  std::vector<double> lo(idx.size()), hi(idx.size());
  double box = 1.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    lo[k] = -c;
    hi[k] = idx[k] == p.pivot ? (1.0 + c * (big_x - xl)) / xl : 0.0;
    if (!(hi[k] > lo[k])) return out;
    box *= hi[k] - lo[k];
  }

  Rng rng(seed, 0);
  std::vector<double> beta(idx.size());
  for (std::size_t s = 0; s < n_samples; ++s) {
    double dot = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      beta[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
      dot += beta[k] * p.weights[idx[k]];
    }
    bool ok = dot < 1.0;
    for (std::size_t k = 0; ok && k < idx.size(); ++k) {
      if (idx[k] != p.pivot && !(beta[k] < 0.0)) ok = false;
      if (!(dot - beta[k] < 1.0)) ok = false;
    }
    out.hits += ok;
  }
  const double frac = static_cast<double>(out.hits) / static_cast<double>(n_samples);
  out.estimate = box * frac;
  out.stderr_ = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_samples));
  return out;
}

template double brun_density_d(std::span<const double>, std::size_t);
template Rational brun_density_d(std::span<const Rational>, std::size_t);
template double brun_chain_sum(std::span<const double>, std::size_t);
template Rational brun_chain_sum(std::span<const Rational>, std::size_t);
template struct PolytopeSpec<double>;
template struct PolytopeSpec<Rational>;
template double polytope_volume_recursive(const PolytopeSpec<double>&);
template Rational polytope_volume_recursive(const PolytopeSpec<Rational>&);

}  // namespace mcf
