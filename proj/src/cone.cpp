#include "mcf/cone.hpp"

#include <algorithm>

#include "mcf/errors.hpp"

namespace mcf {

LinearCone::LinearCone(std::size_t dim, std::vector<Vec<long>> rows)
    : dim_(dim), rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (r.size() != dim_) throw DomainError("cone row has wrong dimension");
  }
}

template <Scalar T>
ConeStatus LinearCone::status(std::span<const T> x) const {
  if (x.size() != dim_) throw DomainError("cone membership dimension mismatch");
  bool on_boundary = false;
  for (const auto& r : rows_) {
    T acc(0);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (r[i] == 1) acc += x[i];
      else if (r[i] == -1) acc -= x[i];
      else if (r[i] != 0) acc += T(r[i]) * x[i];
    }
    const int s = sign_of(acc);
    if (s < 0) return ConeStatus::kOutside;
    if (s == 0) on_boundary = true;
  }
  return on_boundary ? ConeStatus::kBoundary : ConeStatus::kInside;
}

template ConeStatus LinearCone::status(std::span<const double>) const;
template ConeStatus LinearCone::status(std::span<const Rational>) const;

LinearCone LinearCone::intersect(const LinearCone& other) const {
  if (other.dim_ != dim_) throw DomainError("cone dimension mismatch");
  auto rows = rows_;
  rows.insert(rows.end(), other.rows_.begin(), other.rows_.end());
  return LinearCone(dim_, std::move(rows));
}

namespace {

// One-dimensional kernel of a (d-1) x d system, or empty when the rank is lower.
Vec<Rational> kernel_direction(std::vector<Vec<Rational>> m, std::size_t d) {
  const std::size_t rows = m.size();
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < d && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t k = 0; k < d; ++k) m[r][k] *= inv;
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == r || sgn(m[q][c]) == 0) continue;
      Rational f = m[q][c];
      for (std::size_t k = 0; k < d; ++k) m[q][k] -= f * m[r][k];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  if (pivot_cols.size() + 1 != d) return {};
  std::size_t free_col = 0;
  while (std::find(pivot_cols.begin(), pivot_cols.end(), free_col) != pivot_cols.end()) ++free_col;
  Vec<Rational> v(d, Rational(0));
  v[free_col] = 1;
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -m[i][free_col];
  return v;
}

bool feasible(const std::vector<Vec<Rational>>& constraints, const Vec<Rational>& v) {
  for (const auto& c : constraints) {
    Rational acc(0);
    for (std::size_t i = 0; i < v.size(); ++i) acc += c[i] * v[i];
    if (sgn(acc) < 0) return false;
  }
  return true;
}

}  // namespace

Vec<Rational> normalized_ray(std::span<const Rational> v) {
  Rational sum(0);
  for (const auto& c : v) sum += c;
  if (sgn(sum) <= 0) throw DomainError("ray is not in the nonnegative orthant");
  Vec<Rational> out(v.begin(), v.end());
  for (auto& c : out) c /= sum;
  return out;
}

std::vector<Vec<Rational>> LinearCone::extreme_rays() const {
  const std::size_t d = dim_;
  std::vector<Vec<Rational>> constraints;
  for (const auto& r : rows_) {
    Vec<Rational> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = Rational(r[i]);
    constraints.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < d; ++i) {
    Vec<Rational> c(d, Rational(0));
    c[i] = 1;
    constraints.push_back(std::move(c));
  }
  const std::size_t m = constraints.size();
  std::vector<Vec<Rational>> rays;
  if (d < 2 || m < d - 1) return rays;

  // Enumerate (d-1)-subsets of the constraints; each full-rank subset defines a line, and
  // a feasible direction on it is an extreme ray of the pointed cone.
  std::vector<std::size_t> idx(d - 1);
  for (std::size_t i = 0; i < d - 1; ++i) idx[i] = i;
  for (;;) {
    std::vector<Vec<Rational>> sub;
    for (auto i : idx) sub.push_back(constraints[i]);
    Vec<Rational> v = kernel_direction(std::move(sub), d);
    if (!v.empty()) {
      for (int flip = 0; flip < 2; ++flip) {
        if (feasible(constraints, v)) {
          Vec<Rational> n = normalized_ray(std::span<const Rational>(v.data(), v.size()));
          if (std::find(rays.begin(), rays.end(), n) == rays.end()) rays.push_back(std::move(n));
          break;
        }
        for (auto& c : v) c = -c;
      }
    }
    // next combination
    std::size_t k = d - 1;
    while (k > 0 && idx[k - 1] == m - (d - 1) + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < d - 1; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(rays.begin(), rays.end(), [](const Vec<Rational>& a, const Vec<Rational>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return rays;
}

std::string LinearCone::describe() const {
  std::string out = "{x>0";
  for (const auto& r : rows_) {
    out += "; ";
    bool first = true;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (r[i] == 0) continue;
      if (!first || r[i] < 0) out += r[i] < 0 ? "-" : "+";
      long a = r[i] < 0 ? -r[i] : r[i];
      if (a != 1) out += std::to_string(a);
      out += "x" + std::to_string(i + 1);
      first = false;
    }
    out += ">0";
  }
  return out + "}";
}

Vec<Rational> random_interior_point(std::span<const Vec<Rational>> rays, Rng& rng) {
  if (rays.empty()) throw DomainError("cannot sample a cone without rays");
  const std::size_t d = rays.front().size();
  Vec<Rational> p(d, Rational(0));
  for (const auto& r : rays) {
    // Heavy-tailed positive weights so samples also approach the facets.
    const double u = rng.uniform();
    const long w = 1 + static_cast<long>(static_cast<double>(1L << 30) * u * u * u * u);
    for (std::size_t i = 0; i < d; ++i) p[i] += w * r[i];
  }
  return p;
}

Vec<Rational> central_point(std::span<const Vec<Rational>> rays) {
  if (rays.empty()) throw DomainError("cone has no rays");
  Vec<Rational> p(rays.front().size(), Rational(0));
  for (const auto& r : rays)
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += r[i];
  return p;
}

}  // namespace mcf
