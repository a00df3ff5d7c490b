#include "mcf/algorithms.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "mcf/errors.hpp"

namespace mcf {

Algorithm::Algorithm(std::string name, std::size_t dim, LinearCone domain,
                     std::vector<Branch> branches)
    : name_(std::move(name)), dim_(dim), domain_(std::move(domain)), branches_(std::move(branches)) {
  for (const auto& b : branches_) {
    if (b.matrix.dim() != dim_ || b.cone.dim() != dim_) {
      throw DomainError("branch dimension mismatch in " + name_);
    }
  }
}

std::size_t Algorithm::branch_index(std::string_view label) const {
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (branches_[i].label == label) return i;
  }
  throw DomainError("unknown branch '" + std::string(label) + "' for " + name_);
}

const LinearCone& Algorithm::image_cone(std::size_t i) const {
  const Branch& b = branches_.at(i);
  return b.image_kind == ImageKind::kFull ? domain_ : b.image;
}

template <Scalar T>
std::size_t Algorithm::scan(std::span<const T> x) const {
  bool boundary = false;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    switch (branches_[i].cone.status(x)) {
      case ConeStatus::kInside:
        return i;
      case ConeStatus::kBoundary:
        boundary = true;
        break;
      case ConeStatus::kOutside:
        break;
    }
  }
  if (boundary) {
    throw BoundaryError(name_ + ": point on a partition boundary: " + format_vector(x));
  }
  throw DomainError(name_ + ": point not covered by any branch: " + format_vector(x));
}

namespace {

// Lexicographic rank of a permutation of {0..n-1}.
std::size_t lehmer_rank(std::span<const std::size_t> p) {
  std::size_t rank = 0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) smaller += p[j] < p[i];
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

}  // namespace

template <Scalar T>
std::size_t Algorithm::classify(std::span<const T> x) const {
  if (x.size() != dim_) throw DomainError(name_ + ": dimension mismatch");
  if (!strictly_positive(x)) {
    throw DomainError(name_ + ": point not in the open positive cone: " + format_vector(x));
  }
  switch (domain_.status(x)) {
    case ConeStatus::kInside:
      break;
    case ConeStatus::kBoundary:
      throw BoundaryError(name_ + ": point on the domain boundary: " + format_vector(x));
    case ConeStatus::kOutside:
      throw DomainError(name_ + ": point outside the domain " + domain_.describe());
  }
  if (ordering_offset_) {
    // Try the leading non-ordering branches, then sort.
    for (std::size_t i = 0; i < *ordering_offset_; ++i) {
      if (branches_[i].cone.status(x) == ConeStatus::kInside) return i;
    }
    Vec<std::size_t> order(dim_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    bool tie = false;
    for (std::size_t i = 0; i + 1 < dim_; ++i) tie = tie || !(x[order[i]] < x[order[i + 1]]);
    if (!tie) {
      const std::size_t idx =
          *ordering_offset_ + lehmer_rank(std::span<const std::size_t>(order.data(), order.size()));
      if (idx < branches_.size() && branches_[idx].cone.status(x) == ConeStatus::kInside) return idx;
    }
  }
  return scan(x);
}

template <Scalar T>
LinearStep<T> Algorithm::step_linear(std::span<const T> x) const {
  const std::size_t i = classify(x);
  if constexpr (std::same_as<T, double>) {
    return {i, apply_inverse(branches_[i].matrix_f, x)};
  } else {
    return {i, apply_inverse(branches_[i].matrix, x)};
  }
}

template <Scalar T>
LinearStep<T> Algorithm::step_projective(std::span<const T> x) const {
  LinearStep<T> s = step_linear(x);
  const T norm = l1_norm(view(s.x));
  for (T& c : s.x) c /= norm;
  for (const T& c : s.x) require_finite(c, "projective step");
  return s;
}

template <Scalar T>
std::vector<Preimage<T>> Algorithm::inverse_branches(std::span<const T> x) const {
  if (x.size() != dim_) throw DomainError(name_ + ": dimension mismatch");
  std::vector<Preimage<T>> out;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& b = branches_[i];
    if (image_cone(i).status(x) != ConeStatus::kInside) continue;
    Vec<T> y;
    T det;
    if constexpr (std::same_as<T, double>) {
      y = apply(b.matrix_f, x);
      det = std::fabs(b.matrix_f.determinant());
    } else {
      y = apply(b.matrix, x);
      det = abs_of(b.matrix.determinant());
    }
    if (!strictly_positive(view(y)) || b.cone.status(view(y)) != ConeStatus::kInside) continue;
    const T norm = l1_norm(view(y));
    T denom(1);
    for (std::size_t k = 0; k < dim_; ++k) denom *= norm;
    for (T& c : y) c /= norm;
    out.push_back({i, std::move(y), det / denom});
  }
  return out;
}

#define MCF_INSTANTIATE(T)                                                                   \
  template std::size_t Algorithm::classify(std::span<const T>) const;                      \
  template LinearStep<T> Algorithm::step_linear(std::span<const T>) const;                 \
  template LinearStep<T> Algorithm::step_projective(std::span<const T>) const;             \
  template std::vector<Preimage<T>> Algorithm::inverse_branches(std::span<const T>) const; \
  template std::size_t Algorithm::scan(std::span<const T>) const;

MCF_INSTANTIATE(double)
MCF_INSTANTIATE(Rational)

#undef MCF_INSTANTIATE

std::vector<std::vector<std::size_t>> permutations(std::size_t d) {
  std::vector<std::size_t> p(d);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::string permutation_label(std::span<const std::size_t> p) {
  std::string s;
  for (auto v : p) s += std::to_string(v + 1);
  return s;
}

// ---------------------------------------------------------------------------------------
// Registry

namespace {

using Row = Vec<long>;

Row row(std::size_t d, std::initializer_list<std::pair<std::size_t, long>> terms) {
  Row r(d, 0);
  for (auto [i, c] : terms) r[i] += c;
  return r;
}

// Rows x_{p[0]} < x_{p[1]} < ... < x_{p[n-1]}.
std::vector<Row> chain(std::size_t d, std::span<const std::size_t> p) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) rows.push_back(row(d, {{p[i + 1], 1}, {p[i], -1}}));
  return rows;
}

SquareMatrix<Rational> int_matrix(std::size_t d, std::initializer_list<long> e) {
  Vec<Rational> v;
  for (long x : e) v.emplace_back(x);
  SquareMatrix<Rational> m(std::move(v));
  if (m.dim() != d) throw DomainError("bad matrix literal");
  return m;
}

// I + e_to e_from^T : x_to = y_to + y_from.
SquareMatrix<Rational> elementary(std::size_t d, std::size_t to, std::size_t from) {
  Vec<Rational> v(d * d, Rational(0));
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1;
  v[to * d + from] += 1;
  return SquareMatrix<Rational>(std::move(v));
}

Branch make_branch(std::string label, SquareMatrix<Rational> m, LinearCone cone,
                   std::optional<LinearCone> image = std::nullopt, std::string family = {}) {
  Branch b{std::move(label), std::move(family), m, to_double(m), std::move(cone),
           image ? ImageKind::kCone : ImageKind::kFull, image.value_or(LinearCone())};
  return b;
}

std::unique_ptr<Algorithm> make_farey() {
  const std::size_t d = 2;
  std::vector<Branch> b;
  b.push_back(make_branch("1", int_matrix(d, {1, 0, 1, 1}), LinearCone(d, {row(d, {{1, 1}, {0, -1}})})));
  b.push_back(make_branch("2", int_matrix(d, {1, 1, 0, 1}), LinearCone(d, {row(d, {{0, 1}, {1, -1}})})));
  auto alg = std::make_unique<Algorithm>("farey", d, LinearCone::positive(d), std::move(b));
  DualStructure dual;
  dual.dual_cone = LinearCone::positive(d);
  dual.source = {LinearCone::positive(d), LinearCone::positive(d)};
  dual.target = {LinearCone(d, {row(d, {{0, 1}, {1, -1}})}), LinearCone(d, {row(d, {{1, 1}, {0, -1}})})};
  alg->set_dual(std::move(dual));
  alg->set_density("farey");
  return alg;
}

std::unique_ptr<Algorithm> make_farey_sorted() {
  const std::size_t d = 2;
  std::vector<Branch> b;
  b.push_back(make_branch("1", int_matrix(d, {1, 0, 1, 1}), LinearCone(d, {row(d, {{1, 1}, {0, -2}})})));
  b.push_back(make_branch("2", int_matrix(d, {0, 1, 1, 1}),
                          LinearCone(d, {row(d, {{1, 1}, {0, -1}}), row(d, {{0, 2}, {1, -1}})})));
  return std::make_unique<Algorithm>("farey-sorted", d, LinearCone(d, {row(d, {{1, 1}, {0, -1}})}),
                                     std::move(b));
}

LinearCone triangle_cone() {
  const std::size_t d = 3;
  return LinearCone(d, {row(d, {{1, 1}, {2, 1}, {0, -1}}), row(d, {{0, 1}, {2, 1}, {1, -1}}),
                        row(d, {{0, 1}, {1, 1}, {2, -1}})});
}

std::unique_ptr<Algorithm> make_reverse() {
  const std::size_t d = 3;
  std::vector<Branch> b;
  b.push_back(make_branch("1", int_matrix(d, {1, 1, 1, 0, 1, 0, 0, 0, 1}),
                          LinearCone(d, {row(d, {{0, 1}, {1, -1}, {2, -1}})})));
  b.push_back(make_branch("2", int_matrix(d, {1, 0, 0, 1, 1, 1, 0, 0, 1}),
                          LinearCone(d, {row(d, {{1, 1}, {0, -1}, {2, -1}})})));
  b.push_back(make_branch("3", int_matrix(d, {1, 0, 0, 0, 1, 0, 1, 1, 1}),
                          LinearCone(d, {row(d, {{2, 1}, {0, -1}, {1, -1}})})));
  const Rational h = make_rational(1, 2);
  b.push_back(make_branch("4", SquareMatrix<Rational>(d, {0, h, h, h, 0, h, h, h, 0}), triangle_cone()));
  auto alg = std::make_unique<Algorithm>("reverse", d, LinearCone::positive(d), std::move(b));

  DualStructure dual;
  const LinearCone star = triangle_cone();
  dual.dual_cone = star;
  dual.source.assign(4, star);
  for (std::size_t i = 0; i < 3; ++i) {
    // 4 a_i < a_1 + a_2 + a_3
    Row r(d, 1);
    r[i] = -3;
    dual.target.push_back(star.intersect(LinearCone(d, {r})));
  }
  std::vector<Row> all_large;
  for (std::size_t i = 0; i < 3; ++i) {
    Row r(d, -1);
    r[i] = 3;
    all_large.push_back(r);
  }
  dual.target.push_back(star.intersect(LinearCone(d, all_large)));
  alg->set_dual(std::move(dual));
  alg->set_density("reverse");
  return alg;
}

std::unique_ptr<Algorithm> make_cassaigne() {
  const std::size_t d = 3;
  std::vector<Branch> b;
  b.push_back(make_branch("a", int_matrix(d, {1, 1, 0, 0, 0, 1, 0, 1, 0}),
                          LinearCone(d, {row(d, {{0, 1}, {2, -1}})})));
  b.push_back(make_branch("b", int_matrix(d, {0, 1, 0, 1, 0, 0, 0, 1, 1}),
                          LinearCone(d, {row(d, {{2, 1}, {0, -1}})})));
  auto alg = std::make_unique<Algorithm>("cassaigne", d, LinearCone::positive(d), std::move(b));

  DualStructure dual;
  const LinearCone star(d, {row(d, {{1, 1}, {0, -1}}), row(d, {{1, 1}, {2, -1}}),
                            row(d, {{0, 1}, {2, 1}, {1, -1}})});
  dual.dual_cone = star;
  dual.source.assign(2, star);
  dual.target.push_back(star.intersect(LinearCone(d, {row(d, {{2, 1}, {0, -1}})})));
  dual.target.push_back(star.intersect(LinearCone(d, {row(d, {{0, 1}, {2, -1}})})));
  alg->set_dual(std::move(dual));
  alg->set_density("cassaigne");
  return alg;
}

// Brun on the whole positive cone: subtract the second largest coordinate from the largest.
std::unique_ptr<Algorithm> make_brun(std::size_t d, std::string name) {
  std::vector<Branch> b;
  DualStructure dual;
  for (const auto& p : permutations(d)) {
    std::span<const std::size_t> ps(p);
    LinearCone cone(d, chain(d, ps));
    LinearCone theta(d, chain(d, ps.first(d - 1)));
    b.push_back(make_branch(permutation_label(p), elementary(d, p[d - 1], p[d - 2]), cone,
                            d > 2 ? std::optional<LinearCone>(theta) : std::nullopt));
    std::vector<Row> src;
    for (std::size_t i = 0; i + 2 < d; ++i) src.push_back(row(d, {{p[d - 1], 1}, {p[i], -1}}));
    std::vector<Row> tgt = src;
    tgt.push_back(row(d, {{p[d - 2], 1}, {p[d - 1], -1}}));
    dual.source.emplace_back(d, src);
    dual.target.emplace_back(d, tgt);
  }
  auto alg = std::make_unique<Algorithm>(std::move(name), d, LinearCone::positive(d), std::move(b));
  alg->set_ordering(0);
  alg->set_dual(std::move(dual));
  alg->set_density(d == 3 ? "brun" : "brun d=" + std::to_string(d));
  return alg;
}

// Brun on the sorted cone x_1 < ... < x_d; branch k inserts x_d - x_{d-1} at position k.
std::unique_ptr<Algorithm> make_brun_sorted(std::size_t d) {
  std::vector<std::size_t> id(d);
  std::iota(id.begin(), id.end(), std::size_t{0});
  const std::vector<Row> sorted = chain(d, id);
  std::vector<Branch> b;
  for (std::size_t k = 0; k < d; ++k) {
    // y = (x_0..x_{k-1}, v, x_k..x_{d-2}) with v = x_{d-1} - x_{d-2} (zero-based)
    Vec<Rational> m(d * d, Rational(0));
    for (std::size_t j = 0; j < k; ++j) m[j * d + j] = 1;
    for (std::size_t j = k; j + 1 < d; ++j) m[j * d + (j + 1)] = 1;
    // x_{d-1} = v + x_{d-2}
    m[(d - 1) * d + k] += 1;
    const std::size_t prev_pos = (k == d - 1) ? d - 2 : d - 1;
    m[(d - 1) * d + prev_pos] += 1;
    std::vector<Row> rows = sorted;
    if (k >= 1) rows.push_back(row(d, {{d - 1, 1}, {d - 2, -1}, {k - 1, -1}}));
    if (k + 1 < d) rows.push_back(row(d, {{k, 1}, {d - 1, -1}, {d - 2, 1}}));
    b.push_back(make_branch(std::to_string(k + 1), SquareMatrix<Rational>(std::move(m)),
                            LinearCone(d, rows)));
  }
  auto alg = std::make_unique<Algorithm>("brun-sorted d=" + std::to_string(d), d,
                                         LinearCone(d, sorted), std::move(b));
  if (d == 3) alg->set_density("brun-sorted");
  return alg;
}

std::unique_ptr<Algorithm> make_selmer() {
  const std::size_t d = 3;
  std::vector<Branch> b;
  for (const auto& p : permutations(d)) {
    LinearCone image(d, {row(d, {{p[1], 1}, {p[0], -1}}), row(d, {{p[0], 1}, {p[2], 1}, {p[1], -1}})});
    b.push_back(make_branch(permutation_label(p), elementary(d, p[2], p[0]),
                            LinearCone(d, chain(d, p)), image));
  }
  auto alg = std::make_unique<Algorithm>("selmer", d, LinearCone::positive(d), std::move(b));
  alg->set_ordering(0);
  return alg;
}

SquareMatrix<Rational> poincare_matrix(std::span<const std::size_t> p) {
  const std::size_t d = p.size();
  Vec<Rational> m(d * d, Rational(0));
  // x_{p[j]} = y_{p[0]} + ... + y_{p[j]}
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i <= j; ++i) m[p[j] * d + p[i]] = 1;
  return SquareMatrix<Rational>(std::move(m));
}

std::unique_ptr<Algorithm> make_poincare() {
  const std::size_t d = 3;
  std::vector<Branch> b;
  for (const auto& p : permutations(d)) {
    b.push_back(make_branch(permutation_label(p), poincare_matrix(p), LinearCone(d, chain(d, p))));
  }
  auto alg = std::make_unique<Algorithm>("poincare", d, LinearCone::positive(d), std::move(b));
  alg->set_ordering(0);
  return alg;
}

std::unique_ptr<Algorithm> make_arp() {
  const std::size_t d = 3;
  auto reverse = make_reverse();
  std::vector<Branch> b;
  for (std::size_t i = 0; i < 3; ++i) {
    const Branch& r = reverse->branch(i);
    b.push_back(make_branch("AR" + std::to_string(i + 1), r.matrix, r.cone, std::nullopt, "AR"));
  }
  for (const auto& p : permutations(d)) {
    std::vector<Row> rows = chain(d, p);
    rows.push_back(row(d, {{p[0], 1}, {p[1], 1}, {p[2], -1}}));
    LinearCone image(d, {row(d, {{p[0], 1}, {p[2], -1}})});
    b.push_back(make_branch("P" + permutation_label(p), poincare_matrix(p), LinearCone(d, rows),
                            image, "P"));
  }
  auto alg = std::make_unique<Algorithm>("arp", d, LinearCone::positive(d), std::move(b));
  alg->set_ordering(3);
  return alg;
}

std::optional<std::size_t> parse_dim(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string_view rest = name.substr(prefix.size());
  std::size_t d = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), d);
  if (ec != std::errc() || ptr != rest.data() + rest.size()) return std::nullopt;
  return d;
}

std::unique_ptr<Algorithm> build(std::string_view name) {
  if (name == "farey") return make_farey();
  if (name == "farey-sorted") return make_farey_sorted();
  if (name == "reverse") return make_reverse();
  if (name == "cassaigne") return make_cassaigne();
  if (name == "brun") return make_brun(3, "brun");
  if (name == "selmer") return make_selmer();
  if (name == "poincare") return make_poincare();
  if (name == "arp") return make_arp();
  if (auto d = parse_dim(name, "brun d=")) {
    if (*d < 2 || *d > 8) throw DomainError("brun dimension must be in 2..8");
    return make_brun(*d, std::string(name));
  }
  if (auto d = parse_dim(name, "brun-sorted d=")) {
    if (*d < 2 || *d > 8) throw DomainError("brun-sorted dimension must be in 2..8");
    return make_brun_sorted(*d);
  }
  throw DomainError("unknown algorithm '" + std::string(name) + "'");
}

}  // namespace

const Algorithm& get_algorithm(std::string_view name) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<Algorithm>, std::less<>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(std::string(name), build(name)).first;
  return *it->second;
}

std::vector<std::string> algorithm_names() {
  return {"farey", "farey-sorted", "reverse", "cassaigne", "brun", "brun d=<n>",
          "brun-sorted d=<n>", "selmer", "poincare", "arp"};
}

}  // namespace mcf
