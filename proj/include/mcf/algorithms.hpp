#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcf/cone.hpp"
#include "mcf/linalg.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

struct BranchId {
  std::string algorithm;
  std::string label;

  std::string str() const { return algorithm + "/" + label; }
  friend bool operator==(const BranchId&, const BranchId&) = default;
};

enum class ImageKind {
  kFull,  // the branch maps its cone onto the whole domain
  kCone,  // the image is the declared sub-cone
};

struct Branch {
  std::string label;
  /// Grouping used by draw-order policies ("AR" / "P" for arp); empty otherwise.
  std::string family;
  SquareMatrix<Rational> matrix;
  SquareMatrix<double> matrix_f;
  LinearCone cone;
  ImageKind image_kind = ImageKind::kFull;
  LinearCone image;
};

/// Domain of the dual coordinate. Product algorithms have a single cone `dual_cone`;
/// Markov ones (Brun) only have per-branch sources. For every branch i the natural
/// extension maps cone_i x source_i onto image_i x target_i.
struct DualStructure {
  std::optional<LinearCone> dual_cone;
  std::vector<LinearCone> source;
  std::vector<LinearCone> target;
};

template <Scalar T>
struct LinearStep {
  std::size_t branch;
  Vec<T> x;
};

template <Scalar T>
struct Preimage {
  std::size_t branch;
  Vec<T> point;  // on the unit simplex
  T jacobian;
};

class Algorithm {
 public:
  Algorithm(std::string name, std::size_t dim, LinearCone domain, std::vector<Branch> branches);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  const LinearCone& domain() const noexcept { return domain_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  const Branch& branch(std::size_t i) const { return branches_.at(i); }
  BranchId branch_id(std::size_t i) const { return {name_, branches_.at(i).label}; }
  std::size_t branch_index(std::string_view label) const;
  const LinearCone& image_cone(std::size_t i) const;

  const std::optional<DualStructure>& dual() const noexcept { return dual_; }
  const std::optional<std::string>& density_model() const noexcept { return density_; }

  /// Index of the unique branch whose open cone contains x. Ties raise BoundaryError;
  /// points outside the domain raise DomainError.
  template <Scalar T>
  std::size_t classify(std::span<const T> x) const;

  /// (branch, M^-1 x).
  template <Scalar T>
  LinearStep<T> step_linear(std::span<const T> x) const;

  /// step_linear followed by scaling onto the unit simplex.
  template <Scalar T>
  LinearStep<T> step_projective(std::span<const T> x) const;

  /// Valid projective inverse branches at a simplex point x, with the jacobian
  /// |det M| / |M x|_1^d of each.
  template <Scalar T>
  std::vector<Preimage<T>> inverse_branches(std::span<const T> x) const;

  // Registry construction helpers.
  void set_dual(DualStructure d) { dual_ = std::move(d); }
  void set_density(std::string model) { density_ = std::move(model); }
  /// Branches [offset, offset + d!) are the full-ordering cones in lexicographic
  /// permutation order; enables classification by sorting.
  void set_ordering(std::size_t offset) { ordering_offset_ = offset; }

 private:
  template <Scalar T>
  std::size_t scan(std::span<const T> x) const;

  std::string name_;
  std::size_t dim_;
  LinearCone domain_;
  std::vector<Branch> branches_;
  std::optional<DualStructure> dual_;
  std::optional<std::string> density_;
  std::optional<std::size_t> ordering_offset_;
};

/// Looks up "farey", "farey-sorted", "reverse", "cassaigne", "brun", "brun d=<n>",
/// "brun-sorted d=<n>", "selmer", "poincare", "arp". Instances are built once and cached.
const Algorithm& get_algorithm(std::string_view name);

/// Names listed by the CLI help.
std::vector<std::string> algorithm_names();

/// Permutations of {0..d-1} in lexicographic order.
std::vector<std::vector<std::size_t>> permutations(std::size_t d);

/// One-based digit string of a permutation, e.g. {0,2,1} -> "132".
std::string permutation_label(std::span<const std::size_t> p);

// ConeVector conveniences.
template <Scalar T>
BranchId classify(const Algorithm& alg, const ConeVector<T>& x) {
  return alg.branch_id(alg.classify(x.coords()));
}

template <Scalar T>
std::pair<BranchId, ConeVector<T>> step_linear(const Algorithm& alg, const ConeVector<T>& x) {
  auto s = alg.step_linear(x.coords());
  return {alg.branch_id(s.branch), ConeVector<T>(std::move(s.x))};
}

template <Scalar T>
std::pair<BranchId, ConeVector<T>> step_projective(const Algorithm& alg, const ConeVector<T>& x) {
  auto s = alg.step_projective(x.coords());
  return {alg.branch_id(s.branch), ConeVector<T>(std::move(s.x))};
}

}  // namespace mcf
