#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcf/algorithms.hpp"
#include "mcf/linalg.hpp"

namespace mcf {

/// Point (x, a) of the natural extension with the cached pairing e = <x, a>.
template <Scalar T>
class NatExtState {
 public:
  NatExtState(ConeVector<T> x, ConeVector<T> a)
      : x_(std::move(x)), a_(std::move(a)), e_(scalar_product(x_, a_)) {
    if (x_.size() != a_.size()) throw DomainError("state dimension mismatch");
  }

  const ConeVector<T>& x() const noexcept { return x_; }
  const ConeVector<T>& a() const noexcept { return a_; }
  const T& e() const noexcept { return e_; }
  std::size_t dim() const noexcept { return x_.size(); }

  friend bool operator==(const NatExtState& l, const NatExtState& r) {
    return l.x_ == r.x_ && l.a_ == r.a_;
  }

 private:
  ConeVector<T> x_;
  ConeVector<T> a_;
  T e_;
};

template <Scalar T>
struct NatExtStep {
  std::size_t branch;
  NatExtState<T> state;
};

/// (M^-1 x, M^T a) with M the branch matrix at x.
template <Scalar T>
NatExtStep<T> natext_step(const Algorithm& alg, const NatExtState<T>& s);

/// natext_step, then x scaled to coordinate sum 1 and a scaled so that e = 1.
template <Scalar T>
NatExtStep<T> natext_step_renormalized(const Algorithm& alg, const NatExtState<T>& s);

/// (M x, M^-T a) for the given branch. Throws DomainError when the result does not lie in
/// (branch cone) x (positive cone).
template <Scalar T>
NatExtState<T> natext_inverse(const Algorithm& alg, std::size_t branch, const NatExtState<T>& s);

/// Section coordinates: y = x_1..x_{d-1}, b_i = a_i - a_d, the norm |x|_1 and e.
/// The log-norm coordinate is tau = -log(norm); the norm is stored so that the
/// round trip stays exact.
template <Scalar T>
struct SectionPoint {
  Vec<T> y;
  Vec<T> b;
  T norm;
  T e;

  double tau() const;
};

template <Scalar T>
SectionPoint<T> to_section(const NatExtState<T>& s);

template <Scalar T>
NatExtState<T> from_section(const SectionPoint<T>& p);

struct DualMembership {
  bool in_dual = false;
  std::optional<std::size_t> piece;  // branch whose target piece contains a
  std::vector<std::size_t> sources;  // branches whose source cone contains a
};

/// Membership of a dual vector in the declared dual domain. Throws UnsupportedError without
/// a declared dual structure and BoundaryError on ties.
template <Scalar T>
DualMembership dual_membership(const Algorithm& alg, std::span<const T> a);

/// True when (x, a) lies in the natural-extension domain, i.e. a is in the source cone of
/// the branch of x.
template <Scalar T>
bool in_natext_domain(const Algorithm& alg, std::span<const T> x, std::span<const T> a);

/// Least n <= max_n for which the n-th (renormalized) iterate lies in the natural-extension
/// domain, or nullopt.
std::optional<std::size_t> absorption_time(const Algorithm& alg, const NatExtState<double>& s0,
                                           std::size_t max_n);

struct AuditRow {
  std::string piece;
  std::string check;
  std::size_t samples = 0;
  std::size_t violations = 0;
};

struct AuditReport {
  std::string algorithm;
  std::vector<AuditRow> rows;
  std::vector<std::string> examples;  // a few violating inputs, for diagnostics

  std::size_t total_violations() const;
  std::string to_csv() const;
};

/// Exact audit of the product decomposition of the natural-extension domain. For every
/// branch: forward images of sampled (x, a), inverse images of sampled image points, and
/// the extreme-ray maps of M^-1 and M^T; plus a check that both decompositions of the
/// domain are disjoint and cover the same set.
AuditReport bijectivity_audit(const Algorithm& alg, std::size_t n_samples, std::uint64_t seed,
                              unsigned threads = 1);

}  // namespace mcf
