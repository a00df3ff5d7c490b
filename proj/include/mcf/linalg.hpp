#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "mcf/errors.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

/// A point of the open positive cone: every coordinate strictly positive, d >= 2.
template <Scalar T>
class ConeVector {
 public:
  ConeVector(std::initializer_list<T> coords) : coords_(coords) { validate(); }
  explicit ConeVector(std::span<const T> coords) : coords_(coords.begin(), coords.end()) {
    validate();
  }
  explicit ConeVector(Vec<T> coords) : coords_(std::move(coords)) { validate(); }

  std::size_t size() const noexcept { return coords_.size(); }
  const T& operator[](std::size_t i) const { return coords_[i]; }
  std::span<const T> coords() const noexcept { return {coords_.data(), coords_.size()}; }
  const Vec<T>& vec() const noexcept { return coords_; }

  friend bool operator==(const ConeVector& a, const ConeVector& b) {
    return a.coords_ == b.coords_;
  }

 private:
  void validate() const;

  Vec<T> coords_;
};

/// Dense row-major d x d matrix with its determinant and inverse cached at construction.
///
/// Rational matrices are inverted by exact elimination; float matrices use partial
/// pivoting. A singular matrix is rejected.
template <Scalar T>
class SquareMatrix {
 public:
  /// Row-major entries; size must be a perfect square.
  explicit SquareMatrix(Vec<T> entries);
  SquareMatrix(std::size_t dim, std::initializer_list<T> entries);

  static SquareMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  const T& at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  const T& inverse_at(std::size_t row, std::size_t col) const {
    return inverse_[row * dim_ + col];
  }
  const T& determinant() const noexcept { return det_; }
  std::span<const T> entries() const noexcept { return {entries_.data(), entries_.size()}; }

  SquareMatrix inverse() const { return SquareMatrix(inverse_, entries_, T(1) / det_, dim_); }
  SquareMatrix transpose() const;

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

 private:
  SquareMatrix(Vec<T> entries, Vec<T> inverse, T det, std::size_t dim)
      : dim_(dim), entries_(std::move(entries)), inverse_(std::move(inverse)), det_(std::move(det)) {}

  std::size_t dim_ = 0;
  Vec<T> entries_;
  Vec<T> inverse_;
  T det_{};
};

/// Converts an exact matrix to its float counterpart, reusing the exact inverse and determinant.
SquareMatrix<double> to_double(const SquareMatrix<Rational>& m);

SquareMatrix<Rational> multiply(const SquareMatrix<Rational>& a, const SquareMatrix<Rational>& b);

// Plain products. Results may leave the positive cone, so they are returned as raw vectors.
template <Scalar T>
Vec<T> apply(const SquareMatrix<T>& m, std::span<const T> v);
template <Scalar T>
Vec<T> apply_inverse(const SquareMatrix<T>& m, std::span<const T> v);
template <Scalar T>
Vec<T> apply_transpose(const SquareMatrix<T>& m, std::span<const T> v);
template <Scalar T>
Vec<T> apply_inverse_transpose(const SquareMatrix<T>& m, std::span<const T> v);

template <Scalar T>
Vec<T> apply(const SquareMatrix<T>& m, const ConeVector<T>& v) {
  return apply(m, v.coords());
}

template <Scalar T>
T scalar_product(std::span<const T> x, std::span<const T> a);

template <Scalar T>
T scalar_product(const ConeVector<T>& x, const ConeVector<T>& a) {
  return scalar_product(x.coords(), a.coords());
}

template <Scalar T>
T l1_norm(std::span<const T> v);

/// Rescales a cone vector onto the open unit simplex (coordinate sum 1).
template <Scalar T>
ConeVector<T> normalize_l1(const ConeVector<T>& v);

/// True when every coordinate is strictly positive.
template <Scalar T>
bool strictly_positive(std::span<const T> v);

template <Scalar T>
std::string format_vector(std::span<const T> v, char sep = ',');

}  // namespace mcf
