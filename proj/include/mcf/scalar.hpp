#pragma once

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace mcf {

/// Exact rational backend (GMP, always kept in canonical reduced form).
using Rational = mpq_class;

/// The two numeric backends every generic operation is instantiated for.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

/// Small dense storage; dimensions in this library stay well under 16.
template <class T>
using Vec = boost::container::small_vector<T, 8>;

/// Read-only view of a Vec (its iterators are not contiguous iterators for std::span).
template <class T>
std::span<const T> view(const Vec<T>& v) {
  return {v.data(), v.size()};
}

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

template <Scalar T>
T from_int(long v) {
  if constexpr (std::same_as<T, double>) {
    return static_cast<double>(v);
  } else {
    return Rational(v);
  }
}

template <Scalar T>
T from_rational(const Rational& q) {
  if constexpr (std::same_as<T, double>) {
    return q.get_d();
  } else {
    return q;
  }
}

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.get_d(); }

template <Scalar T>
int sign_of(const T& v) {
  if constexpr (std::same_as<T, double>) {
    return (v > 0.0) - (v < 0.0);
  } else {
    return sgn(v);
  }
}

template <Scalar T>
T abs_of(const T& v) {
  if constexpr (std::same_as<T, double>) {
    return std::fabs(v);
  } else {
    return Rational(abs(v));
  }
}

/// Throws NumericError when a float-mode value is NaN or infinite. No-op for rationals.
void require_finite(double v, std::string_view context);
inline void require_finite(const Rational&, std::string_view) {}

std::string format_scalar(double v);
std::string format_scalar(const Rational& v);

/// Parses "3", "-2/7", "0.125" (decimals are converted exactly) into a rational.
Rational parse_rational(std::string_view text);

}  // namespace mcf
