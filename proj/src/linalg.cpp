#include "mcf/linalg.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace mcf {

template <Scalar T>
void ConeVector<T>::validate() const {
  if (coords_.size() < 2) throw DomainError("cone vector needs dimension >= 2");
  for (const T& c : coords_) {
    require_finite(c, "cone vector");
    if (!(c > 0)) {
      throw DomainError("cone vector coordinate not strictly positive: " +
                        format_vector<T>(coords()));
    }
  }
}

namespace {

std::size_t square_root_dim(std::size_t n) {
  std::size_t d = 0;
  while (d * d < n) ++d;
  if (d * d != n || d == 0) throw DomainError("matrix entry count is not a perfect square");
  return d;
}

// Gauss-Jordan on [A | I]. Rational mode pivots on the first nonzero entry, float mode
// on the largest magnitude.
template <Scalar T>
std::pair<Vec<T>, T> invert(const Vec<T>& a, std::size_t d) {
  Vec<T> m(a.begin(), a.end());
  Vec<T> inv(d * d, T(0));
  for (std::size_t i = 0; i < d; ++i) inv[i * d + i] = T(1);
  T det(1);
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = d;
    if constexpr (std::same_as<T, double>) {
      double best = 0.0;
      for (std::size_t r = col; r < d; ++r) {
        if (std::fabs(m[r * d + col]) > best) {
          best = std::fabs(m[r * d + col]);
          pivot = r;
        }
      }
    } else {
      for (std::size_t r = col; r < d; ++r) {
        if (sgn(m[r * d + col]) != 0) {
          pivot = r;
          break;
        }
      }
    }
    if (pivot == d) throw DomainError("singular matrix");
    if (pivot != col) {
      for (std::size_t k = 0; k < d; ++k) {
        std::swap(m[pivot * d + k], m[col * d + k]);
        std::swap(inv[pivot * d + k], inv[col * d + k]);
      }
      det = -det;
    }
    T p = m[col * d + col];
    det *= p;
    for (std::size_t k = 0; k < d; ++k) {
      m[col * d + k] /= p;
      inv[col * d + k] /= p;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      T f = m[r * d + col];
      if (f == 0) continue;
      for (std::size_t k = 0; k < d; ++k) {
        m[r * d + k] -= f * m[col * d + k];
        inv[r * d + k] -= f * inv[col * d + k];
      }
    }
  }
  require_finite(det, "determinant");
  return {std::move(inv), det};
}

}  // namespace

template <Scalar T>
SquareMatrix<T>::SquareMatrix(Vec<T> entries)
    : dim_(square_root_dim(entries.size())), entries_(std::move(entries)) {
  for (const T& e : entries_) require_finite(e, "matrix entry");
  auto [inv, det] = invert(entries_, dim_);
  inverse_ = std::move(inv);
  det_ = std::move(det);
}

template <Scalar T>
SquareMatrix<T>::SquareMatrix(std::size_t dim, std::initializer_list<T> entries)
    : SquareMatrix(Vec<T>(entries)) {
  if (dim_ != dim) throw DomainError("matrix entry count does not match dimension");
}

template <Scalar T>
SquareMatrix<T> SquareMatrix<T>::identity(std::size_t dim) {
  Vec<T> e(dim * dim, T(0));
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = T(1);
  return SquareMatrix(e, e, T(1), dim);
}

template <Scalar T>
SquareMatrix<T> SquareMatrix<T>::transpose() const {
  Vec<T> e(dim_ * dim_), inv(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      e[c * dim_ + r] = entries_[r * dim_ + c];
      inv[c * dim_ + r] = inverse_[r * dim_ + c];
    }
  }
  return SquareMatrix(std::move(e), std::move(inv), det_, dim_);
}

SquareMatrix<double> to_double(const SquareMatrix<Rational>& m) {
  const std::size_t d = m.dim();
  Vec<double> e(d * d);
  for (std::size_t i = 0; i < d * d; ++i) e[i] = m.entries()[i].get_d();
  SquareMatrix<double> out(std::move(e));
  return out;
}

SquareMatrix<Rational> multiply(const SquareMatrix<Rational>& a, const SquareMatrix<Rational>& b) {
  const std::size_t d = a.dim();
  if (b.dim() != d) throw DomainError("matrix dimension mismatch");
  Vec<Rational> e(d * d, Rational(0));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t k = 0; k < d; ++k) e[r * d + c] += a.at(r, k) * b.at(k, c);
  return SquareMatrix<Rational>(std::move(e));
}

namespace {

template <Scalar T>
void check_dims(std::size_t d, std::size_t n) {
  if (d != n) throw DomainError("dimension mismatch");
}

}  // namespace

template <Scalar T>
Vec<T> apply(const SquareMatrix<T>& m, std::span<const T> v) {
  const std::size_t d = m.dim();
  check_dims<T>(d, v.size());
  Vec<T> out(d, T(0));
  for (std::size_t r = 0; r < d; ++r) {
    T acc(0);
    for (std::size_t c = 0; c < d; ++c) {
      if (m.at(r, c) != 0) acc += m.at(r, c) * v[c];
    }
    out[r] = acc;
  }
  return out;
}

template <Scalar T>
Vec<T> apply_inverse(const SquareMatrix<T>& m, std::span<const T> v) {
  const std::size_t d = m.dim();
  check_dims<T>(d, v.size());
  Vec<T> out(d, T(0));
  for (std::size_t r = 0; r < d; ++r) {
    T acc(0);
    for (std::size_t c = 0; c < d; ++c) {
      if (m.inverse_at(r, c) != 0) acc += m.inverse_at(r, c) * v[c];
    }
    out[r] = acc;
  }
  return out;
}

template <Scalar T>
Vec<T> apply_transpose(const SquareMatrix<T>& m, std::span<const T> v) {
  const std::size_t d = m.dim();
  check_dims<T>(d, v.size());
  Vec<T> out(d, T(0));
  for (std::size_t c = 0; c < d; ++c) {
    T acc(0);
    for (std::size_t r = 0; r < d; ++r) {
      if (m.at(r, c) != 0) acc += m.at(r, c) * v[r];
    }
    out[c] = acc;
  }
  return out;
}

template <Scalar T>
Vec<T> apply_inverse_transpose(const SquareMatrix<T>& m, std::span<const T> v) {
  const std::size_t d = m.dim();
  check_dims<T>(d, v.size());
  Vec<T> out(d, T(0));
  for (std::size_t c = 0; c < d; ++c) {
    T acc(0);
    for (std::size_t r = 0; r < d; ++r) {
      if (m.inverse_at(r, c) != 0) acc += m.inverse_at(r, c) * v[r];
    }
    out[c] = acc;
  }
  return out;
}

template <Scalar T>
T scalar_product(std::span<const T> x, std::span<const T> a) {
  if (x.size() != a.size()) throw DomainError("scalar product dimension mismatch");
  T acc(0);
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * a[i];
  require_finite(acc, "scalar product");
  return acc;
}

template <Scalar T>
T l1_norm(std::span<const T> v) {
  T acc(0);
  for (const T& c : v) acc += abs_of(c);
  return acc;
}

template <Scalar T>
ConeVector<T> normalize_l1(const ConeVector<T>& v) {
  const T norm = l1_norm(v.coords());
  require_finite(norm, "normalize_l1");
  Vec<T> out(v.vec());
  for (T& c : out) c /= norm;
  return ConeVector<T>(std::move(out));
}

template <Scalar T>
bool strictly_positive(std::span<const T> v) {
  for (const T& c : v) {
    if (!(c > 0)) return false;
  }
  return true;
}

template <Scalar T>
std::string format_vector(std::span<const T> v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(sep);
    out += format_scalar(v[i]);
  }
  return out;
}

#define MCF_INSTANTIATE(T)                                                             \
  template class ConeVector<T>;                                                        \
  template class SquareMatrix<T>;                                                      \
  template Vec<T> apply(const SquareMatrix<T>&, std::span<const T>);                   \
  template Vec<T> apply_inverse(const SquareMatrix<T>&, std::span<const T>);           \
  template Vec<T> apply_transpose(const SquareMatrix<T>&, std::span<const T>);         \
  template Vec<T> apply_inverse_transpose(const SquareMatrix<T>&, std::span<const T>); \
  template T scalar_product(std::span<const T>, std::span<const T>);                   \
  template T l1_norm(std::span<const T>);                                              \
  template ConeVector<T> normalize_l1(const ConeVector<T>&);                           \
  template bool strictly_positive(std::span<const T>);                                 \
  template std::string format_vector(std::span<const T>, char);

MCF_INSTANTIATE(double)
MCF_INSTANTIATE(Rational)

#undef MCF_INSTANTIATE

}  // namespace mcf
