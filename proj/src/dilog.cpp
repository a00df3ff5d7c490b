#include "mcf/dilog.hpp"

#include <cmath>
#include <numbers>

#include "mcf/errors.hpp"

namespace mcf {

namespace {

constexpr double kPi2Over6 = std::numbers::pi * std::numbers::pi / 6.0;

double series(double z) {
  double term = z, sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    const double add = term / (static_cast<double>(n) * n);
    sum += add;
    if (std::fabs(add) <= 1e-18 * std::fabs(sum)) break;
    term *= z;
  }
  return sum;
}

}  // namespace

double dilog(double z) {
  if (std::isnan(z)) throw NumericError("dilog of NaN");
  if (z > 1.0) throw DomainError("dilog: real branch requires z <= 1");
  if (z == 1.0) return kPi2Over6;
  if (z == 0.0) return 0.0;
  if (std::fabs(z) <= 0.5) return series(z);
  if (z > 0.5) return kPi2Over6 - std::log(z) * std::log1p(-z) - series(1.0 - z);
  if (z >= -1.0) {
    const double l = std::log1p(-z);
    return -series(z / (z - 1.0)) - 0.5 * l * l;
  }
  const double l = std::log(-z);
  return -kPi2Over6 - 0.5 * l * l - dilog(1.0 / z);
}

double dilog_identity_lhs() {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return -pi2 / 24.0 + 0.5 * std::log(3.0) * std::log(2.0) - 0.5 * dilog(2.0 / 3.0) +
         1.5 * dilog(1.0 / 3.0) - dilog(-1.0 / 3.0);
}

double dilog_identity_check() {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::fabs(dilog_identity_lhs() - pi2 / 24.0);
}

}  // namespace mcf
