#include "mcf/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>

namespace mcf {

namespace {

// The integrate members are not const-qualified in this Boost version.
boost::math::quadrature::tanh_sinh<double>& engine() {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator;
}

}  // namespace

QuadratureResult integrate_1d(const Integrand1d& f, double a, double b, double tol) {
  double err = 0.0;
  const double v = engine().integrate([&](double x, double xc) { return f(x, xc); }, a, b, tol, &err);
  return {v, err};
}

double twice_area(const Point3& p0, const Point3& p1, const Point3& p2) {
  return (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
}

QuadratureResult integrate_triangle(const Integrand2d& f, const Point3& p0, const Point3& p1,
                                    const Point3& p2, double tol) {
  const double jac = std::fabs(twice_area(p0, p1, p2));
  if (jac == 0.0) return {0.0, 0.0};
  Point3 e1, e2;
  for (int k = 0; k < 3; ++k) {
    e1[k] = p1[k] - p0[k];
    e2[k] = p2[k] - p1[k];
  }
  auto outer = [&](double u, double) {
    if (u <= 0.0) return 0.0;
    auto inner = [&](double v, double) {
      Point3 p;
      for (int k = 0; k < 3; ++k) p[k] = p0[k] + u * e1[k] + u * v * e2[k];
      return f(p);
    };
    double err = 0.0;
    const double val = engine().integrate(inner, 0.0, 1.0, tol * 0.1, &err);
    return u * val;
  };
  double err = 0.0;
  const double v = engine().integrate(outer, 0.0, 1.0, tol, &err);
  return {jac * v, jac * err};
}

std::vector<Point3> clip_polygon(const std::vector<Point3>& poly, const Point3& c) {
  std::vector<Point3> out;
  const std::size_t n = poly.size();
  auto val = [&](const Point3& p) { return c[0] * p[0] + c[1] * p[1] + c[2] * p[2]; };
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& a = poly[i];
    const Point3& b = poly[(i + 1) % n];
    const double va = val(a), vb = val(b);
    if (va >= 0.0) out.push_back(a);
    if ((va > 0.0 && vb < 0.0) || (va < 0.0 && vb > 0.0)) {
      const double t = va / (va - vb);
      Point3 p;
      for (int k = 0; k < 3; ++k) p[k] = a[k] + t * (b[k] - a[k]);
      out.push_back(p);
    }
  }
  return out;
}

QuadratureResult integrate_polygon(const Integrand2d& f, const std::vector<Point3>& poly, double tol) {
  if (poly.size() < 3) return {0.0, 0.0};
  std::size_t apex = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const double m = std::max({poly[i][0], poly[i][1], poly[i][2]});
    if (m > best) {
      best = m;
      apex = i;
    }
  }
  QuadratureResult total{0.0, 0.0};
  const std::size_t n = poly.size();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Point3& a = poly[(apex + k) % n];
    const Point3& b = poly[(apex + k + 1) % n];
    if (std::fabs(twice_area(poly[apex], a, b)) < 1e-300) continue;
    const QuadratureResult r = integrate_triangle(f, poly[apex], a, b, tol);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

}  // namespace mcf
