#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace mcf {

/// Integrand receiving x and the signed distance to the nearer endpoint (b - x on the right
/// half, a - x on the left half), so factors like log(1 - x) can be evaluated accurately.
using Integrand1d = std::function<double(double x, double xc)>;

struct QuadratureResult {
  double value;
  double error;
};

/// Tanh-sinh (double exponential) quadrature on [a, b]; copes with endpoint singularities.
QuadratureResult integrate_1d(const Integrand1d& f, double a, double b, double tol);

/// Points are stored with three coordinates; planar regions leave the third at zero.
/// Areas are always measured in the projection onto the first two coordinates.
using Point3 = std::array<double, 3>;
using Integrand2d = std::function<double(const Point3&)>;

/// Integral over the triangle (p0, p1, p2) through the collapsed map
/// p = p0 + u (p1 - p0) + u v (p2 - p1), which absorbs a 1/r singularity at p0.
QuadratureResult integrate_triangle(const Integrand2d& f, const Point3& p0, const Point3& p1,
                                    const Point3& p2, double tol);

/// Twice the signed area of (p0, p1, p2) in the (x1, x2) projection.
double twice_area(const Point3& p0, const Point3& p1, const Point3& p2);

/// Sutherland-Hodgman clip of a convex polygon to {p : c . p >= 0}.
std::vector<Point3> clip_polygon(const std::vector<Point3>& poly, const Point3& c);

/// Fan triangulation of a convex polygon, each triangle integrated with integrate_triangle.
/// The fan apex is the vertex closest to a corner of the unit simplex (largest coordinate),
/// where the densities of this library are singular.
QuadratureResult integrate_polygon(const Integrand2d& f, const std::vector<Point3>& poly, double tol);

}  // namespace mcf
