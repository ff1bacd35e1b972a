#pragma once

#include "common.hpp"

#include <algorithm>
#include <cmath>

namespace catmin {

/// Angle opposite side `c` in a Euclidean triangle with sides a, b, c. The
/// cosine is clamped to [-1, 1] before arccos. Requires a, b > 0.
inline double angle_from_sides(double a, double b, double c) {
  const double cosine = (a * a + b * b - c * c) / (2.0 * a * b);
  return std::acos(std::clamp(cosine, -1.0, 1.0));
}

/// Geodesic metric space with distance, geodesic evaluation and comparison
/// angles. Implementations are immutable after construction.
template <class Point>
class TargetSpace {
 public:
  virtual ~TargetSpace() = default;

  virtual double distance(const Point& p, const Point& q) const = 0;
  virtual Point geodesic_eval(const Point& p, const Point& q, double t) const = 0;

  // Comparison angle at `apex` of the triangle (apex, p, q), in [0, pi].
  double comparison_angle(const Point& apex, const Point& p, const Point& q) const {
    const double a = distance(apex, p);
    const double b = distance(apex, q);
    if (!(a > 0.0) || !(b > 0.0))
      throw Error(ErrorKind::InvalidInput, "comparison_angle: apex coincides with an endpoint");
    return angle_from_sides(a, b, distance(p, q));
  }

  // Comparison angle of the triangle cut off near the apex at distance `scale`
  // along both geodesics. Approximates the angle between the geodesics.
  double local_angle(const Point& apex, const Point& p, const Point& q, double scale) const {
    const double a = distance(apex, p);
    const double b = distance(apex, q);
    const Point pp = geodesic_eval(apex, p, std::min(1.0, scale / a));
    const Point qq = geodesic_eval(apex, q, std::min(1.0, scale / b));
    return comparison_angle(apex, pp, qq);
  }
};

class EuclideanSpace final : public TargetSpace<Vec> {
 public:
  explicit EuclideanSpace(int dimension) : dimension_(dimension) {
    if (dimension < 1) fail_input("EuclideanSpace: dimension must be >= 1");
  }

  int dimension() const noexcept { return dimension_; }

  double distance(const Vec& p, const Vec& q) const override {
    check(p);
    check(q);
    return (p - q).norm();
  }

  Vec geodesic_eval(const Vec& p, const Vec& q, double t) const override {
    check(p);
    check(q);
    return (1.0 - t) * p + t * q;
  }

 private:
  void check(const Vec& p) const {
    if (p.size() != dimension_ || !p.allFinite())
      fail_input("EuclideanSpace: point outside the space (dimension " + std::to_string(p.size()) +
                 ", expected " + std::to_string(dimension_) + ")");
  }

  int dimension_;
};

}  // namespace catmin
