#pragma once

#include "sphsub/schemes.hpp"
#include "sphsub/sphere.hpp"

#include <cmath>
#include <numbers>

namespace testing {

using sphsub::UnitPoint;
using sphsub::Vec;

inline Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

inline UnitPoint p3(double x, double y, double z) { return UnitPoint::normalized(v3(x, y, z)); }

// Regular n-gon on the small circle around the north pole with consecutive
// geodesic distance `edge`.
inline sphsub::PointSequence regular_polygon(int n, double edge) {
  const double rho = std::asin(std::sin(edge / 2) / std::sin(std::numbers::pi / n));
  sphsub::PointSequence s;
  for (int k = 0; k < n; ++k) {
    const double a = 2 * std::numbers::pi * k / n;
    s.points.push_back(p3(std::sin(rho) * std::cos(a), std::sin(rho) * std::sin(a), std::cos(rho)));
  }
  return s;
}

// Points along the great circle z = 0 at the given angles.
inline sphsub::PointSequence on_equator(const std::vector<double>& angles) {
  sphsub::PointSequence s;
  for (double a : angles) s.points.push_back(p3(std::cos(a), std::sin(a), 0.0));
  return s;
}

inline double max_abs(const Vec& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace testing
