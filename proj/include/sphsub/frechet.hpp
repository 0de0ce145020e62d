#pragma once

// Weighted Riemannian center of mass on S^n and the sufficient conditions
// under which it is unique inside a geodesic ball.
//
// With data in a ball B_r(center), curvature K = 1 and injectivity radius pi,
// the minimiser of f_alpha is unique in B_{r*}(center) whenever some r*
// satisfies
//   (i)   r < r* < pi/4,
//   (ii)  r* > (1 + 2 alpha_-) r,
//   (iii) r* < (pi/4) / (1 + (1 + pi/2) alpha_-).

#include "sphsub/sphere.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sphsub {

enum class WellDefinedCondition {
  RadiusBelowQuarterPi,  // (i)
  LowerBound,            // (ii)
  UpperBound,            // (iii)
};

const char* to_string(WellDefinedCondition c);

struct WellDefinednessReport {
  double alpha_minus = 0.0;
  double data_radius = 0.0;
  std::optional<double> certified_radius;  // r*, midpoint of the feasible interval
  std::vector<WellDefinedCondition> failed;

  bool well_defined() const { return failed.empty(); }
  std::string describe() const;
};

struct Ball {
  UnitPoint center;
  double radius;
};

struct SolverSettings {
  enum class Method { FixedPointGradient, NewtonTangent };

  double gradient_tolerance = 1e-12;
  int max_iterations = 100;
  Method method = Method::FixedPointGradient;

  void validate() const;
};

// Pure interval test on (r, alpha_-). Does not look at any points.
WellDefinednessReport well_defined_for_radius(double alpha_minus, double r);

// Verifies every point of c lies in the closed ball B_r(center) (else
// PointsOutsideBall), then applies the conditions above.
WellDefinednessReport check_well_defined(const WeightedConfiguration& c, const UnitPoint& center, double r);

/// Supremum of r0 such that a configuration of radius span_factor * r0
/// passes the gate, i.e. (pi/4) / ((1 + (1 + pi/2) a)(1 + 2a)) / span_factor.
double max_input_radius(double alpha_minus, double span_factor);

// Normalized weighted ambient average when its norm is at least 0.5,
// otherwise the first point.
UnitPoint default_initial(const WeightedConfiguration& c);

/// Minimiser of f_alpha near `initial`.
///
/// FixedPointGradient iterates x <- exp_x(sum_j alpha_j log_x(x_j)).
/// NewtonTangent solves H v = -grad in tangent coordinates and retracts with
/// exp. Stops when |grad f_alpha| <= gradient_tolerance.
///
/// Throws NoConvergence, SingularHessian (Newton only, smallest tangent
/// eigenvalue < 1e-10) or LeftCertifiedBall when `guard` is given and an
/// iterate leaves it.
UnitPoint karcher_mean(const WeightedConfiguration& c, const SolverSettings& settings,
                       const UnitPoint& initial, const std::optional<Ball>& guard = std::nullopt);

UnitPoint karcher_mean(const WeightedConfiguration& c, const SolverSettings& settings = {});

// exp_x(beta log_x(y)); beta is the weight on y.
UnitPoint geodesic_average(const UnitPoint& x, const UnitPoint& y, double beta);

}  // namespace sphsub
