#include "sphsub/frechet.hpp"

#include "sphsub/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace sphsub {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

// Slack for the closed-ball containment test; distances are computed to ~1e-15.
constexpr double kContainmentSlack = 1e-12;

double upper_radius(double alpha_minus) {
  return kQuarterPi / (1.0 + (1.0 + std::numbers::pi / 2.0) * alpha_minus);
}

}  // namespace

const char* to_string(WellDefinedCondition c) {
  switch (c) {
    case WellDefinedCondition::RadiusBelowQuarterPi: return "r < r* < pi/4";
    case WellDefinedCondition::LowerBound: return "r* > (1 + 2 alpha_-) r";
    case WellDefinedCondition::UpperBound: return "r* < (pi/4) / (1 + (1 + pi/2) alpha_-)";
  }
  return "?";
}

std::string WellDefinednessReport::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << "alpha_- = " << alpha_minus << ", r = " << data_radius;
  if (well_defined()) {
    os << ": well defined, r* = " << *certified_radius;
  } else {
    os << ": violated";
    for (auto c : failed) os << " [" << to_string(c) << "]";
  }
  return os.str();
}

void SolverSettings::validate() const {
  if (!(gradient_tolerance > 0.0)) throw Error(ErrorKind::ContractViolation, "gradient_tolerance must be > 0");
  if (max_iterations < 1) throw Error(ErrorKind::ContractViolation, "max_iterations must be >= 1");
}

WellDefinednessReport well_defined_for_radius(double alpha_minus, double r) {
  if (alpha_minus < 0.0 || r < 0.0) throw Error(ErrorKind::ContractViolation, "alpha_- and r must be >= 0");
  WellDefinednessReport rep;
  rep.alpha_minus = alpha_minus;
  rep.data_radius = r;

  // Open interval of admissible r*.
  const double lo = std::max(r, (1.0 + 2.0 * alpha_minus) * r);
  const double hi = std::min(kQuarterPi, upper_radius(alpha_minus));

  if (!(r < kQuarterPi)) rep.failed.push_back(WellDefinedCondition::RadiusBelowQuarterPi);
  if (alpha_minus > 0.0 && !(lo < hi)) {
    // (ii) pushes r* past the cap set by (iii); neither holds on its own terms.
    rep.failed.push_back(WellDefinedCondition::LowerBound);
    rep.failed.push_back(WellDefinedCondition::UpperBound);
  }
  if (rep.failed.empty()) rep.certified_radius = 0.5 * (lo + hi);
  return rep;
}

WellDefinednessReport check_well_defined(const WeightedConfiguration& c, const UnitPoint& center, double r) {
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double d = geodesic_distance(center, c.points()[j]);
    if (d > r + kContainmentSlack) {
      std::ostringstream os;
      os << "point " << j << " at distance " << d << " from the center exceeds r = " << r;
      throw Error(ErrorKind::PointsOutsideBall, os.str());
    }
  }
  return well_defined_for_radius(c.alpha_minus(), r);
}

double max_input_radius(double alpha_minus, double span_factor) {
  if (alpha_minus < 0.0 || !(span_factor > 0.0)) {
    throw Error(ErrorKind::ContractViolation, "max_input_radius needs alpha_- >= 0 and span_factor > 0");
  }
  const double r = std::min(kQuarterPi, upper_radius(alpha_minus) / (1.0 + 2.0 * alpha_minus));
  return r / span_factor;
}

UnitPoint default_initial(const WeightedConfiguration& c) {
  Vec avg = Vec::Zero(c.ambient_dim());
  for (std::size_t j = 0; j < c.size(); ++j) avg += c.weights()[j] * c.points()[j].coords();
  if (avg.norm() >= 0.5) return UnitPoint::normalized(avg);
  return c.points().front();
}

UnitPoint karcher_mean(const WeightedConfiguration& c, const SolverSettings& settings) {
  return karcher_mean(c, settings, default_initial(c));
}

UnitPoint karcher_mean(const WeightedConfiguration& c, const SolverSettings& settings, const UnitPoint& initial,
                       const std::optional<Ball>& guard) {
  settings.validate();

  // A stencil with one unit weight has that point as its exact minimiser.
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c.weights()[j] == 1.0) {
      bool others_zero = true;
      for (std::size_t k = 0; k < c.size(); ++k) others_zero &= (k == j || c.weights()[k] == 0.0);
      if (others_zero) return c.points()[j];
    }
  }

  auto check_guard = [&](const UnitPoint& x, int it) {
    if (guard && geodesic_distance(guard->center, x) >= guard->radius) {
      std::ostringstream os;
      os << "iterate " << it << " left the ball of radius " << guard->radius;
      throw Error(ErrorKind::LeftCertifiedBall, os.str());
    }
  };

  UnitPoint x = initial;
  check_guard(x, 0);
  double gnorm = 0.0;
  for (int it = 1; it <= settings.max_iterations + 1; ++it) {
    const TangentVector g = objective_gradient(c, x);
    gnorm = g.norm();
    if (gnorm <= settings.gradient_tolerance) return x;
    if (it > settings.max_iterations) break;

    Vec step;
    if (settings.method == SolverSettings::Method::FixedPointGradient) {
      step = -0.5 * g.vec();
    } else {
      const Mat q = tangent_basis(x);
      const Mat h = q.transpose() * objective_hessian(c, x) * q;
      Eigen::SelfAdjointEigenSolver<Mat> es(h);
      if (es.eigenvalues().minCoeff() < 1e-10) {
        std::ostringstream os;
        os << "tangent Hessian smallest eigenvalue " << es.eigenvalues().minCoeff();
        throw Error(ErrorKind::SingularHessian, os.str());
      }
      const Vec coords = h.llt().solve(-(q.transpose() * g.vec()));
      step = q * coords;
    }
    x = exp_map(x, project_to_tangent(x, step));
    check_guard(x, it);
  }
  std::ostringstream os;
  os << "no convergence after " << settings.max_iterations << " iterations, |grad| = " << gnorm;
  throw Error(ErrorKind::NoConvergence, os.str());
}

UnitPoint geodesic_average(const UnitPoint& x, const UnitPoint& y, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorKind::ContractViolation, "beta must lie in [0, 1]");
  if (beta == 0.0) return x;
  if (beta == 1.0) {
    log_map(x, y);  // antipodal check
    return y;
  }
  const TangentVector l = log_map(x, y);
  return exp_map(x, beta * l.vec());
}

}  // namespace sphsub
