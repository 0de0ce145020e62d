#pragma once

// Exact geometry of the unit sphere S^n embedded in R^{n+1}: geodesic
// distance, exponential and logarithm maps, and first/second derivatives of
// weighted squared-distance objectives.
//
// Hessians are ambient (n+1)x(n+1) matrices in the sense H(g)(x) := H(g o exp_x)(0),
// i.e. they act on the tangent space and annihilate the radial direction x.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace sphsub {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kUnitTolerance = 1e-9;
inline constexpr double kAntipodalTolerance = 1e-9;

class UnitPoint {
 public:
  enum class Normalize { Reject, Renormalize };

  // Throws ContractViolation when |coords| deviates from 1 by more than 1e-9
  // (Reject) or when coords is zero (Renormalize). Ambient dimension must be >= 3.
  explicit UnitPoint(Vec coords, Normalize policy = Normalize::Reject);

  static UnitPoint normalized(const Vec& v) { return UnitPoint(v, Normalize::Renormalize); }
  static UnitPoint north_pole(int ambient_dim = 3);

  const Vec& coords() const noexcept { return coords_; }
  int ambient_dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

 private:
  Vec coords_;
};

class TangentVector {
 public:
  // Throws ContractViolation if <vec, base> exceeds 1e-9 * max(1, |vec|).
  TangentVector(UnitPoint base, Vec vec);

  static TangentVector zero(const UnitPoint& base);

  const UnitPoint& base() const noexcept { return base_; }
  const Vec& vec() const noexcept { return vec_; }
  double norm() const { return vec_.norm(); }

 private:
  UnitPoint base_;
  Vec vec_;
};

// Points x_j with real weights alpha_j summing to one.
class WeightedConfiguration {
 public:
  WeightedConfiguration(std::vector<UnitPoint> points, std::vector<double> weights);

  const std::vector<UnitPoint>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return points_.size(); }
  int ambient_dim() const { return points_.front().ambient_dim(); }

  // Sum of |alpha_j| over the negative weights.
  double alpha_minus() const;

 private:
  std::vector<UnitPoint> points_;
  std::vector<double> weights_;
};

double geodesic_distance(const UnitPoint& x, const UnitPoint& y);

UnitPoint exp_map(const TangentVector& w);
UnitPoint exp_map(const UnitPoint& base, const Vec& w);

// Throws AntipodalPoints when <x,y> <= -1 + 1e-9.
TangentVector log_map(const UnitPoint& x, const UnitPoint& y);

// s / tan(s) on [0, pi/2), with psi(0) = 1. Throws DomainError outside.
double psi(double s);

TangentVector grad_sq_dist(const UnitPoint& x, const UnitPoint& y);
Mat hessian_sq_dist(const UnitPoint& x, const UnitPoint& y);

double objective_value(const WeightedConfiguration& c, const UnitPoint& x);
TangentVector objective_gradient(const WeightedConfiguration& c, const UnitPoint& x);
Mat objective_hessian(const WeightedConfiguration& c, const UnitPoint& x);

/// Orthonormal basis of T_x S^n as the columns of an (n+1) x n matrix.
///
/// The basis is the first n columns of the Householder reflection that maps x
/// to +-e_{n+1}, so in these coordinates x plays the role of the pole.
Mat tangent_basis(const UnitPoint& x);

// n x n restriction Q^T H Q of an ambient Hessian to tangent coordinates.
Mat tangent_block(const Mat& ambient_hessian, const UnitPoint& x);

// Orthogonal projection of v onto T_x S^n.
Vec project_to_tangent(const UnitPoint& x, const Vec& v);

}  // namespace sphsub
