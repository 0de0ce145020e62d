#include "sphsub/sphere.hpp"

#include "sphsub/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sphsub {

namespace {

void require_same_dim(const UnitPoint& x, const UnitPoint& y) {
  if (x.ambient_dim() != y.ambient_dim()) {
    throw Error(ErrorKind::ContractViolation, "points of different dimensions");
  }
}

// Inner product with the clamping contract: deviations up to 1e-9 outside
// [-1, 1] are rounding, anything larger is a broken invariant.
double clamped_inner(const UnitPoint& x, const UnitPoint& y) {
  double c = x.coords().dot(y.coords());
  if (c > 1.0 + kUnitTolerance || c < -1.0 - kUnitTolerance) {
    std::ostringstream os;
    os << "inner product " << c << " outside [-1, 1]";
    throw Error(ErrorKind::ContractViolation, os.str());
  }
  return std::clamp(c, -1.0, 1.0);
}

void require_not_antipodal(const UnitPoint& x, const UnitPoint& y) {
  if (clamped_inner(x, y) <= -1.0 + kAntipodalTolerance) {
    throw Error(ErrorKind::AntipodalPoints, "log map undefined at the antipode");
  }
}

}  // namespace

UnitPoint::UnitPoint(Vec coords, Normalize policy) : coords_(std::move(coords)) {
  if (coords_.size() < 3) {
    throw Error(ErrorKind::ContractViolation, "ambient dimension must be at least 3 (n >= 2)");
  }
  if (!coords_.allFinite()) {
    throw Error(ErrorKind::ContractViolation, "non-finite coordinates");
  }
  const double n = coords_.norm();
  if (policy == Normalize::Renormalize) {
    if (n == 0.0) throw Error(ErrorKind::ContractViolation, "cannot normalize the zero vector");
    coords_ /= n;
  } else if (std::abs(n - 1.0) > kUnitTolerance) {
    std::ostringstream os;
    os << "norm " << n << " is not 1 within " << kUnitTolerance;
    throw Error(ErrorKind::ContractViolation, os.str());
  }
}

UnitPoint UnitPoint::north_pole(int ambient_dim) {
  Vec v = Vec::Zero(ambient_dim);
  v[ambient_dim - 1] = 1.0;
  return UnitPoint(std::move(v));
}

TangentVector::TangentVector(UnitPoint base, Vec vec) : base_(std::move(base)), vec_(std::move(vec)) {
  if (vec_.size() != base_.ambient_dim()) {
    throw Error(ErrorKind::ContractViolation, "tangent vector dimension mismatch");
  }
  const double ip = vec_.dot(base_.coords());
  if (std::abs(ip) > kUnitTolerance * std::max(1.0, vec_.norm())) {
    std::ostringstream os;
    os << "vector not tangent: <v, x> = " << ip;
    throw Error(ErrorKind::ContractViolation, os.str());
  }
}

TangentVector TangentVector::zero(const UnitPoint& base) {
  return TangentVector(base, Vec::Zero(base.ambient_dim()));
}

WeightedConfiguration::WeightedConfiguration(std::vector<UnitPoint> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty() || points_.size() != weights_.size()) {
    throw Error(ErrorKind::ContractViolation, "points and weights must be non-empty and of equal length");
  }
  double sum = 0.0;
  for (double w : weights_) sum += w;
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << sum << ", expected 1";
    throw Error(ErrorKind::ContractViolation, os.str());
  }
  for (const auto& p : points_) require_same_dim(points_.front(), p);
}

double WeightedConfiguration::alpha_minus() const {
  double s = 0.0;
  for (double w : weights_) {
    if (w < 0.0) s -= w;
  }
  return s;
}

double geodesic_distance(const UnitPoint& x, const UnitPoint& y) {
  require_same_dim(x, y);
  clamped_inner(x, y);
  // 2 atan2(|x - y|, |x + y|) equals arccos<x, y> for unit vectors and keeps
  // full relative accuracy for nearby and nearly antipodal pairs.
  return 2.0 * std::atan2((x.coords() - y.coords()).norm(), (x.coords() + y.coords()).norm());
}

UnitPoint exp_map(const UnitPoint& base, const Vec& w) {
  const double n = w.norm();
  if (n == 0.0) return base;
  const double sinc = n < 1e-8 ? 1.0 - n * n / 6.0 : std::sin(n) / n;
  return UnitPoint::normalized(std::cos(n) * base.coords() + sinc * w);
}

UnitPoint exp_map(const TangentVector& w) { return exp_map(w.base(), w.vec()); }

TangentVector log_map(const UnitPoint& x, const UnitPoint& y) {
  require_same_dim(x, y);
  require_not_antipodal(x, y);
  // Tangential part of y - x; direction of the geodesic from x towards y.
  const Vec d = y.coords() - x.coords();
  Vec v = d - d.dot(x.coords()) * x.coords();
  const double vn = v.norm();
  if (vn == 0.0) return TangentVector::zero(x);
  const double dist = geodesic_distance(x, y);
  v *= dist / vn;
  // Remove the last rounding residue in the radial direction.
  v -= v.dot(x.coords()) * x.coords();
  return TangentVector(x, std::move(v));
}

double psi(double s) {
  if (!(s >= 0.0) || s >= std::numbers::pi / 2.0) {
    std::ostringstream os;
    os << "psi(s) requires 0 <= s < pi/2, got s = " << s;
    throw Error(ErrorKind::DomainError, os.str());
  }
  if (s < 1e-4) {
    const double s2 = s * s;
    return 1.0 - s2 / 3.0 - s2 * s2 / 45.0;
  }
  return s / std::tan(s);
}

TangentVector grad_sq_dist(const UnitPoint& x, const UnitPoint& y) {
  TangentVector l = log_map(x, y);
  return TangentVector(x, -2.0 * l.vec());
}

Mat hessian_sq_dist(const UnitPoint& x, const UnitPoint& y) {
  const int dim = x.ambient_dim();
  const Vec& xc = x.coords();
  const Mat proj = Mat::Identity(dim, dim) - xc * xc.transpose();
  const TangentVector l = log_map(x, y);
  const double rho = l.norm();
  if (rho == 0.0) return 2.0 * proj;
  const Vec v = l.vec() / rho;
  const Mat vvt = v * v.transpose();
  // psi is only needed up to rho < pi here; the cut at pi/2 belongs to the
  // certificate usage, so evaluate s/tan(s) directly beyond it.
  const double p = rho < std::numbers::pi / 2.0 ? psi(rho) : rho / std::tan(rho);
  return 2.0 * (vvt + p * (proj - vvt));
}

double objective_value(const WeightedConfiguration& c, const UnitPoint& x) {
  double f = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c.weights()[j] == 0.0) continue;
    require_not_antipodal(x, c.points()[j]);
    const double d = geodesic_distance(c.points()[j], x);
    f += c.weights()[j] * d * d;
  }
  return f;
}

TangentVector objective_gradient(const WeightedConfiguration& c, const UnitPoint& x) {
  Vec g = Vec::Zero(x.ambient_dim());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c.weights()[j] == 0.0) continue;
    g -= 2.0 * c.weights()[j] * log_map(x, c.points()[j]).vec();
  }
  return TangentVector(x, std::move(g));
}

Mat objective_hessian(const WeightedConfiguration& c, const UnitPoint& x) {
  const int dim = x.ambient_dim();
  Mat h = Mat::Zero(dim, dim);
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c.weights()[j] == 0.0) continue;
    h += c.weights()[j] * hessian_sq_dist(x, c.points()[j]);
  }
  return h;
}

Mat tangent_basis(const UnitPoint& x) {
  const int dim = x.ambient_dim();
  const Vec& xc = x.coords();
  // Reflection R = I - 2uu^T/|u|^2 with R x = s e_last. Choosing s = -sign(x_last)
  // keeps u = x - s e_last away from zero.
  const double s = xc[dim - 1] >= 0.0 ? -1.0 : 1.0;
  Vec u = xc;
  u[dim - 1] -= s;
  const Mat refl = Mat::Identity(dim, dim) - (2.0 / u.squaredNorm()) * u * u.transpose();
  return refl.leftCols(dim - 1);
}

Mat tangent_block(const Mat& ambient_hessian, const UnitPoint& x) {
  const Mat q = tangent_basis(x);
  return q.transpose() * ambient_hessian * q;
}

Vec project_to_tangent(const UnitPoint& x, const Vec& v) {
  return v - v.dot(x.coords()) * x.coords();
}

}  // namespace sphsub
