#include "helpers.hpp"

#include "sphsub/errors.hpp"
#include "sphsub/oracles.hpp"
#include "sphsub/sphere.hpp"
#include "sphsub/validate.hpp"

#include <doctest.h>

#include <numbers>

using namespace sphsub;
using testing::max_abs;
using testing::p3;
using testing::v3;

namespace {
constexpr double kPi = std::numbers::pi;

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::ContractViolation;
}
}  // namespace

TEST_CASE("unit points are checked or renormalized") {
  CHECK(kind_of([] { UnitPoint(v3(1.1, 0, 0)); }) == ErrorKind::ContractViolation);
  CHECK(kind_of([] { UnitPoint(Vec::Ones(2).normalized()); }) == ErrorKind::ContractViolation);
  const UnitPoint p = UnitPoint::normalized(v3(3, 4, 0));
  CHECK(p.coords().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(UnitPoint(v3(1 + 5e-10, 0, 0)).coords()[0] == doctest::Approx(1.0));
  CHECK(kind_of([] { TangentVector(UnitPoint::north_pole(), v3(0, 0, 1e-3)); }) == ErrorKind::ContractViolation);
}

TEST_CASE("geodesic distance") {
  CHECK(geodesic_distance(p3(0, 0, 1), p3(1, 0, 0)) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(geodesic_distance(p3(0, 0, 1), p3(0, 0, 1)) == 0.0);
  CHECK(geodesic_distance(p3(1, 0, 0), p3(1, 1, 0)) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(geodesic_distance(p3(1, 0, 0), p3(-1, 0, 0)) == doctest::Approx(kPi).epsilon(1e-15));

  // Accurate where arccos is not: distance 1e-9 is resolved to full relative precision.
  const UnitPoint x = p3(0, 0, 1);
  const UnitPoint y = exp_map(x, v3(1e-9, 0, 0));
  CHECK(geodesic_distance(x, y) == doctest::Approx(1e-9).epsilon(1e-12));

  oracle::Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto a = oracle::random_point(rng, 3), b = oracle::random_point(rng, 3), c = oracle::random_point(rng, 3);
    CHECK(geodesic_distance(a, b) == doctest::Approx(geodesic_distance(b, a)).epsilon(1e-14));
    CHECK(geodesic_distance(a, c) <= geodesic_distance(a, b) + geodesic_distance(b, c) + 1e-12);
    CHECK(geodesic_distance(a, b) == doctest::Approx(oracle::arccos_distance(a.coords(), b.coords())).epsilon(1e-9));
  }
}

TEST_CASE("exp and log maps") {
  const UnitPoint n = p3(0, 0, 1);
  CHECK(max_abs(exp_map(n, v3(0, 0, 0)).coords() - n.coords()) == 0.0);
  CHECK(max_abs(exp_map(n, v3(kPi / 2, 0, 0)).coords() - v3(1, 0, 0)) < 1e-15);
  CHECK(max_abs(exp_map(p3(1, 0, 0), v3(0, kPi, 0)).coords() - v3(-1, 0, 0)) < 1e-15);

  CHECK(log_map(n, n).norm() == 0.0);
  CHECK(max_abs(log_map(n, p3(1, 0, 0)).vec() - v3(kPi / 2, 0, 0)) < 1e-15);
  CHECK(kind_of([&] { log_map(n, p3(0, 0, -1)); }) == ErrorKind::AntipodalPoints);

  oracle::Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    const int dim = 3 + k % 3;
    const UnitPoint x = oracle::random_point(rng, dim);
    const Vec w = oracle::random_tangent(rng, x, 3.0 * (k + 1) / 300.0);
    CHECK(max_abs(log_map(x, exp_map(x, w)).vec() - w) < 1e-9);
    CHECK(max_abs(exp_map(x, w).coords() - oracle::great_circle_point(x.coords(), w)) < 1e-14);
  }
}

TEST_CASE("psi") {
  CHECK(psi(0.0) == 1.0);
  CHECK(psi(kPi / 4) == doctest::Approx(kPi / 4).epsilon(1e-15));
  // mpmath: 0.3825 / tan(0.3825)
  CHECK(psi(0.3825) == doctest::Approx(0.9507488453112923).epsilon(1e-14));
  // series branch joins the direct formula smoothly
  CHECK(psi(0.99e-4) == doctest::Approx(0.99e-4 / std::tan(0.99e-4)).epsilon(1e-15));
  CHECK(psi(1.01e-4) == doctest::Approx(1.01e-4 / std::tan(1.01e-4)).epsilon(1e-15));
  CHECK(kind_of([] { psi(-1e-3); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { psi(kPi / 2); }) == ErrorKind::DomainError);
}

TEST_CASE("squared distance gradient and Hessian") {
  const UnitPoint n = p3(0, 0, 1);
  CHECK(grad_sq_dist(n, n).norm() == 0.0);
  CHECK(max_abs(grad_sq_dist(n, p3(1, 0, 0)).vec() - v3(-kPi, 0, 0)) < 1e-14);

  const Mat H = hessian_sq_dist(n, n);
  CHECK((H - Vec(v3(2, 2, 0)).asDiagonal().toDenseMatrix()).norm() < 1e-15);
  CHECK(kind_of([&] { hessian_sq_dist(n, p3(0, 0, -1)); }) == ErrorKind::AntipodalPoints);

  // Spectrum on the tangent space: 2 along log_x y, 2 psi(d) across, 0 along x.
  oracle::Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const UnitPoint x = oracle::random_point(rng, 4);
    const UnitPoint y = oracle::random_point_near(rng, x, 1.5);
    const double d = geodesic_distance(x, y);
    Eigen::SelfAdjointEigenSolver<Mat> es(hessian_sq_dist(x, y));
    const Vec ev = es.eigenvalues();
    CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12).scale(1));
    CHECK(ev[1] == doctest::Approx(2 * d / std::tan(d)).epsilon(1e-10));
    CHECK(ev[2] == doctest::Approx(2 * d / std::tan(d)).epsilon(1e-10));
    CHECK(ev[3] == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("weighted objective") {
  const UnitPoint a = p3(0, 0, 1), b = p3(1, 0, 0);
  CHECK(objective_value(WeightedConfiguration({a}, {1.0}), a) == 0.0);
  CHECK(objective_value(WeightedConfiguration({a, b}, {0.5, 0.5}), a) ==
        doctest::Approx(kPi * kPi / 8).epsilon(1e-15));
  const UnitPoint x = exp_map(a, v3(0.3, 0, 0));
  CHECK(objective_value(WeightedConfiguration({a, a, a}, {0.125, 0.75, 0.125}), x) ==
        doctest::Approx(0.09).epsilon(1e-14));
  CHECK(objective_gradient(WeightedConfiguration({a, b}, {1.0, 0.0}), a).norm() == 0.0);

  // all points at x: Hessian 2(I - x x^T)
  const Mat H = objective_hessian(WeightedConfiguration({x, x, x}, {0.125, 0.75, 0.125}), x);
  CHECK((H - 2 * (Mat::Identity(3, 3) - x.coords() * x.coords().transpose())).norm() < 1e-14);
  // LR configuration at t = 0: all weight on x_0, tangent block 2I
  const WeightedConfiguration lr0({exp_map(a, v3(0.2, 0, 0)), a, exp_map(a, v3(-0.2, 0.05, 0))}, {0, 1, 0});
  CHECK((tangent_block(objective_hessian(lr0, a), a) - 2 * Mat::Identity(2, 2)).norm() < 1e-15);

  CHECK(WeightedConfiguration({a, b, a}, {-0.25, 1.5, -0.25}).alpha_minus() == 0.5);
  CHECK(kind_of([&] { WeightedConfiguration({a, b}, {0.5, 0.6}); }) == ErrorKind::ContractViolation);
  CHECK(kind_of([&] { WeightedConfiguration({a, b}, {1.0}); }) == ErrorKind::ContractViolation);
}

TEST_CASE("gradient and Hessian agree with finite differences") {
  oracle::Rng rng(2024);
  const auto g = check_gradient_fd(rng, 100);
  const auto h = check_hessian_fd(rng, 100);
  INFO("gradient max rel error " << g.max_error << ", Hessian " << h.max_error);
  CHECK(g.passed());
  CHECK(h.passed());
}

TEST_CASE("tangent basis and projection") {
  oracle::Rng rng(5);
  for (int k = 0; k < 30; ++k) {
    const UnitPoint x = oracle::random_point(rng, 3 + k % 4);
    const Mat B = tangent_basis(x);
    CHECK(B.cols() == x.ambient_dim() - 1);
    CHECK((B.transpose() * B - Mat::Identity(B.cols(), B.cols())).norm() < 1e-14);
    CHECK(max_abs(B.transpose() * x.coords()) < 1e-15);
    const Vec v = Vec::Random(x.ambient_dim());
    CHECK(std::abs(project_to_tangent(x, v).dot(x.coords())) < 1e-15);
  }
}

TEST_CASE("rotation equivariance of the primitives") {
  oracle::Rng rng(17);
  for (int k = 0; k < 50; ++k) {
    const Mat R = oracle::random_rotation(rng, 3);
    const UnitPoint x = oracle::random_point(rng, 3), y = oracle::random_point_near(rng, x, 2.0);
    const UnitPoint Rx(R * x.coords(), UnitPoint::Normalize::Renormalize), Ry(R * y.coords(), UnitPoint::Normalize::Renormalize);
    CHECK(geodesic_distance(Rx, Ry) == doctest::Approx(geodesic_distance(x, y)).epsilon(1e-12));
    CHECK(max_abs(log_map(Rx, Ry).vec() - R * log_map(x, y).vec()) < 1e-12);
    CHECK((hessian_sq_dist(Rx, Ry) - R * hessian_sq_dist(x, y) * R.transpose()).norm() < 1e-11);
  }
}
