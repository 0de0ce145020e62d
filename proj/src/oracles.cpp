#include "sphsub/oracles.hpp"

#include "sphsub/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sphsub::oracle {

double arccos_distance(const Vec& x, const Vec& y) {
  return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

Vec great_circle_point(const Vec& x, const Vec& w) {
  const double n = w.norm();
  if (n == 0.0) return x;
  return std::cos(n) * x + (std::sin(n) / n) * w;
}

double weighted_sq_distance(const std::vector<Vec>& points, const std::vector<double>& weights, const Vec& x) {
  double f = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double d = arccos_distance(x, points[j]);
    f += weights[j] * d * d;
  }
  return f;
}

Mat gram_schmidt_tangent_basis(const Vec& x) {
  const int m = static_cast<int>(x.size());
  Mat B(m, m - 1);
  std::vector<Vec> done{x / x.norm()};
  int col = 0;
  for (int k = 0; k < m && col < m - 1; ++k) {
    Vec e = Vec::Unit(m, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : done) e -= e.dot(q) * q;
    }
    if (e.norm() < 1e-6) continue;
    e.normalize();
    done.push_back(e);
    B.col(col++) = e;
  }
  return B;
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, const Mat& basis, double h) {
  Vec g = Vec::Zero(x.size());
  for (int a = 0; a < basis.cols(); ++a) {
    const Vec e = basis.col(a);
    const double d = (f(great_circle_point(x, h * e)) - f(great_circle_point(x, -h * e))) / (2 * h);
    g += d * e;
  }
  return g;
}

Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x, const Mat& basis, double h) {
  const int n = static_cast<int>(basis.cols());
  Mat H(n, n);
  const double f0 = f(x);
  for (int a = 0; a < n; ++a) {
    const Vec ea = basis.col(a);
    H(a, a) = (f(great_circle_point(x, h * ea)) - 2 * f0 + f(great_circle_point(x, -h * ea))) / (h * h);
    for (int b = a + 1; b < n; ++b) {
      const Vec eb = basis.col(b);
      const double v = (f(great_circle_point(x, h * (ea + eb))) - f(great_circle_point(x, h * (ea - eb))) -
                        f(great_circle_point(x, h * (eb - ea))) + f(great_circle_point(x, -h * (ea + eb)))) /
                       (4 * h * h);
      H(a, b) = H(b, a) = v;
    }
  }
  return H;
}

Vec grid_search_mean(const std::vector<Vec>& points, const std::vector<double>& weights, const Vec& center,
                     double window, double coarse_step, double final_step) {
  if (center.size() != 3) throw Error(ErrorKind::DimensionUnsupported, "grid search needs points on S^2");
  const Mat B = gram_schmidt_tangent_basis(center);
  auto value = [&](double u, double v) {
    return weighted_sq_distance(points, weights, great_circle_point(center, u * B.col(0) + v * B.col(1)));
  };

  double bu = 0.0, bv = 0.0, best = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::ceil(window / coarse_step));
  for (int i = -steps; i <= steps; ++i) {
    for (int k = -steps; k <= steps; ++k) {
      const double val = value(i * coarse_step, k * coarse_step);
      if (val < best) {
        best = val;
        bu = i * coarse_step;
        bv = k * coarse_step;
      }
    }
  }
  for (double step = coarse_step / 10; step >= final_step * 0.999; step /= 10) {
    const double cu = bu, cv = bv;
    for (int i = -20; i <= 20; ++i) {
      for (int k = -20; k <= 20; ++k) {
        const double u = cu + i * step, v = cv + k * step;
        const double val = value(u, v);
        if (val < best) {
          best = val;
          bu = u;
          bv = v;
        }
      }
    }
  }
  return great_circle_point(center, bu * B.col(0) + bv * B.col(1));
}

UnitPoint random_point(Rng& rng, int ambient_dim) {
  std::normal_distribution<double> g;
  Vec v(ambient_dim);
  do {
    for (int i = 0; i < ambient_dim; ++i) v[i] = g(rng);
  } while (v.norm() < 1e-3);
  return UnitPoint::normalized(v);
}

Vec random_tangent(Rng& rng, const UnitPoint& x, double length) {
  std::normal_distribution<double> g;
  const Vec& c = x.coords();
  Vec v(c.size());
  do {
    for (int i = 0; i < v.size(); ++i) v[i] = g(rng);
    v -= v.dot(c) * c;
  } while (v.norm() < 1e-3);
  return length * v / v.norm();
}

UnitPoint random_point_near(Rng& rng, const UnitPoint& center, double max_distance) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double n = center.ambient_dim() - 1;
  // Radius drawn so points are roughly uniform in the geodesic ball.
  const double d = max_distance * std::pow(u(rng), 1.0 / n);
  return UnitPoint::normalized(great_circle_point(center.coords(), random_tangent(rng, center, d)));
}

Mat random_rotation(Rng& rng, int dim) {
  std::normal_distribution<double> g;
  Mat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) A(i, k) = g(rng);
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ();
  const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    if (R(i, i) < 0) Q.col(i) *= -1;
  }
  if (Q.determinant() < 0) Q.col(0) *= -1;
  return Q;
}

std::vector<double> random_weights(Rng& rng, std::size_t count, bool allow_negative, double max_negative) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(count);
  if (count == 1) return {1.0};
  double neg = 0.0;
  std::vector<bool> is_neg(count, false);
  if (allow_negative && count >= 3) {
    const std::size_t how_many = 1 + rng() % 2;
    for (std::size_t k = 0; k < how_many; ++k) {
      const std::size_t j = rng() % count;
      if (is_neg[j]) continue;
      is_neg[j] = true;
      w[j] = -u(rng) * max_negative / how_many;
      neg += w[j];
    }
  }
  double pos = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    if (is_neg[j]) continue;
    w[j] = -std::log(std::max(u(rng), 1e-12));
    pos += w[j];
  }
  // Positive part scaled so the total is one.
  const double scale = (1.0 - neg) / pos;
  for (std::size_t j = 0; j < count; ++j) {
    if (!is_neg[j]) w[j] *= scale;
  }
  return w;
}

std::vector<UnitPoint> random_chain(Rng& rng, std::size_t count, double max_edge, int ambient_dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<UnitPoint> out{random_point(rng, ambient_dim)};
  while (out.size() < count) {
    // Mostly long steps: they are the ones that stress the bounds.
    const double len = max_edge * (u(rng) < 0.7 ? 1.0 - 0.05 * u(rng) : u(rng));
    const UnitPoint& last = out.back();
    out.push_back(UnitPoint::normalized(great_circle_point(last.coords(), random_tangent(rng, last, len))));
  }
  return out;
}

PointSequence random_closed_polygon(Rng& rng, std::size_t count, double max_edge) {
  if (count < 3) throw Error(ErrorKind::ContractViolation, "closed polygons need at least 3 vertices");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double two_pi = 2 * std::numbers::pi;
  for (;;) {
    const UnitPoint c = random_point(rng, 3);
    const Mat B = gram_schmidt_tangent_basis(c.coords());
    // Small-circle radius with nominal edge length close to max_edge.
    const double nominal = max_edge * (0.5 + 0.45 * u(rng));
    const double rho = std::min(1.2, nominal * count / two_pi);
    const double angle_jitter = 0.45 * u(rng);
    const double radius_jitter = 0.4 * u(rng);
    const double phase = two_pi * u(rng);

    PointSequence s;
    s.boundary = Boundary::Periodic;
    for (std::size_t i = 0; i < count; ++i) {
      const double a = phase + two_pi * (i + angle_jitter * (u(rng) - 0.5)) / count;
      const double r = rho * (1.0 + radius_jitter * (2 * u(rng) - 1));
      const Vec w = r * (std::cos(a) * B.col(0) + std::sin(a) * B.col(1));
      s.points.push_back(UnitPoint::normalized(great_circle_point(c.coords(), w)));
    }
    const double d = max_edge_length(s);
    if (d > 0 && d < max_edge) return s;
  }
}

}  // namespace sphsub::oracle
