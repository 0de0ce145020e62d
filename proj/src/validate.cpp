#include "sphsub/validate.hpp"

#include "sphsub/errors.hpp"
#include "sphsub/frechet.hpp"
#include "sphsub/io.hpp"

#include <algorithm>
#include <cmath>

namespace sphsub {

namespace {

using oracle::Rng;

std::vector<Vec> coords_of(const std::vector<UnitPoint>& pts) {
  std::vector<Vec> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.coords());
  return out;
}

struct FdInstance {
  std::vector<UnitPoint> points;
  std::vector<double> weights;
  UnitPoint x;
};

FdInstance random_fd_instance(Rng& rng) {
  const int dim = 3 + static_cast<int>(rng() % 3);
  const std::size_t count = 2 + rng() % 4;
  UnitPoint x = oracle::random_point(rng, dim);
  std::vector<UnitPoint> pts;
  for (std::size_t j = 0; j < count; ++j) pts.push_back(oracle::random_point_near(rng, x, 1.2));
  return {pts, oracle::random_weights(rng, count, true, 0.5), x};
}

CheckResult make_check(std::string name, double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  return c;
}

void record(CheckResult& c, double err) {
  ++c.trials;
  c.max_error = std::max(c.max_error, err);
  if (!(err <= c.tolerance)) ++c.violations;
}

}  // namespace

CheckResult check_exp_log_roundtrip(Rng& rng, std::size_t samples) {
  CheckResult c = make_check("exp_log_roundtrip", 1e-9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const int dim = 3 + static_cast<int>(rng() % 3);
    const UnitPoint x = oracle::random_point(rng, dim);
    const Vec w = oracle::random_tangent(rng, x, 3.0 * u(rng));
    const TangentVector back = log_map(x, exp_map(x, w));
    double err = (back.vec() - w).lpNorm<Eigen::Infinity>();

    const UnitPoint y = oracle::random_point_near(rng, x, 3.0);
    err = std::max(err, (exp_map(log_map(x, y)).coords() - y.coords()).lpNorm<Eigen::Infinity>());
    record(c, err);
  }
  c.note = "tangent lengths up to 3.0, dimensions 3-5";
  return c;
}

CheckResult check_gradient_fd(Rng& rng, std::size_t configurations) {
  CheckResult c = make_check("gradient_vs_finite_differences", 1e-5);
  for (std::size_t s = 0; s < configurations; ++s) {
    const auto inst = random_fd_instance(rng);
    const auto pts = coords_of(inst.points);
    auto f = [&](const Vec& y) { return oracle::weighted_sq_distance(pts, inst.weights, y); };
    const Mat B = oracle::gram_schmidt_tangent_basis(inst.x.coords());
    const Vec fd = oracle::fd_gradient(f, inst.x.coords(), B, 1e-5);
    const Vec g = objective_gradient(WeightedConfiguration(inst.points, inst.weights), inst.x).vec();
    record(c, (g - fd).norm() / std::max(fd.norm(), 1e-3));
  }
  c.note = "relative to max(|fd|, 1e-3); central differences, h = 1e-5";
  return c;
}

CheckResult check_hessian_fd(Rng& rng, std::size_t configurations) {
  CheckResult c = make_check("hessian_vs_finite_differences", 1e-5);
  for (std::size_t s = 0; s < configurations; ++s) {
    const auto inst = random_fd_instance(rng);
    const auto pts = coords_of(inst.points);
    auto f = [&](const Vec& y) { return oracle::weighted_sq_distance(pts, inst.weights, y); };
    const Mat B = oracle::gram_schmidt_tangent_basis(inst.x.coords());
    const Mat fd = oracle::fd_hessian(f, inst.x.coords(), B, 1e-4);
    const Mat H = B.transpose() * objective_hessian(WeightedConfiguration(inst.points, inst.weights), inst.x) * B;
    record(c, (H - fd).norm() / std::max(fd.norm(), 1e-3));
  }
  c.note = "Frobenius, relative to max(|fd|, 1e-3); second differences of f o exp_x, h = 1e-4";
  return c;
}

CheckResult check_karcher_grid(Rng& rng, std::size_t instances) {
  CheckResult c = make_check("karcher_vs_grid_search", 2e-6);
  for (std::size_t s = 0; s < instances; ++s) {
    const UnitPoint center = oracle::random_point(rng, 3);
    const std::size_t count = 2 + rng() % 3;
    std::vector<UnitPoint> pts;
    for (std::size_t j = 0; j < count; ++j) pts.push_back(oracle::random_point_near(rng, center, 0.5));
    const auto w = oracle::random_weights(rng, count, s % 2 == 1, 0.1);

    Vec avg = Vec::Zero(3);
    for (std::size_t j = 0; j < count; ++j) avg += w[j] * pts[j].coords();
    const Vec start = avg / avg.norm();
    const Vec ref = oracle::grid_search_mean(coords_of(pts), w, start, 0.3);

    const UnitPoint got = karcher_mean(WeightedConfiguration(pts, w), {1e-13, 200, SolverSettings::Method::NewtonTangent});
    record(c, oracle::arccos_distance(got.coords(), ref));
  }
  c.note = "S^2, 2-4 points in a ball of radius 0.5; odd instances carry negative weights";
  return c;
}

std::pair<CheckResult, CheckResult> check_gamma_speed(Rng& rng, const CertificateSpec& spec, std::size_t stencils) {
  CheckResult bound = make_check("gamma_speed_bound[" + spec.label + "]", 0.0);
  CheckResult agree = make_check("gamma_fd_vs_analytic[" + spec.label + "]", 1e-5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::pair<const CoefficientPath*, double> rules[] = {{&spec.even_path, spec.C0_even},
                                                             {&spec.odd_path, spec.C0_odd}};
  double worst_ratio = 0.0;
  for (const auto& [path, C0] : rules) {
    if (path->trivial()) continue;
    for (std::size_t s = 0; s < stencils; ++s) {
      const double edge = spec.r0 * (s % 2 == 0 ? 1.0 : 0.5 + 0.5 * u(rng));
      const auto chain = oracle::random_chain(rng, path->size(), edge);
      double r = 0.0;
      for (std::size_t j = 1; j < chain.size(); ++j) r = std::max(r, geodesic_distance(chain[j - 1], chain[j]));
      for (const auto& g : trace_gamma(chain, *path, 21)) {
        const double b = speed_bound(*path, r, C0, g.t);
        const double measured = std::max(g.analytic_speed, g.fd_speed);
        worst_ratio = std::max(worst_ratio, measured / b);
        record(bound, std::max(0.0, measured - b * (1 + 1e-9)));
        record(agree, std::abs(g.fd_speed - g.analytic_speed) / std::max(g.analytic_speed, 1e-3 * r));
      }
    }
  }
  bound.note = "max measured / bound = " + std::to_string(worst_ratio);
  return {bound, agree};
}

DominationResult empirical_domination(const Certificate& cert, const Mask& mask, Rng& rng, std::size_t polygons,
                                      int levels) {
  DominationResult out{cert.scheme, cert.r0, cert.mu, cert.displacement_coeff, polygons, levels};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t p = 0; p < polygons; ++p) {
    const std::size_t n = 4 + rng() % 7;
    const double target = cert.r0 * (p % 4 == 0 ? 0.2 + 0.8 * u(rng) : 0.999);
    const PointSequence poly = oracle::random_closed_polygon(rng, n, target);
    for (const auto& level : iterate(mask, poly, levels)) {
      const auto& d = level.diagnostics;
      if (d.delta_before == 0.0) continue;
      const double disp = d.displacement / d.delta_before;
      out.max_contraction = std::max(out.max_contraction, d.contraction_ratio);
      out.max_displacement_ratio = std::max(out.max_displacement_ratio, disp);
      if (d.contraction_ratio > cert.mu || disp > cert.displacement_coeff) ++out.violations;
    }
  }
  return out;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report{options.seed, {}};
  Rng rng(options.seed);
  report.checks.push_back(check_exp_log_roundtrip(rng, options.roundtrip_samples));
  report.checks.push_back(check_gradient_fd(rng, options.fd_configurations));
  report.checks.push_back(check_hessian_fd(rng, options.fd_configurations));
  report.checks.push_back(check_karcher_grid(rng, options.karcher_instances));

  for (const auto& name : builtin_mask_names()) {
    const Certificate* widest = nullptr;
    std::vector<Certificate> certs;
    const auto specs = builtin_certificate_specs(name);
    for (const auto& spec : specs) {
      auto [bound, agree] = check_gamma_speed(rng, spec, options.gamma_stencils);
      if (bound.trials > 0) {
        report.checks.push_back(bound);
        report.checks.push_back(agree);
      }
      certs.push_back(certify(spec));
    }
    for (const auto& c : certs) {
      if (c.certified && (!widest || c.r0 > widest->r0)) widest = &c;
    }
    if (!widest || options.domination_polygons == 0) continue;
    const auto d = empirical_domination(*widest, builtin_mask(name), rng, options.domination_polygons,
                                        options.domination_levels);
    CheckResult c = make_check("empirical_domination[" + name + "]", 0.0);
    c.trials = d.polygons;
    c.violations = d.violations;
    c.max_error = std::max(d.max_contraction - d.mu, d.max_displacement_ratio - d.displacement_coeff);
    c.note = "max contraction " + std::to_string(d.max_contraction) + " vs mu " + std::to_string(d.mu) +
             ", max displacement/delta " + std::to_string(d.max_displacement_ratio) + " vs " +
             std::to_string(d.displacement_coeff);
    report.checks.push_back(c);
  }
  return report;
}

nlohmann::json validation_to_json(const ValidationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"tolerance", c.tolerance},
                      {"max_error", c.max_error},
                      {"margin", c.tolerance - c.max_error},
                      {"trials", c.trials},
                      {"violations", c.violations},
                      {"passed", c.passed()},
                      {"note", c.note}});
  }
  return {{"schema_version", kReportSchemaVersion}, {"seed", report.seed}, {"passed", report.passed()}, {"checks", checks}};
}

}  // namespace sphsub
