// Acceptance criteria: one PASS/FAIL line per criterion, details indented
// below it. Exit status is the number of failed criteria.

#include "sphsub/certify.hpp"
#include "sphsub/cli.hpp"
#include "sphsub/io.hpp"
#include "sphsub/oracles.hpp"
#include "sphsub/validate.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace sphsub;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back((ok ? "ok   " : "MISS ") + what);
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Certificate certify_builtin(const std::string& scheme, double r0) {
  for (const auto& spec : builtin_certificate_specs(scheme)) {
    if (spec.r0 == r0) return certify(spec);
  }
  throw std::runtime_error("no built-in spec for " + scheme + " at r0 = " + num(r0));
}

const BootstrapResult& moving_rule(const Certificate& c) { return c.even.C1 >= c.odd.C1 ? c.even : c.odd; }

Outcome lane_riesenfeld() {
  Outcome o;
  const Certificate a = certify_builtin("lane-riesenfeld-cubic", 0.25);
  o.require(a.certified, "r0 = 0.25, C0 = 0.53 certified" + (a.certified ? std::string() : ": " + a.failure));
  o.require(a.C1 <= 0.52 + 5e-3, "C1 = " + num(a.C1) + " <= 0.525");
  o.require(a.even.distance_coeff <= 0.39, "dist(x_0, x*) / r <= " + num(a.even.distance_coeff) + " <= 0.39");
  o.require(a.mu <= 0.89, "mu = " + num(a.mu) + " <= 0.89");

  const Certificate b = certify_builtin("lane-riesenfeld-cubic", 0.6);
  o.require(b.certified, "r0 = 0.6, C0 = 0.69 certified" + (b.certified ? std::string() : ": " + b.failure));
  o.require(b.C1 <= 0.68 + 5e-3, "C1 = " + num(b.C1) + " <= 0.685");
  return o;
}

Outcome four_point() {
  Outcome o;
  const Certificate c = certify_builtin("four-point", 0.31);
  const BootstrapResult& odd = c.odd;
  o.require(c.certified, "omega = 1/16, r0 = 0.31, C0 = 0.45 certified" + (c.certified ? std::string() : ": " + c.failure));
  o.require(odd.C1 < 0.45, "speed inequality: C1 = " + num(odd.C1) + " < C0 = 0.45");
  o.require(odd.distance_coeff < 0.5, "displacement inequality: " + num(odd.distance_coeff) + " < 1/2");
  o.require(c.initial_speed_coeff <= 50.0 / 198 + 1e-4,
            "initial speed coefficient " + num(c.initial_speed_coeff) + " <= 50/198 + 1e-4 = " + num(50.0 / 198 + 1e-4));
  o.require(std::abs(c.well_defined_radius_reported - 0.31) <= 0.005,
            "well-definedness radius " + num(c.well_defined_radius_reported) + " (exact " +
                num(c.well_defined_radius) + ", two decimals rounded down) within 0.31 +- 0.005");
  return o;
}

Outcome negative_mask() {
  Outcome o;
  const Certificate c = certify_builtin("neg-13-21", 0.4);
  o.require(c.certified, "r0 = 0.4, C0 = 0.16 certified" + (c.certified ? std::string() : ": " + c.failure));
  o.require(c.initial_speed_coeff <= 0.14 + 1e-3, "initial speed coefficient " + num(c.initial_speed_coeff) + " <= 0.141");
  o.require(std::abs(c.well_defined_radius_reported - 0.4) <= 0.005,
            "well-definedness radius " + num(c.well_defined_radius_reported) + " (exact " +
                num(c.well_defined_radius) + ") within 0.4 +- 0.005");
  o.require(moving_rule(c).distance_coeff < 0.15, "displacement inequality: " + num(moving_rule(c).distance_coeff) + " < 0.15");
  return o;
}

Outcome intermediate_constants() {
  Outcome o;
  const auto lr = builtin_certificate_specs("lane-riesenfeld-cubic").front();
  const double two_minus_L1 = 2 - L_bound(lr.even_path, 0.25, 0.53, 1.0);
  o.require(std::abs(two_minus_L1 - 1.97) <= 0.005, "LR 2 - L(1) = " + num(two_minus_L1) + " within 1.97 +- 0.005");
  const auto fp = builtin_certificate_specs("four-point").front();
  const double L0 = L_bound(fp.odd_path, 0.31, 0.45, 0.0);
  o.require(std::abs(L0 - 0.016) <= 0.005, "4-point L(0) = " + num(L0) + " within 0.016 +- 0.005");
  return o;
}

Outcome empirical_domination_all() {
  Outcome o;
  oracle::Rng rng(20240611);
  for (const auto& name : builtin_mask_names()) {
    const double r0 = *certified_radius(name);
    const Certificate c = certify_builtin(name, r0);
    const auto d = empirical_domination(c, builtin_mask(name), rng, 1000, 4);
    o.require(d.violations == 0 && d.polygons >= 1000,
              name + ": " + std::to_string(d.polygons) + " polygons, delta < " + num(r0) + ", k = 4: max ratio " +
                  num(d.max_contraction) + " <= mu " + num(d.mu) + ", max displacement/delta " +
                  num(d.max_displacement_ratio) + " <= " + num(d.displacement_coeff) + ", violations " +
                  std::to_string(d.violations));
  }
  return o;
}

Outcome oracle_suite() {
  Outcome o;
  oracle::Rng rng(1);
  const CheckResult checks[] = {check_gradient_fd(rng, 100), check_hessian_fd(rng, 100), check_karcher_grid(rng, 20),
                                check_exp_log_roundtrip(rng, 1000)};
  for (const auto& c : checks) {
    o.require(c.passed(), c.name + ": " + std::to_string(c.trials) + " trials, max error " + num(c.max_error) +
                              " <= " + num(c.tolerance));
  }
  return o;
}

PointSequence polygon_with_edge(int n, double edge) {
  const double rho = std::asin(std::sin(edge / 2) / std::sin(std::numbers::pi / n));
  PointSequence s;
  for (int k = 0; k < n; ++k) {
    const double a = 2 * std::numbers::pi * k / n;
    Vec v(3);
    v << std::sin(rho) * std::cos(a), std::sin(rho) * std::sin(a), std::cos(rho);
    s.points.push_back(UnitPoint::normalized(v));
  }
  return s;
}

Outcome corollary_gates() {
  Outcome o;
  const std::pair<std::string, double> thresholds[] = {
      {"lane-riesenfeld-cubic", 0.6}, {"four-point", 0.31}, {"neg-13-21", 0.4}};
  oracle::Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto tmp = std::filesystem::temp_directory_path() / "sphsub_acceptance_gate";
  for (const auto& [name, thr] : thresholds) {
    int wrong = 0, trials = 0;
    for (double e : {thr + 1e-9, thr + 1e-3, thr + 0.05, 1.2, thr - 1e-3, thr - 0.05, 0.1}) {
      const auto g = convergence_gate(name, polygon_with_edge(5, e));
      wrong += g.accepted != (g.delta < thr);
      ++trials;
    }
    for (int k = 0; k < 200; ++k) {
      const double target = thr * (0.5 + u(rng));
      const auto poly = oracle::random_closed_polygon(rng, 6 + k % 6, target);
      const auto g = convergence_gate(name, poly);
      wrong += g.accepted != (max_edge_length(poly) < thr) || g.threshold != thr;
      ++trials;
    }
    // end to end through the command line: exit 1 and a remediation hint
    std::ostringstream csv;
    write_points_csv(csv, polygon_with_edge(5, thr + 1e-3));
    write_text_file(tmp / "in.csv", csv.str());
    std::ostringstream out, err;
    const int code = run_cli({"subdivide", "--scheme", name, "--input", (tmp / "in.csv").string(), "--output",
                              (tmp / "out").string()},
                             out, err);
    o.require(wrong == 0 && code == kExitFailure && err.str().find("hint") != std::string::npos,
              name + ": threshold " + num(thr) + ", " + std::to_string(trials) + " gate decisions, " +
                  std::to_string(wrong) + " wrong; CLI exit " + std::to_string(code));
  }
  std::filesystem::remove_all(tmp);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 Lane-Riesenfeld certificate", lane_riesenfeld},
      {"2 4-point certificate", four_point},
      {"3 negative-mask certificate", negative_mask},
      {"4 intermediate constants", intermediate_constants},
      {"5 empirical domination", empirical_domination_all},
      {"6 oracle suite", oracle_suite},
      {"7 corollary gates", corollary_gates},
  };
  int failed = 0;
  for (const auto& [label, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << label << "\n";
    for (const auto& d : o.details) std::cout << "       " << d << "\n";
  }
  std::cout << (7 - failed) << "/7 criteria pass\n";
  return failed;
}
