#pragma once

// Seeded checks of the library against the independent oracles.

#include "sphsub/certify.hpp"
#include "sphsub/oracles.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sphsub {

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double max_error = 0.0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::string note;

  bool passed() const { return trials > 0 && violations == 0; }
};

struct ValidationOptions {
  std::uint64_t seed = 1;
  std::size_t roundtrip_samples = 1000;
  std::size_t fd_configurations = 100;
  std::size_t karcher_instances = 20;
  std::size_t gamma_stencils = 100;          // per rule and certificate
  std::size_t domination_polygons = 100;     // per scheme
  int domination_levels = 4;
};

// max |exp_x(log_x y) - y| and max |log_x(exp_x w) - w| over random samples.
CheckResult check_exp_log_roundtrip(oracle::Rng& rng, std::size_t samples);
// Relative errors against central differences of the arccos objective.
CheckResult check_gradient_fd(oracle::Rng& rng, std::size_t configurations);
CheckResult check_hessian_fd(oracle::Rng& rng, std::size_t configurations);
// Distance from karcher_mean to the grid-search minimiser on S^2.
CheckResult check_karcher_grid(oracle::Rng& rng, std::size_t instances);

/// Traces gamma on random stencils with edges <= r0 and compares its speed
/// with the certified bound, and the analytic speed with finite differences.
/// Returns {bound check, finite difference agreement}.
std::pair<CheckResult, CheckResult> check_gamma_speed(oracle::Rng& rng, const CertificateSpec& spec,
                                                      std::size_t stencils);

struct DominationResult {
  std::string scheme;
  double r0 = 0.0;
  double mu = 0.0;
  double displacement_coeff = 0.0;
  std::size_t polygons = 0;
  int levels = 0;
  double max_contraction = 0.0;         // max delta(T x) / delta(x)
  double max_displacement_ratio = 0.0;  // max displacement / delta(x)
  std::size_t violations = 0;
};

/// Runs `levels` refinements of random closed polygons on S^2 with
/// delta(x) < cert.r0 and counts levels where the measured contraction
/// exceeds cert.mu or the displacement exceeds cert.displacement_coeff * delta.
DominationResult empirical_domination(const Certificate& cert, const Mask& mask, oracle::Rng& rng,
                                      std::size_t polygons, int levels);

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
};

ValidationReport run_validation(const ValidationOptions& options);
nlohmann::json validation_to_json(const ValidationReport& report);

}  // namespace sphsub
