#pragma once

// Convergence certificates for Riemannian subdivision rules on S^n.
//
// For one rule, the target weights are reached along an affine coefficient
// path alpha(t), t in [0, 1], whose t = 0 minimiser (the reference point) is
// known. gamma(t) = argmin f_{alpha(t)} joins the reference point to the
// rule's output, and with consecutive input distances <= r and
// dist(x_j, reference) <= l_j r its speed obeys
//
//   |gamma'(t)| <= 2 / |2 - L(t)| * sum_j |alpha_j'| (r C0 t + l_j r),
//   L(t)        =  sum_j |alpha_j(t)| (2 - 2 psi(C0 r t + l_j r)),
//
// provided |gamma'| <= C0 r on [0, 1]. The bootstrap closes that loop: if
// |gamma'(0)| < C0 r and the bound above yields C1 < C0, then |gamma'| <= C1 r
// everywhere. Integrating the bound gives the distance from the reference
// point to the output, and the two rules compose into a contractivity factor
// and a displacement constant.

#include "sphsub/frechet.hpp"
#include "sphsub/schemes.hpp"
#include "sphsub/sphere.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sphsub {

struct ReferenceRule {
  enum class Kind { InputPoint, GeodesicMidpoint, WeightedAverage };

  Kind kind = Kind::InputPoint;
  int index = 0;      // stencil offset relative to x_i
  double beta = 0.0;  // weight on x_{index+1}; WeightedAverage only

  static ReferenceRule input_point(int index) { return {Kind::InputPoint, index, 0.0}; }
  static ReferenceRule midpoint(int index) { return {Kind::GeodesicMidpoint, index, 0.5}; }
  static ReferenceRule weighted_average(int index, double beta) { return {Kind::WeightedAverage, index, beta}; }

  // Position along the input polygon in edge units relative to x_i.
  double position() const;
  // Weight of stencil offset k in the t = 0 configuration.
  double weight_at(int k) const;
};

const char* to_string(ReferenceRule::Kind kind);

struct CoefficientPath {
  int first = 0;  // stencil offset of entry 0
  std::vector<double> base;     // alpha_j(0)
  std::vector<double> slope;    // alpha_j', constant
  std::vector<double> offsets;  // l_j in multiples of r
  ReferenceRule reference;

  // Path from the reference configuration to `target`, with offsets equal to
  // the polygon distance |k - reference.position()|.
  static CoefficientPath toward(const StencilRule& target, const ReferenceRule& reference);

  /// Throws ContractViolation unless: sizes agree, sum(base) = 1 and
  /// sum(slope) = 0 within 1e-12, base matches the reference configuration,
  /// and every offset covers the polygon distance to the reference point.
  void validate() const;

  std::size_t size() const { return base.size(); }
  int offset_of(std::size_t j) const { return first + static_cast<int>(j); }
  double alpha(std::size_t j, double t) const { return base[j] + t * slope[j]; }
  double alpha_minus(double t) const;
  bool trivial() const;  // all slopes zero, so gamma is constant
  bool targets(const StencilRule& rule, double tol = 1e-12) const;
  // Half-width of the stencil support and its center, in edge units.
  double span() const;
  double center_position() const;
};

double L_bound(const CoefficientPath& path, double r, double C0, double t);
// 1 / |2 - L(t)|
double hessian_inverse_bound(const CoefficientPath& path, double r, double C0, double t);
double grad_derivative_bound(const CoefficientPath& path, double r, double C0, double t);
double speed_bound(const CoefficientPath& path, double r, double C0, double t);
// Bound on |gamma'(0)| / r.
double initial_speed_bound(const CoefficientPath& path, double r);

struct AuditEntry {
  std::string name;
  double value = 0.0;
  std::string note;
};

struct BootstrapResult {
  bool ok = false;
  std::string failure;  // names the failed assumption or inequality
  std::optional<ErrorKind> failure_kind;

  double C0 = 0.0;
  double C1 = 0.0;                   // sup_t speed_bound(t) / r0
  double initial_speed_coeff = 0.0;  // |gamma'(0)| / r0 bound
  double distance_coeff = 0.0;       // dist(reference, output) / r0 bound
  double L0 = 0.0;
  double L1 = 0.0;
  double L_sup = 0.0;
  bool L_monotone = true;
  std::vector<AuditEntry> audit;

  void throw_if_failed() const;
};

inline constexpr double kDefaultGridStep = 1e-3;
inline constexpr double kMinDenominator = 0.01;
inline constexpr double kNonMonotoneSlack = 1.01;

/// Runs the three assumptions for one rule at radius r0.
///
/// 1. Well-definedness at every grid t for the stencil ball of radius
///    span * r0 with the instantaneous alpha_-(t), plus the psi domain.
/// 2. initial_speed_bound(path, r0) < C0.
/// 3. C1 < C0, where C1 is the grid supremum of speed_bound / r0. When L is
///    nondecreasing on the grid the supremum sits at t = 1; otherwise the grid
///    maximum is inflated by kNonMonotoneSlack.
///
/// distance_coeff integrates the speed bound over [0, 1] with L frozen at
/// its supremum: 2 / (2 - L_sup) * sum_j |alpha_j'| (C0 / 2 + l_j).
BootstrapResult bootstrap(const CoefficientPath& path, double r0, double C0, double grid_step = kDefaultGridStep);

struct CertificateSpec {
  std::string label;
  Mask mask;
  CoefficientPath even_path;
  CoefficientPath odd_path;
  double r0 = 0.0;
  double C0_even = 0.0;
  double C0_odd = 0.0;
  double grid_step = kDefaultGridStep;
};

struct Certificate {
  std::string label;
  std::string scheme;
  bool certified = false;
  std::string failure;

  double r0 = 0.0;
  double C0 = 0.0;  // of the binding (largest C1) rule
  double C1 = 0.0;
  double initial_speed_coeff = 0.0;
  double mu = 0.0;
  double displacement_coeff = 0.0;
  double well_defined_radius = 0.0;           // exact supremum for the scheme's stencils
  double well_defined_radius_reported = 0.0;  // rounded down to two decimals

  BootstrapResult even;
  BootstrapResult odd;
  std::vector<AuditEntry> audit;
};

/// Scheme-level certificate.
///
/// Each rule's output lies within distance_coeff * delta of its reference
/// point, which sits at polygon position p_even (p_odd) relative to x_i.
/// With D_e, D_o the two distance coefficients:
///   mu    = max(D_e + |p_o - p_e| + D_o,  D_o + |1 + p_e - p_o| + D_e)
///   displacement_coeff = D_e + |p_e|
/// Certified iff both bootstraps pass, r0 is below the well-definedness
/// radius of both stencils, and mu < 1.
Certificate certify_scheme(const Mask& m, const CoefficientPath& even_path, const CoefficientPath& odd_path,
                           double r0, double C0_even, double C0_odd, double grid_step = kDefaultGridStep);
Certificate certify(const CertificateSpec& spec);

// lane-riesenfeld-cubic yields two variants (r0 = 0.25 and r0 = 0.6).
std::vector<CertificateSpec> builtin_certificate_specs(const std::string& scheme);

// Supremum of the scheme's well-definedness radius over both rules.
double scheme_well_defined_radius(const Mask& m);

struct ConvergenceGate {
  std::string scheme;
  double delta = 0.0;
  double threshold = 0.0;  // largest certified r0
  bool accepted = false;   // delta < threshold
};

// Largest r0 among the certified built-in specs of `scheme`, or nullopt.
std::optional<double> certified_radius(const std::string& scheme);
ConvergenceGate convergence_gate(const std::string& scheme, const PointSequence& data);

struct GammaSample {
  double t = 0.0;
  UnitPoint point;
  double fd_speed = 0.0;        // central difference of gamma
  double analytic_speed = 0.0;  // |H^{-1} d/ds grad f_alpha(s)|
};

/// Numerically traces gamma(t) = argmin f_{alpha(t)} on a concrete stencil.
///
/// `stencil[j]` is the point at offset path.first + j. Each sample is solved
/// with the Newton method warm-started from the previous one.
std::vector<GammaSample> trace_gamma(const std::vector<UnitPoint>& stencil, const CoefficientPath& path, int samples,
                                     const SolverSettings& settings = {1e-13, 100,
                                                                       SolverSettings::Method::NewtonTangent});

}  // namespace sphsub
