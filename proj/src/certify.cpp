#include "sphsub/certify.hpp"

#include "sphsub/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sphsub {

namespace {

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

bool active(const CoefficientPath& p, std::size_t j) { return p.base[j] != 0.0 || p.slope[j] != 0.0; }

std::vector<double> grid(double step) {
  const int n = static_cast<int>(std::ceil(1.0 / step - 1e-9));
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) ts.push_back(k * step);
  ts.push_back(1.0);
  return ts;
}

}  // namespace

double ReferenceRule::position() const {
  switch (kind) {
    case Kind::InputPoint: return index;
    case Kind::GeodesicMidpoint: return index + 0.5;
    case Kind::WeightedAverage: return index + beta;
  }
  return index;
}

double ReferenceRule::weight_at(int k) const {
  switch (kind) {
    case Kind::InputPoint: return k == index ? 1.0 : 0.0;
    case Kind::GeodesicMidpoint: return (k == index || k == index + 1) ? 0.5 : 0.0;
    case Kind::WeightedAverage:
      if (k == index) return 1.0 - beta;
      if (k == index + 1) return beta;
      return 0.0;
  }
  return 0.0;
}

const char* to_string(ReferenceRule::Kind kind) {
  switch (kind) {
    case ReferenceRule::Kind::InputPoint: return "input_point";
    case ReferenceRule::Kind::GeodesicMidpoint: return "geodesic_midpoint";
    case ReferenceRule::Kind::WeightedAverage: return "weighted_average";
  }
  return "?";
}

CoefficientPath CoefficientPath::toward(const StencilRule& target, const ReferenceRule& reference) {
  const int ref_last = reference.kind == ReferenceRule::Kind::InputPoint ? reference.index : reference.index + 1;
  CoefficientPath p;
  p.reference = reference;
  p.first = std::min(target.first, reference.index);
  const int last = std::max(target.last(), ref_last);
  for (int k = p.first; k <= last; ++k) {
    const double b = reference.weight_at(k);
    p.base.push_back(b);
    p.slope.push_back(target.weight_at(k) - b);
    p.offsets.push_back(std::abs(k - reference.position()));
  }
  return p;
}

void CoefficientPath::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::ContractViolation, "coefficient path: " + m); };
  if (base.empty() || base.size() != slope.size() || base.size() != offsets.size()) {
    bad("base, slope and offsets must be non-empty and of equal length");
  }
  if (reference.kind == ReferenceRule::Kind::WeightedAverage && !(reference.beta >= 0.0 && reference.beta <= 1.0)) {
    bad("reference beta must lie in [0, 1]");
  }
  double sb = 0.0, ss = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (!std::isfinite(base[j]) || !std::isfinite(slope[j]) || !std::isfinite(offsets[j])) bad("non-finite entry");
    sb += base[j];
    ss += slope[j];
  }
  if (std::abs(sb - 1.0) > 1e-12) bad("base weights sum to " + fmt(sb, 17) + ", expected 1");
  if (std::abs(ss) > 1e-12) bad("slopes sum to " + fmt(ss, 17) + ", expected 0");
  const double pos = reference.position();
  for (std::size_t j = 0; j < size(); ++j) {
    const int k = offset_of(j);
    if (std::abs(base[j] - reference.weight_at(k)) > 1e-12) {
      bad("base weight at offset " + std::to_string(k) + " does not match the reference configuration");
    }
    if (offsets[j] < std::abs(k - pos) - 1e-12) {
      bad("offset at " + std::to_string(k) + " is smaller than its polygon distance to the reference point");
    }
  }
  // The reference's own points must be inside the path range.
  double covered = 0.0;
  for (std::size_t j = 0; j < size(); ++j) covered += reference.weight_at(offset_of(j));
  if (std::abs(covered - 1.0) > 1e-12) bad("reference points lie outside the path's stencil");
}

double CoefficientPath::alpha_minus(double t) const {
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) s += std::max(0.0, -alpha(j, t));
  return s;
}

bool CoefficientPath::trivial() const {
  return std::all_of(slope.begin(), slope.end(), [](double s) { return s == 0.0; });
}

bool CoefficientPath::targets(const StencilRule& rule, double tol) const {
  const int lo = std::min(first, rule.first);
  const int hi = std::max(offset_of(size() - 1), rule.last());
  for (int k = lo; k <= hi; ++k) {
    double a1 = 0.0;
    if (k >= first && k <= offset_of(size() - 1)) a1 = alpha(static_cast<std::size_t>(k - first), 1.0);
    if (std::abs(a1 - rule.weight_at(k)) > tol) return false;
  }
  return true;
}

double CoefficientPath::span() const {
  int lo = 0, hi = 0;
  bool any = false;
  for (std::size_t j = 0; j < size(); ++j) {
    if (!active(*this, j)) continue;
    if (!any) lo = offset_of(j);
    hi = offset_of(j);
    any = true;
  }
  return 0.5 * (hi - lo);
}

double CoefficientPath::center_position() const {
  int lo = 0, hi = 0;
  bool any = false;
  for (std::size_t j = 0; j < size(); ++j) {
    if (!active(*this, j)) continue;
    if (!any) lo = offset_of(j);
    hi = offset_of(j);
    any = true;
  }
  return 0.5 * (hi + lo);
}

double L_bound(const CoefficientPath& path, double r, double C0, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::ContractViolation, "t must lie in [0, 1]");
  double L = 0.0;
  for (std::size_t j = 0; j < path.size(); ++j) {
    const double a = std::abs(path.alpha(j, t));
    if (a == 0.0) continue;
    L += a * (2.0 - 2.0 * psi(C0 * r * t + path.offsets[j] * r));
  }
  return L;
}

double hessian_inverse_bound(const CoefficientPath& path, double r, double C0, double t) {
  const double denom = std::abs(2.0 - L_bound(path, r, C0, t));
  if (denom < 1e-9) throw Error(ErrorKind::DegenerateDenominator, "|2 - L(t)| vanishes at t = " + fmt(t));
  return 1.0 / denom;
}

double grad_derivative_bound(const CoefficientPath& path, double r, double C0, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::ContractViolation, "t must lie in [0, 1]");
  double s = 0.0;
  for (std::size_t j = 0; j < path.size(); ++j) s += std::abs(path.slope[j]) * (r * C0 * t + path.offsets[j] * r);
  return 2.0 * s;
}

double speed_bound(const CoefficientPath& path, double r, double C0, double t) {
  return hessian_inverse_bound(path, r, C0, t) * grad_derivative_bound(path, r, C0, t);
}

double initial_speed_bound(const CoefficientPath& path, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::ContractViolation, "r must be positive");
  return speed_bound(path, r, 0.0, 0.0) / r;
}

void BootstrapResult::throw_if_failed() const {
  if (!ok) throw Error(failure_kind.value_or(ErrorKind::AssumptionViolated), failure);
}

BootstrapResult bootstrap(const CoefficientPath& path, double r0, double C0, double grid_step) {
  path.validate();
  if (!(r0 > 0.0) || !(C0 > 0.0)) throw Error(ErrorKind::ContractViolation, "r0 and C0 must be positive");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw Error(ErrorKind::ContractViolation, "grid step must lie in (0, 1]");

  BootstrapResult res;
  res.C0 = C0;
  auto fail = [&](ErrorKind kind, const std::string& why) {
    res.ok = false;
    res.failure = why;
    res.failure_kind = kind;
    return res;
  };
  auto audit = [&](const std::string& name, double v, const std::string& note = {}) {
    res.audit.push_back({name, v, note});
  };

  const std::vector<double> ts = grid(grid_step);

  // Assumption 1: the minimiser stays well defined along the whole path.
  double max_offset = 0.0;
  for (std::size_t j = 0; j < path.size(); ++j) {
    if (active(path, j)) max_offset = std::max(max_offset, path.offsets[j]);
  }
  const double psi_arg = C0 * r0 + max_offset * r0;
  audit("max_psi_argument", psi_arg, "C0 r0 + max_j l_j r0, must stay below pi/2");
  if (psi_arg >= std::numbers::pi / 2.0) {
    return fail(ErrorKind::DomainError, "Assumption 1: psi argument " + fmt(psi_arg) + " reaches pi/2");
  }
  const double ball = path.span() * r0;
  audit("stencil_ball_radius", ball, "span * r0 around the stencil center");
  for (double t : ts) {
    const WellDefinednessReport wd = well_defined_for_radius(path.alpha_minus(t), ball);
    if (!wd.well_defined()) {
      return fail(ErrorKind::AssumptionViolated,
                  "Assumption 1 (well-definedness) fails at t = " + fmt(t) + ": " + wd.describe());
    }
  }
  audit("alpha_minus_at_1", path.alpha_minus(1.0));

  // Assumption 2: |gamma'(0)| <= C0 r.
  res.initial_speed_coeff = initial_speed_bound(path, r0);
  res.L0 = L_bound(path, r0, C0, 0.0);
  audit("L(0)", res.L0);
  audit("initial_speed_coeff", res.initial_speed_coeff, "|gamma'(0)| / r bound");
  if (!(res.initial_speed_coeff < C0)) {
    return fail(ErrorKind::AssumptionViolated, "Assumption 2: |gamma'(0)| <= " + fmt(res.initial_speed_coeff) +
                                                   " r is not below C0 r = " + fmt(C0) + " r");
  }

  // Assumption 3: the speed bound under |gamma'| <= C0 r improves to C1 < C0.
  double max_speed = 0.0, max_L = 0.0, prev_L = -1.0;
  for (double t : ts) {
    const double L = L_bound(path, r0, C0, t);
    if (2.0 - L < kMinDenominator) {
      return fail(ErrorKind::DegenerateDenominator,
                  "2 - L(t) = " + fmt(2.0 - L) + " at t = " + fmt(t) + " is below " + fmt(kMinDenominator));
    }
    if (L < prev_L - 1e-14) res.L_monotone = false;
    prev_L = L;
    max_L = std::max(max_L, L);
    max_speed = std::max(max_speed, grad_derivative_bound(path, r0, C0, t) / (2.0 - L));
  }
  res.L1 = L_bound(path, r0, C0, 1.0);
  const double slack = res.L_monotone ? 1.0 : kNonMonotoneSlack;
  res.L_sup = res.L_monotone ? res.L1 : max_L;
  res.C1 = slack * max_speed / r0;
  audit("L(1)", res.L1);
  audit("2-L(1)", 2.0 - res.L1);
  audit("L_monotone", res.L_monotone ? 1.0 : 0.0,
        res.L_monotone ? "sup of L over [0,1] taken at t = 1" : "grid maximum inflated by 1.01");
  audit("hessian_inverse_bound", 1.0 / (2.0 - res.L_sup), "1 / (2 - sup L)");
  audit("C1", res.C1, "sup_t speed_bound(t) / r0");

  double weighted = 0.0;
  for (std::size_t j = 0; j < path.size(); ++j) weighted += std::abs(path.slope[j]) * (0.5 * C0 + path.offsets[j]);
  res.distance_coeff = slack * 2.0 / (2.0 - res.L_sup) * weighted;
  audit("distance_coeff", res.distance_coeff, "integral of the speed bound over [0,1], per r");

  if (!(res.C1 < C0)) {
    return fail(ErrorKind::AssumptionViolated,
                "Assumption 3: C1 = " + fmt(res.C1) + " is not below C0 = " + fmt(C0) +
                    " (inequality 2/|2-L(1)| * sum |alpha_j'| (C0 + l_j) < C0 fails)");
  }
  res.ok = true;
  return res;
}

double scheme_well_defined_radius(const Mask& m) {
  double radius = std::numeric_limits<double>::infinity();
  for (int p = 0; p < 2; ++p) {
    const StencilRule& r = m.rule(p);
    int nonzero = 0;
    for (double w : r.weights) nonzero += w != 0.0;
    if (nonzero < 2) continue;
    radius = std::min(radius, max_input_radius(r.alpha_minus(), r.span()));
  }
  return radius;
}

Certificate certify_scheme(const Mask& m, const CoefficientPath& even_path, const CoefficientPath& odd_path,
                           double r0, double C0_even, double C0_odd, double grid_step) {
  even_path.validate();
  odd_path.validate();
  if (!even_path.targets(m.even_rule())) {
    throw Error(ErrorKind::ContractViolation, "even path does not end at the even sub-mask of " + m.name());
  }
  if (!odd_path.targets(m.odd_rule())) {
    throw Error(ErrorKind::ContractViolation, "odd path does not end at the odd sub-mask of " + m.name());
  }

  Certificate c;
  c.scheme = m.name();
  c.r0 = r0;
  c.well_defined_radius = scheme_well_defined_radius(m);
  c.well_defined_radius_reported = std::floor(c.well_defined_radius * 100.0) / 100.0;
  c.even = bootstrap(even_path, r0, C0_even, grid_step);
  c.odd = bootstrap(odd_path, r0, C0_odd, grid_step);

  const bool even_binding = c.even.C1 >= c.odd.C1;
  const BootstrapResult& binding = even_binding ? c.even : c.odd;
  c.C0 = binding.C0;
  c.C1 = binding.C1;
  c.initial_speed_coeff = std::max(c.even.initial_speed_coeff, c.odd.initial_speed_coeff);

  const double pe = even_path.reference.position();
  const double po = odd_path.reference.position();
  const double De = c.even.distance_coeff, Do = c.odd.distance_coeff;
  const double mu_eo = De + std::abs(po - pe) + Do;
  const double mu_oe = Do + std::abs(1.0 + pe - po) + De;
  c.mu = std::max(mu_eo, mu_oe);
  c.displacement_coeff = De + std::abs(pe);

  for (const auto& e : c.even.audit) c.audit.push_back({"even." + e.name, e.value, e.note});
  for (const auto& e : c.odd.audit) c.audit.push_back({"odd." + e.name, e.value, e.note});
  c.audit.push_back({"well_defined_radius", c.well_defined_radius, "sup r0 passing the gate for both stencils"});
  c.audit.push_back({"anchor_even", pe, "reference position of (Tx)_{2i} relative to x_i"});
  c.audit.push_back({"anchor_odd", po, "reference position of (Tx)_{2i+1} relative to x_i"});
  c.audit.push_back({"mu_even_odd", mu_eo, "D_e + |p_o - p_e| + D_o bounds dist(Tx_2i, Tx_2i+1) / delta"});
  c.audit.push_back({"mu_odd_even", mu_oe, "D_o + |1 + p_e - p_o| + D_e bounds dist(Tx_2i+1, Tx_2i+2) / delta"});
  c.audit.push_back({"displacement_coeff", c.displacement_coeff, "D_e + |p_e| bounds dist(Tx_2i, x_i) / delta"});

  if (!(r0 < c.well_defined_radius)) {
    c.failure = "well-definedness: r0 = " + fmt(r0) + " is not below the radius " + fmt(c.well_defined_radius);
  } else if (!c.even.ok) {
    c.failure = "even rule: " + c.even.failure;
  } else if (!c.odd.ok) {
    c.failure = "odd rule: " + c.odd.failure;
  } else if (!(c.mu < 1.0)) {
    c.failure = "composition: mu = " + fmt(c.mu) + " is not below 1";
  }
  c.certified = c.failure.empty();
  return c;
}

Certificate certify(const CertificateSpec& spec) {
  Certificate c = certify_scheme(spec.mask, spec.even_path, spec.odd_path, spec.r0, spec.C0_even, spec.C0_odd,
                                 spec.grid_step);
  c.label = spec.label;
  return c;
}

std::vector<CertificateSpec> builtin_certificate_specs(const std::string& scheme) {
  using R = ReferenceRule;
  std::vector<CertificateSpec> specs;
  if (scheme == "lane-riesenfeld-cubic") {
    const Mask m = builtin_mask(scheme);
    const auto even = CoefficientPath::toward(m.even_rule(), R::input_point(0));
    const auto odd = CoefficientPath::toward(m.odd_rule(), R::midpoint(0));
    specs.push_back({"lane-riesenfeld-cubic r0=0.25", m, even, odd, 0.25, 0.53, 0.53, kDefaultGridStep});
    specs.push_back({"lane-riesenfeld-cubic r0=0.6", m, even, odd, 0.6, 0.69, 0.69, kDefaultGridStep});
  } else if (scheme == "four-point" || scheme == "four-point(1/16)" || scheme == "four-point(0.0625)") {
    const Mask m = builtin_mask(scheme);
    const auto even = CoefficientPath::toward(m.even_rule(), R::input_point(0));
    const auto odd = CoefficientPath::toward(m.odd_rule(), R::midpoint(0));
    specs.push_back({"four-point r0=0.31", m, even, odd, 0.31, 0.45, 0.45, kDefaultGridStep});
  } else if (scheme == "neg-13-21") {
    const Mask m = builtin_mask(scheme);
    const auto even = CoefficientPath::toward(m.even_rule(), R::weighted_average(0, 0.35));
    const auto odd = CoefficientPath::toward(m.odd_rule(), R::weighted_average(0, 0.65));
    specs.push_back({"neg-13-21 r0=0.4", m, even, odd, 0.4, 0.16, 0.16, kDefaultGridStep});
  }
  return specs;
}

std::optional<double> certified_radius(const std::string& scheme) {
  std::optional<double> best;
  for (const auto& spec : builtin_certificate_specs(scheme)) {
    const Certificate c = certify(spec);
    if (c.certified && (!best || c.r0 > *best)) best = c.r0;
  }
  return best;
}

ConvergenceGate convergence_gate(const std::string& scheme, const PointSequence& data) {
  const auto radius = certified_radius(scheme);
  if (!radius) throw Error(ErrorKind::UnknownScheme, "no certified built-in specification for '" + scheme + "'");
  ConvergenceGate g;
  g.scheme = scheme;
  g.delta = max_edge_length(data);
  g.threshold = *radius;
  g.accepted = g.delta < g.threshold;
  return g;
}

std::vector<GammaSample> trace_gamma(const std::vector<UnitPoint>& stencil, const CoefficientPath& path, int samples,
                                     const SolverSettings& settings) {
  path.validate();
  if (stencil.size() != path.size()) throw Error(ErrorKind::LengthMismatch, "stencil and path sizes differ");
  if (samples < 2) throw Error(ErrorKind::ContractViolation, "trace_gamma needs at least two samples");

  auto config = [&](double t) {
    std::vector<double> w(path.size());
    for (std::size_t j = 0; j < path.size(); ++j) w[j] = path.alpha(j, t);
    return WeightedConfiguration(stencil, std::move(w));
  };
  auto solve = [&](double t, const UnitPoint& init) {
    try {
      return karcher_mean(config(t), settings, init);
    } catch (const Error& e) {
      throw Error(e.kind(), "trace_gamma at t = " + fmt(t) + ": " + e.what());
    }
  };

  constexpr double h = 1e-4;
  std::vector<GammaSample> out;
  out.reserve(static_cast<std::size_t>(samples));
  UnitPoint prev = default_initial(config(0.0));
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / (samples - 1);
    const UnitPoint x = solve(t, prev);

    const double tlo = std::max(0.0, t - h), thi = std::min(1.0, t + h);
    const double fd = geodesic_distance(solve(tlo, x), solve(thi, x)) / (thi - tlo);

    const WeightedConfiguration c = config(t);
    const Mat q = tangent_basis(x);
    const Mat hess = q.transpose() * objective_hessian(c, x) * q;
    Vec dgrad = Vec::Zero(x.ambient_dim());  // -(d/ds) grad f_alpha(s)
    for (std::size_t j = 0; j < path.size(); ++j) {
      if (path.slope[j] != 0.0) dgrad += 2.0 * path.slope[j] * log_map(x, stencil[j]).vec();
    }
    const Vec v = hess.ldlt().solve(q.transpose() * dgrad);

    out.push_back({t, x, fd, v.norm()});
    prev = x;
  }
  return out;
}

}  // namespace sphsub
