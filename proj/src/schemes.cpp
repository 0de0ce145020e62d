#include "sphsub/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace sphsub {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long wrap(long i, long n) {
  long r = i % n;
  return r < 0 ? r + n : r;
}

StencilRule extract_rule(const std::map<int, double>& a, int parity) {
  // (Tx)_{2i+p} = sum_k a_{p-2k} x_{i+k}
  std::map<int, double> by_k;
  for (const auto& [idx, val] : a) {
    if (val == 0.0) continue;
    const long diff = static_cast<long>(parity) - idx;
    if (diff % 2 != 0) continue;
    by_k[static_cast<int>(diff / 2)] = val;
  }
  StencilRule rule;
  if (by_k.empty()) return rule;
  rule.first = by_k.begin()->first;
  const int last = by_k.rbegin()->first;
  rule.weights.assign(static_cast<std::size_t>(last - rule.first + 1), 0.0);
  for (const auto& [k, v] : by_k) rule.weights[static_cast<std::size_t>(k - rule.first)] = v;
  return rule;
}

// Output indices with full stencils inside [in_start, in_start + n).
std::pair<long, long> truncated_range(const Mask& m, long in_start, long n) {
  auto valid = [&](long k) {
    const int p = static_cast<int>(wrap(k, 2));
    const long i = floor_div(k, 2);
    const StencilRule& r = m.rule(p);
    return i + r.first >= in_start && i + r.last() <= in_start + n - 1;
  };
  long lo = 2 * in_start - 2 * std::max(std::abs(m.even_rule().last()), std::abs(m.odd_rule().last())) - 2;
  long hi = 2 * (in_start + n) + 2 * std::max(std::abs(m.even_rule().first), std::abs(m.odd_rule().first)) + 2;
  // Each parity is valid on an interval of indices; keep the contiguous block
  // where both are (the edge outputs of the longer rule are dropped).
  while (hi >= lo && !valid(hi)) --hi;
  if (hi < lo) return {0, 0};
  long first = hi;
  while (first - 1 >= lo && valid(first - 1)) --first;
  return {first, hi - first + 1};
}

}  // namespace

double StencilRule::weight_at(int k) const {
  if (k < first || k > last()) return 0.0;
  return weights[static_cast<std::size_t>(k - first)];
}

double StencilRule::alpha_minus() const {
  double s = 0.0;
  for (double w : weights) {
    if (w < 0.0) s -= w;
  }
  return s;
}

Mask::Mask(std::string name, std::map<int, double> coefficients)
    : name_(std::move(name)), coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw Error(ErrorKind::ContractViolation, "empty mask");
  double even = 0.0, odd = 0.0;
  for (const auto& [i, v] : coefficients_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::ContractViolation, "non-finite mask coefficient");
    (i % 2 == 0 ? even : odd) += v;
  }
  if (std::abs(even - 1.0) > 1e-12 || std::abs(odd - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "mask '" << name_ << "' is not affine invariant: even sum " << even << ", odd sum " << odd;
    throw Error(ErrorKind::ContractViolation, os.str());
  }
  even_ = extract_rule(coefficients_, 0);
  odd_ = extract_rule(coefficients_, 1);
}

Mask Mask::from_range(std::string name, int start, const std::vector<double>& values) {
  std::map<int, double> c;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] != 0.0) c[start + static_cast<int>(k)] = values[k];
  }
  return Mask(std::move(name), std::move(c));
}

double Mask::at(int i) const {
  auto it = coefficients_.find(i);
  return it == coefficients_.end() ? 0.0 : it->second;
}

StencilRule Mask::even_rule() const { return even_; }
StencilRule Mask::odd_rule() const { return odd_; }

Mask builtin_mask(const std::string& name) {
  if (name == "lane-riesenfeld-cubic") {
    return Mask::from_range(name, -2, {1.0 / 8, 1.0 / 2, 6.0 / 8, 1.0 / 2, 1.0 / 8});
  }
  if (name == "neg-13-21") {
    // even: -1/32 x_{i-1} + 21/32 x_i + 13/32 x_{i+1} - 1/32 x_{i+2}
    // odd:  -1/32 x_{i-1} + 13/32 x_i + 21/32 x_{i+1} - 1/32 x_{i+2}
    return Mask::from_range(name, -4, {-1.0 / 32, -1.0 / 32, 13.0 / 32, 21.0 / 32, 21.0 / 32, 13.0 / 32,
                                       -1.0 / 32, -1.0 / 32});
  }
  if (name.rfind("four-point", 0) == 0) {
    double omega = 1.0 / 16;
    const std::string rest = name.substr(std::string("four-point").size());
    if (!rest.empty()) {
      if (rest.size() < 3 || rest.front() != '(' || rest.back() != ')') {
        throw Error(ErrorKind::UnknownScheme, "expected four-point(<omega>), got '" + name + "'");
      }
      const std::string arg = rest.substr(1, rest.size() - 2);
      char* end = nullptr;
      const auto slash = arg.find('/');
      if (slash == std::string::npos) {
        omega = std::strtod(arg.c_str(), &end);
        if (end != arg.c_str() + arg.size()) throw Error(ErrorKind::UnknownScheme, "bad omega in '" + name + "'");
      } else {
        const std::string num = arg.substr(0, slash), den = arg.substr(slash + 1);
        const double p = std::strtod(num.c_str(), &end);
        const bool ok1 = end == num.c_str() + num.size() && !num.empty();
        const double q = std::strtod(den.c_str(), &end);
        const bool ok2 = end == den.c_str() + den.size() && !den.empty() && q != 0.0;
        if (!ok1 || !ok2) throw Error(ErrorKind::UnknownScheme, "bad omega in '" + name + "'");
        omega = p / q;
      }
    }
    std::map<int, double> c{{0, 1.0}, {-1, 0.5 + omega}, {1, 0.5 + omega}};
    if (omega != 0.0) {
      c[-3] = -omega;
      c[3] = -omega;
    }
    return Mask(name == "four-point" ? "four-point" : name, std::move(c));
  }
  throw Error(ErrorKind::UnknownScheme, "unknown scheme '" + name + "'");
}

std::vector<std::string> builtin_mask_names() { return {"lane-riesenfeld-cubic", "four-point", "neg-13-21"}; }

const char* to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "truncate"; }

std::vector<Vec> linear_subdivide(const Mask& m, const std::vector<Vec>& data, Boundary boundary) {
  const long n = static_cast<long>(data.size());
  if (n == 0) return {};
  long out_start = 0, count = 2 * n;
  if (boundary == Boundary::Truncate) std::tie(out_start, count) = truncated_range(m, 0, n);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = out_start; k < out_start + count; ++k) {
    const StencilRule& r = m.rule(static_cast<int>(wrap(k, 2)));
    const long i = floor_div(k, 2);
    Vec acc = Vec::Zero(data.front().size());
    for (int s = r.first; s <= r.last(); ++s) {
      const long j = boundary == Boundary::Periodic ? wrap(i + s, n) : i + s;
      acc += r.weight_at(s) * data[static_cast<std::size_t>(j)];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

const UnitPoint& PointSequence::at(long i) const {
  const long n = static_cast<long>(points.size());
  if (boundary == Boundary::Periodic) return points[static_cast<std::size_t>(wrap(i - start, n))];
  if (!contains(i)) throw Error(ErrorKind::ContractViolation, "index outside the sequence");
  return points[static_cast<std::size_t>(i - start)];
}

bool PointSequence::contains(long i) const {
  if (boundary == Boundary::Periodic) return !points.empty();
  return i >= start && i < start + static_cast<long>(points.size());
}

double max_edge_length(const PointSequence& s) {
  double d = 0.0;
  const std::size_t n = s.points.size();
  if (n < 2) return 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) d = std::max(d, geodesic_distance(s.points[i], s.points[i + 1]));
  if (s.boundary == Boundary::Periodic) d = std::max(d, geodesic_distance(s.points.back(), s.points.front()));
  return d;
}

GateError::GateError(long output_index, WellDefinednessReport report)
    : Error(ErrorKind::GateViolation,
            "output point " + std::to_string(output_index) + " is not well defined (" + report.describe() + ")"),
      index_(output_index),
      report_(std::move(report)) {}

PointSequence riemannian_subdivide(const Mask& m, const PointSequence& data, const SolverSettings& settings) {
  const long n = static_cast<long>(data.size());
  if (n < 2) throw Error(ErrorKind::ContractViolation, "subdivision needs at least two points");
  long out_start = 2 * data.start, count = 2 * n;
  if (data.boundary == Boundary::Truncate) std::tie(out_start, count) = truncated_range(m, data.start, n);

  PointSequence out;
  out.start = out_start;
  out.boundary = data.boundary;
  out.points.reserve(static_cast<std::size_t>(count));

  for (long k = out_start; k < out_start + count; ++k) {
    const StencilRule& r = m.rule(static_cast<int>(wrap(k, 2)));
    const long i = floor_div(k, 2);

    std::vector<UnitPoint> pts;
    std::vector<double> w;
    for (int s = r.first; s <= r.last(); ++s) {
      if (r.weight_at(s) == 0.0) continue;
      pts.push_back(data.at(i + s));
      w.push_back(r.weight_at(s));
    }

    if (pts.size() == 1) {
      out.points.push_back(pts.front());
      continue;
    }

    // Gate ball around the stencil center.
    const int lo = r.first, hi = r.last();
    const UnitPoint center = (hi - lo) % 2 == 0
                                 ? data.at(i + (lo + hi) / 2)
                                 : geodesic_average(data.at(i + (lo + hi - 1) / 2), data.at(i + (lo + hi + 1) / 2), 0.5);
    double radius = 0.0;
    for (const auto& p : pts) radius = std::max(radius, geodesic_distance(center, p));

    WeightedConfiguration cfg(std::move(pts), std::move(w));
    WellDefinednessReport rep = check_well_defined(cfg, center, radius);
    if (!rep.well_defined()) throw GateError(k, std::move(rep));

    if (cfg.size() == 2 && cfg.weights()[0] >= 0.0 && cfg.weights()[1] >= 0.0) {
      out.points.push_back(geodesic_average(cfg.points()[0], cfg.points()[1], cfg.weights()[1]));
      continue;
    }
    try {
      out.points.push_back(
          karcher_mean(cfg, settings, default_initial(cfg), Ball{center, *rep.certified_radius}));
    } catch (const Error& e) {
      throw Error(e.kind(), "output point " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

RefinementDiagnostics diagnostics(const PointSequence& before, const PointSequence& after) {
  if (before.boundary != after.boundary) throw Error(ErrorKind::LengthMismatch, "boundary policies differ");
  if (before.boundary == Boundary::Periodic && after.size() != 2 * before.size()) {
    throw Error(ErrorKind::LengthMismatch, "periodic refinement must double the length");
  }
  RefinementDiagnostics d;
  d.delta_before = max_edge_length(before);
  d.delta_after = max_edge_length(after);
  d.contraction_ratio = d.delta_before > 0.0 ? d.delta_after / d.delta_before : 0.0;
  bool any = false;
  for (long i = before.start; i < before.start + static_cast<long>(before.size()); ++i) {
    if (!after.contains(2 * i)) continue;
    any = true;
    d.displacement = std::max(d.displacement, geodesic_distance(after.at(2 * i), before.at(i)));
  }
  if (!any && before.size() > 0) throw Error(ErrorKind::LengthMismatch, "sequences share no aligned indices");
  return d;
}

std::vector<Level> iterate(const Mask& m, const PointSequence& data, int k, const SolverSettings& settings) {
  if (k < 1) throw Error(ErrorKind::ContractViolation, "iterate needs k >= 1");
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(k));
  const PointSequence* prev = &data;
  for (int level = 1; level <= k; ++level) {
    PointSequence next = riemannian_subdivide(m, *prev, settings);
    RefinementDiagnostics diag = diagnostics(*prev, next);
    levels.push_back({std::move(next), diag});
    prev = &levels.back().points;
  }
  return levels;
}

}  // namespace sphsub
