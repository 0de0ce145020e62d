#pragma once

// Binary subdivision rules defined by a mask a_i:
//   linear:     (Sx)_i = sum_j a_{i-2j} x_j
//   Riemannian: (Tx)_i = argmin_x sum_j a_{i-2j} dist(x, x_j)^2
//
// Sub-masks are stored as stencils relative to x_i, so (Tx)_{2i+p} uses
// x_{i+first}, ..., x_{i+first+weights.size()-1}.

#include "sphsub/errors.hpp"
#include "sphsub/frechet.hpp"
#include "sphsub/sphere.hpp"

#include <map>
#include <string>
#include <vector>

namespace sphsub {

struct StencilRule {
  int first = 0;
  std::vector<double> weights;

  int last() const { return first + static_cast<int>(weights.size()) - 1; }
  double weight_at(int k) const;
  double alpha_minus() const;
  // Chain position of the center of the support, in units of consecutive
  // points relative to x_i (e.g. 0.5 for a stencil on x_{i-1}..x_{i+2}).
  double center_position() const { return 0.5 * (first + last()); }
  // Largest chain distance from the center to a support point.
  double span() const { return 0.5 * (last() - first); }
};

class Mask {
 public:
  // Throws ContractViolation unless both sub-mask sums equal 1 within 1e-12.
  Mask(std::string name, std::map<int, double> coefficients);

  // Coefficients a_start, a_{start+1}, ...
  static Mask from_range(std::string name, int start, const std::vector<double>& values);

  const std::string& name() const noexcept { return name_; }
  const std::map<int, double>& coefficients() const noexcept { return coefficients_; }
  double at(int i) const;

  StencilRule even_rule() const;  // (Tx)_{2i}
  StencilRule odd_rule() const;   // (Tx)_{2i+1}
  const StencilRule& rule(int parity) const { return parity == 0 ? even_ : odd_; }

 private:
  std::string name_;
  std::map<int, double> coefficients_;
  StencilRule even_;
  StencilRule odd_;
};

// "lane-riesenfeld-cubic", "four-point" (omega = 1/16), "four-point(<omega>)",
// "neg-13-21". Throws UnknownScheme otherwise.
Mask builtin_mask(const std::string& name);
std::vector<std::string> builtin_mask_names();

enum class Boundary { Periodic, Truncate };

const char* to_string(Boundary b);

std::vector<Vec> linear_subdivide(const Mask& m, const std::vector<Vec>& data, Boundary boundary = Boundary::Periodic);

struct PointSequence {
  std::vector<UnitPoint> points;
  long start = 0;  // index of points.front()
  Boundary boundary = Boundary::Periodic;

  std::size_t size() const { return points.size(); }
  // Point with global index i (wrapped when periodic).
  const UnitPoint& at(long i) const;
  bool contains(long i) const;
};

// sup over consecutive pairs; periodic sequences include the closing edge.
double max_edge_length(const PointSequence& s);

// Gate failure for one output point of a Riemannian rule.
class GateError : public Error {
 public:
  GateError(long output_index, WellDefinednessReport report);
  long output_index() const noexcept { return index_; }
  const WellDefinednessReport& report() const noexcept { return report_; }

 private:
  long index_;
  WellDefinednessReport report_;
};

/// One application of T.
///
/// Each output point is gated before it is solved: the ball is centred at
/// the stencil's central point (odd support length) or the geodesic midpoint
/// of its two central points (even support length) and has the smallest
/// radius containing every point with nonzero weight. Single-point stencils
/// copy the point, two-point nonnegative stencils use the closed-form
/// geodesic average, the rest go through karcher_mean guarded by B_{r*}.
PointSequence riemannian_subdivide(const Mask& m, const PointSequence& data, const SolverSettings& settings = {});

struct RefinementDiagnostics {
  double delta_before = 0.0;
  double delta_after = 0.0;
  double contraction_ratio = 0.0;  // delta_after / delta_before, 0 if delta_before == 0
  double displacement = 0.0;       // sup_i dist(after_{2i}, before_i)
};

RefinementDiagnostics diagnostics(const PointSequence& before, const PointSequence& after);

struct Level {
  PointSequence points;
  RefinementDiagnostics diagnostics;
};

// Levels 1..k of T applied repeatedly.
std::vector<Level> iterate(const Mask& m, const PointSequence& data, int k, const SolverSettings& settings = {});

}  // namespace sphsub
