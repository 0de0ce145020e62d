#pragma once

// Reference computations that do not go through the library's geometry
// code: arccos distances, finite differences, exhaustive grid search, and
// generators for random admissible inputs.

#include "sphsub/schemes.hpp"
#include "sphsub/sphere.hpp"

#include <functional>
#include <random>
#include <vector>

namespace sphsub::oracle {

using Rng = std::mt19937_64;

double arccos_distance(const Vec& x, const Vec& y);
Vec great_circle_point(const Vec& x, const Vec& w);  // cos|w| x + sin|w| w/|w|
double weighted_sq_distance(const std::vector<Vec>& points, const std::vector<double>& weights, const Vec& x);

// Gram-Schmidt completion of x to an orthonormal basis; returns the n
// tangent columns.
Mat gram_schmidt_tangent_basis(const Vec& x);

// Gradient of f o exp_x at 0 by central differences, mapped back to R^{n+1}.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, const Mat& basis, double h);
// Hessian of f o exp_x at 0 in the coordinates of `basis`.
Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x, const Mat& basis, double h);

/// Minimiser of the weighted squared distance on S^2 by exhaustive search.
///
/// Scans exp_center(u b1 + v b2) over |u|, |v| <= window at step
/// `coarse_step`, then re-scans 41 x 41 neighbourhoods at steps divided by
/// ten until `final_step` is reached.
Vec grid_search_mean(const std::vector<Vec>& points, const std::vector<double>& weights, const Vec& center,
                     double window, double coarse_step = 1e-3, double final_step = 1e-6);

UnitPoint random_point(Rng& rng, int ambient_dim);
Vec random_tangent(Rng& rng, const UnitPoint& x, double length);
UnitPoint random_point_near(Rng& rng, const UnitPoint& center, double max_distance);
Mat random_rotation(Rng& rng, int dim);

// Random weights summing to one; with `allow_negative`, up to two entries
// are negative with total magnitude at most `max_negative`.
std::vector<double> random_weights(Rng& rng, std::size_t count, bool allow_negative, double max_negative = 0.2);

// Chain of points with consecutive distances at most `max_edge`.
std::vector<UnitPoint> random_chain(Rng& rng, std::size_t count, double max_edge, int ambient_dim = 3);

/// Closed polygon on S^2 with max edge length strictly below `max_edge`.
///
/// Vertices sit on a jittered small circle (angles and radii perturbed) so
/// edge lengths and turning angles vary; candidates are redrawn until the
/// closing condition holds.
PointSequence random_closed_polygon(Rng& rng, std::size_t count, double max_edge);

}  // namespace sphsub::oracle
