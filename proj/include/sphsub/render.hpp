#pragma once

#include "sphsub/schemes.hpp"

#include <cmath>
#include <string>

namespace sphsub {

struct RenderOptions {
  Vec view = Vec::Ones(3) / std::sqrt(3.0);  // direction towards the viewer
  int size = 512;                           // square canvas, pixels
  int arc_samples = 32;                     // samples per input polygon edge
};

// Orthographic SVG of S^2: sphere outline, the input polygon drawn with
// geodesic arcs, and optionally a refined polyline. Output is deterministic
// for fixed inputs. Throws DimensionUnsupported unless points live in R^3.
std::string render_svg(const PointSequence& polygon, const PointSequence* refined, const RenderOptions& options = {});

}  // namespace sphsub
