#include "sphsub/render.hpp"

#include "sphsub/errors.hpp"

#include <cstdio>
#include <sstream>

namespace sphsub {

namespace {

struct Projector {
  Vec e1, e2;
  double center, scale;

  std::string xy(const UnitPoint& p) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f %.3f", center + scale * p.coords().dot(e1),
                  center - scale * p.coords().dot(e2));
    return buf;
  }
};

Projector make_projector(const RenderOptions& o) {
  if (o.view.size() != 3 || o.view.norm() == 0.0) throw Error(ErrorKind::ContractViolation, "view must be a nonzero 3-vector");
  const Eigen::Vector3d d = o.view.normalized();
  Eigen::Vector3d up(0.0, 0.0, 1.0);
  if (std::abs(d.dot(up)) > 0.99) up = Eigen::Vector3d(0.0, 1.0, 0.0);
  const Eigen::Vector3d e1 = up.cross(d).normalized();
  const Eigen::Vector3d e2 = d.cross(e1);
  return {Vec(e1), Vec(e2), 0.5 * o.size, 0.45 * o.size};
}

void require_s2(const PointSequence& s) {
  for (const auto& p : s.points) {
    if (p.ambient_dim() != 3) {
      throw Error(ErrorKind::DimensionUnsupported, "rendering supports S^2 (3 coordinates) only");
    }
  }
}

}  // namespace

std::string render_svg(const PointSequence& polygon, const PointSequence* refined, const RenderOptions& options) {
  require_s2(polygon);
  if (refined) require_s2(*refined);
  const Projector pr = make_projector(options);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.size << "\" height=\"" << options.size
      << "\" viewBox=\"0 0 " << options.size << " " << options.size << "\">\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.3f", pr.scale);
  svg << "  <circle class=\"sphere\" cx=\"" << pr.center << "\" cy=\"" << pr.center << "\" r=\"" << buf
      << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";

  const bool closed = polygon.boundary == Boundary::Periodic;
  const std::size_t n = polygon.size();
  svg << "  <path class=\"polygon\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" d=\"";
  if (n > 0) {
    svg << "M " << pr.xy(polygon.points.front());
    const std::size_t edges = closed ? n : n - 1;
    for (std::size_t e = 0; e < edges && n > 1; ++e) {
      const UnitPoint& a = polygon.points[e];
      const UnitPoint& b = polygon.points[(e + 1) % n];
      for (int k = 1; k <= options.arc_samples; ++k) {
        svg << " L " << pr.xy(geodesic_average(a, b, static_cast<double>(k) / options.arc_samples));
      }
    }
    if (closed) svg << " Z";
  }
  svg << "\"/>\n";

  if (refined && refined->size() > 0) {
    svg << "  <path class=\"refined\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\" d=\"";
    svg << "M " << pr.xy(refined->points.front());
    for (std::size_t i = 1; i < refined->size(); ++i) svg << " L " << pr.xy(refined->points[i]);
    if (refined->boundary == Boundary::Periodic) svg << " Z";
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sphsub
