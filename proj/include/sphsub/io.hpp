#pragma once

// File formats.
//
// Point sequences:
//   CSV  - one point per row, n+1 comma separated columns, '#' starts a comment.
//   JSON - {"dimension": n+1, "periodic": bool, "points": [[...], ...]}
// Rows with |norm - 1| <= 1e-9 are taken as is, rows within 1e-6 are
// renormalized and counted, anything further off is rejected.
//
// Certificate specs (JSON):
//   {"scheme": name | {"name", "start", "coefficients"},
//    "r0", "C0_even", "C0_odd", "grid_step",
//    "paths": {"even": path, "odd": path}}
//   path = {"first": int, "base": [...], "slope": [...], "offsets": [...],
//           "reference": {"kind": "input_point" | "geodesic_midpoint" |
//                         "weighted_average", "index": int, "beta": real}}
// "offsets" may be omitted, in which case the polygon distances to the
// reference point are used.

#include "sphsub/certify.hpp"
#include "sphsub/schemes.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace sphsub {

inline constexpr int kReportSchemaVersion = 1;

struct LoadedPoints {
  PointSequence sequence;
  int renormalized = 0;
};

LoadedPoints read_points_csv(std::istream& in, Boundary boundary = Boundary::Periodic);
LoadedPoints read_points_json(const nlohmann::json& j);
// Dispatches on the extension (.json, anything else is CSV). The boundary
// override wins over the JSON "periodic" flag.
LoadedPoints load_points(const std::filesystem::path& path, std::optional<Boundary> boundary = std::nullopt);

void write_points_csv(std::ostream& out, const PointSequence& s);
nlohmann::json points_to_json(const PointSequence& s);

Mask mask_from_json(const nlohmann::json& j);
nlohmann::json mask_to_json(const Mask& m);

CoefficientPath path_from_json(const nlohmann::json& j);
nlohmann::json path_to_json(const CoefficientPath& p);

CertificateSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const CertificateSpec& spec);

nlohmann::json certificate_to_json(const Certificate& c);
nlohmann::json diagnostics_to_json(const RefinementDiagnostics& d);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sphsub
