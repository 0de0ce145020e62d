#include "sphsub/io.hpp"

#include "sphsub/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sphsub {

using nlohmann::json;

namespace {

constexpr double kRenormalizeTolerance = 1e-6;

UnitPoint accept_point(const Vec& v, std::size_t row, int& renormalized) {
  const double n = v.norm();
  const double dev = std::abs(n - 1.0);
  if (dev <= kUnitTolerance) return UnitPoint(v);
  if (dev <= kRenormalizeTolerance) {
    ++renormalized;
    return UnitPoint::normalized(v);
  }
  std::ostringstream os;
  os << "point " << row << " has norm " << std::setprecision(12) << n << " (deviation above "
     << kRenormalizeTolerance << ")";
  throw Error(ErrorKind::ParseError, os.str());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

ReferenceRule reference_from_json(const json& j) {
  const auto kind = get<std::string>(j, "kind");
  const int index = get<int>(j, "index");
  if (kind == "input_point") return ReferenceRule::input_point(index);
  if (kind == "geodesic_midpoint") return ReferenceRule::midpoint(index);
  if (kind == "weighted_average") return ReferenceRule::weighted_average(index, get<double>(j, "beta"));
  throw Error(ErrorKind::ParseError, "unknown reference kind '" + kind + "'");
}

json bootstrap_to_json(const BootstrapResult& b) {
  json j;
  j["ok"] = b.ok;
  if (!b.ok) j["failure"] = b.failure;
  j["C0"] = b.C0;
  j["C1"] = b.C1;
  j["initial_speed_coeff"] = b.initial_speed_coeff;
  j["distance_coeff"] = b.distance_coeff;
  j["L0"] = b.L0;
  j["L1"] = b.L1;
  j["L_sup"] = b.L_sup;
  j["L_monotone"] = b.L_monotone;
  return j;
}

}  // namespace

LoadedPoints read_points_csv(std::istream& in, Boundary boundary) {
  LoadedPoints out;
  out.sequence.boundary = boundary;
  std::string line;
  std::size_t lineno = 0;
  long dim = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      vals.push_back(v);
    }
    if (dim < 0) dim = static_cast<long>(vals.size());
    if (static_cast<long>(vals.size()) != dim) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                                             " columns, got " + std::to_string(vals.size()));
    }
    if (dim < 3) throw Error(ErrorKind::ParseError, "points need at least 3 coordinates");
    out.sequence.points.push_back(
        accept_point(Eigen::Map<const Vec>(vals.data(), dim), out.sequence.points.size(), out.renormalized));
  }
  return out;
}

LoadedPoints read_points_json(const json& j) {
  LoadedPoints out;
  const int dim = get<int>(j, "dimension");
  if (dim < 3) throw Error(ErrorKind::ParseError, "dimension must be at least 3");
  out.sequence.boundary = j.value("periodic", true) ? Boundary::Periodic : Boundary::Truncate;
  const auto rows = get<std::vector<std::vector<double>>>(j, "points");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != dim) {
      throw Error(ErrorKind::ParseError, "point " + std::to_string(r) + " does not have " + std::to_string(dim) +
                                             " coordinates");
    }
    out.sequence.points.push_back(accept_point(Eigen::Map<const Vec>(rows[r].data(), dim), r, out.renormalized));
  }
  return out;
}

LoadedPoints load_points(const std::filesystem::path& path, std::optional<Boundary> boundary) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  LoadedPoints lp;
  if (path.extension() == ".json") {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
    lp = read_points_json(j);
    if (boundary) lp.sequence.boundary = *boundary;
  } else {
    lp = read_points_csv(in, boundary.value_or(Boundary::Periodic));
  }
  return lp;
}

void write_points_csv(std::ostream& out, const PointSequence& s) {
  out << "# " << s.size() << " points, start index " << s.start << ", " << to_string(s.boundary) << "\n";
  out << std::setprecision(17);
  for (const auto& p : s.points) {
    for (int k = 0; k < p.ambient_dim(); ++k) out << (k ? "," : "") << p[k];
    out << "\n";
  }
}

json points_to_json(const PointSequence& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(std::vector<double>(p.coords().data(), p.coords().data() + p.ambient_dim()));
  return {{"dimension", s.points.empty() ? 0 : s.points.front().ambient_dim()},
          {"periodic", s.boundary == Boundary::Periodic},
          {"start", s.start},
          {"points", pts}};
}

Mask mask_from_json(const json& j) {
  if (j.is_string()) return builtin_mask(j.get<std::string>());
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "scheme must be a name or a mask object");
  return Mask::from_range(j.value("name", std::string("custom")), get<int>(j, "start"),
                          get<std::vector<double>>(j, "coefficients"));
}

json mask_to_json(const Mask& m) {
  const int start = m.coefficients().begin()->first;
  const int last = m.coefficients().rbegin()->first;
  std::vector<double> vals;
  for (int i = start; i <= last; ++i) vals.push_back(m.at(i));
  return {{"name", m.name()}, {"start", start}, {"coefficients", vals}};
}

CoefficientPath path_from_json(const json& j) {
  CoefficientPath p;
  p.first = get<int>(j, "first");
  p.base = get<std::vector<double>>(j, "base");
  p.slope = get<std::vector<double>>(j, "slope");
  p.reference = reference_from_json(get<json>(j, "reference"));
  if (j.contains("offsets")) {
    p.offsets = get<std::vector<double>>(j, "offsets");
  } else {
    for (std::size_t k = 0; k < p.base.size(); ++k) {
      p.offsets.push_back(std::abs(p.offset_of(k) - p.reference.position()));
    }
  }
  p.validate();
  return p;
}

json path_to_json(const CoefficientPath& p) {
  json ref = {{"kind", to_string(p.reference.kind)}, {"index", p.reference.index}};
  if (p.reference.kind == ReferenceRule::Kind::WeightedAverage) ref["beta"] = p.reference.beta;
  return {{"first", p.first}, {"base", p.base}, {"slope", p.slope}, {"offsets", p.offsets}, {"reference", ref}};
}

CertificateSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "certificate spec must be a JSON object");
  const json paths = get<json>(j, "paths");
  CertificateSpec spec{
      j.value("label", std::string{}),
      mask_from_json(get<json>(j, "scheme")),
      path_from_json(get<json>(paths, "even")),
      path_from_json(get<json>(paths, "odd")),
      get<double>(j, "r0"),
      get<double>(j, "C0_even"),
      get<double>(j, "C0_odd"),
      j.value("grid_step", kDefaultGridStep),
  };
  if (spec.label.empty()) spec.label = spec.mask.name();
  return spec;
}

json spec_to_json(const CertificateSpec& spec) {
  return {{"label", spec.label},
          {"scheme", mask_to_json(spec.mask)},
          {"r0", spec.r0},
          {"C0_even", spec.C0_even},
          {"C0_odd", spec.C0_odd},
          {"grid_step", spec.grid_step},
          {"paths", {{"even", path_to_json(spec.even_path)}, {"odd", path_to_json(spec.odd_path)}}}};
}

json certificate_to_json(const Certificate& c) {
  json audit = json::array();
  for (const auto& e : c.audit) {
    json a = {{"name", e.name}, {"value", e.value}};
    if (!e.note.empty()) a["note"] = e.note;
    audit.push_back(std::move(a));
  }
  json j = {{"schema_version", kReportSchemaVersion},
            {"label", c.label},
            {"scheme", c.scheme},
            {"status", c.certified ? "Certified" : "Failed"},
            {"r0", c.r0},
            {"C0", c.C0},
            {"C1", c.C1},
            {"initial_speed_coeff", c.initial_speed_coeff},
            {"mu", c.mu},
            {"displacement_coeff", c.displacement_coeff},
            {"well_defined_radius", c.well_defined_radius},
            {"well_defined_radius_reported", c.well_defined_radius_reported},
            {"rules", {{"even", bootstrap_to_json(c.even)}, {"odd", bootstrap_to_json(c.odd)}}},
            {"audit", audit}};
  if (!c.certified) j["failure"] = c.failure;
  return j;
}

json diagnostics_to_json(const RefinementDiagnostics& d) {
  return {{"delta_before", d.delta_before},
          {"delta_after", d.delta_after},
          {"contraction_ratio", d.contraction_ratio},
          {"displacement", d.displacement}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
}

}  // namespace sphsub
