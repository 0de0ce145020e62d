#include "sphsub/cli.hpp"

#include "sphsub/certify.hpp"
#include "sphsub/errors.hpp"
#include "sphsub/io.hpp"
#include "sphsub/render.hpp"
#include "sphsub/schemes.hpp"
#include "sphsub/validate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace sphsub {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string scheme;
  std::string mask_file;
  std::string input;
  std::string output;
  std::string spec;
  std::string view;
  int iterations = 1;
  std::uint64_t seed = 1;
  double grid_step = kDefaultGridStep;
  bool grid_step_set = false;
  std::optional<double> r0, c0_even, c0_odd;
  bool open = false;
  bool quick = false;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
    case ErrorKind::UnknownScheme:
    case ErrorKind::ContractViolation:
    case ErrorKind::DimensionUnsupported:
    case ErrorKind::LengthMismatch:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Mask resolve_mask(const Options& o) {
  if (!o.mask_file.empty()) return mask_from_json(read_json_file(o.mask_file));
  if (o.scheme.empty()) throw Error(ErrorKind::ContractViolation, "one of --scheme or --mask is required");
  return builtin_mask(o.scheme);
}

LoadedPoints load_input(const Options& o, std::ostream& err) {
  if (o.input.empty()) throw Error(ErrorKind::ContractViolation, "--input is required");
  auto lp = load_points(o.input, o.open ? std::optional<Boundary>(Boundary::Truncate) : std::nullopt);
  if (lp.renormalized > 0) err << "note: renormalized " << lp.renormalized << " input point(s)\n";
  if (lp.sequence.size() < 2) throw Error(ErrorKind::ParseError, "input needs at least two points");
  return lp;
}

int cmd_subdivide(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.iterations < 1) throw Error(ErrorKind::ContractViolation, "--iterations must be at least 1");
  if (o.output.empty()) throw Error(ErrorKind::ContractViolation, "--output directory is required");
  const Mask mask = resolve_mask(o);
  const auto data = load_input(o, err).sequence;

  json report = {{"schema_version", kReportSchemaVersion},
                 {"scheme", mask.name()},
                 {"boundary", to_string(data.boundary)},
                 {"iterations", o.iterations}};
  const bool builtin = o.mask_file.empty();
  if (builtin) {
    const ConvergenceGate g = convergence_gate(mask.name(), data);
    report["gate"] = {{"delta", g.delta}, {"threshold", g.threshold}, {"accepted", g.accepted}};
    if (!g.accepted) {
      err << "gate violation: delta(x) = " << fmt(g.delta) << " is not below the certified radius "
          << fmt(g.threshold) << " of " << mask.name() << "\n"
          << "hint: refine or resample the input until consecutive points are closer than " << fmt(g.threshold)
          << "\n";
      write_text_file(fs::path(o.output) / "diagnostics.json", report.dump(2) + "\n");
      return kExitFailure;
    }
  } else {
    err << "note: custom mask has no convergence certificate; only the per-stencil gate applies\n";
  }

  std::vector<Level> levels;
  try {
    levels = iterate(mask, data, o.iterations);
  } catch (const GateError& e) {
    err << "gate violation at output index " << e.output_index() << ": " << e.report().describe() << "\n"
        << "hint: reduce delta(x) below the certified r0 of the scheme\n";
    return kExitFailure;
  }

  auto write_level = [&](int k, const PointSequence& s) {
    std::ostringstream os;
    write_points_csv(os, s);
    write_text_file(fs::path(o.output) / ("level_" + std::to_string(k) + ".csv"), os.str());
  };
  write_level(0, data);
  json lv = json::array();
  for (std::size_t k = 0; k < levels.size(); ++k) {
    write_level(static_cast<int>(k + 1), levels[k].points);
    json d = diagnostics_to_json(levels[k].diagnostics);
    d["level"] = k + 1;
    d["points"] = levels[k].points.size();
    lv.push_back(d);
    out << "level " << k + 1 << ": " << levels[k].points.size() << " points, delta "
        << fmt(levels[k].diagnostics.delta_after) << ", ratio " << fmt(levels[k].diagnostics.contraction_ratio)
        << ", displacement " << fmt(levels[k].diagnostics.displacement) << "\n";
  }
  report["levels"] = lv;
  write_text_file(fs::path(o.output) / "diagnostics.json", report.dump(2) + "\n");
  return kExitOk;
}

void apply_overrides(CertificateSpec& s, const Options& o) {
  if (o.r0) s.r0 = *o.r0;
  if (o.c0_even) s.C0_even = *o.c0_even;
  if (o.c0_odd) s.C0_odd = *o.c0_odd;
  if (o.grid_step_set) s.grid_step = o.grid_step;
}

int cmd_certify(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<CertificateSpec> specs;
  if (!o.spec.empty()) {
    specs.push_back(spec_from_json(read_json_file(o.spec)));
  } else if (!o.scheme.empty()) {
    builtin_mask(o.scheme);  // unknown names fail here with a usage error
    specs = builtin_certificate_specs(o.scheme);
    if (specs.empty()) throw Error(ErrorKind::UnknownScheme, "no built-in certificate spec for '" + o.scheme + "'");
  } else {
    throw Error(ErrorKind::ContractViolation, "one of --spec or --scheme is required");
  }

  json reports = json::array();
  bool all = true;
  std::ostream& summary = o.output.empty() ? err : out;
  for (auto& s : specs) {
    apply_overrides(s, o);
    const Certificate c = certify(s);
    all = all && c.certified;
    reports.push_back(certificate_to_json(c));
    summary << c.label << ": " << (c.certified ? "Certified" : "Failed") << "  r0 " << fmt(c.r0) << "  C0 "
            << fmt(c.C0) << "  C1 " << fmt(c.C1) << "  mu " << fmt(c.mu) << "  C " << fmt(c.displacement_coeff)
            << "\n";
    if (!c.certified) summary << "  failure: " << c.failure << "\n";
  }
  const json doc = reports.size() == 1 ? reports.front() : reports;
  if (o.output.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    write_text_file(o.output, doc.dump(2) + "\n");
  }
  return all ? kExitOk : kExitFailure;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  ValidationOptions vo;
  vo.seed = o.seed;
  if (o.quick) {
    vo.gamma_stencils = 5;
    vo.domination_polygons = 10;
  }
  const ValidationReport r = run_validation(vo);
  for (const auto& c : r.checks) {
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << "  max_error " << fmt(c.max_error) << "  tol "
        << fmt(c.tolerance) << "  trials " << c.trials << "  violations " << c.violations << "\n";
  }
  if (!o.output.empty()) write_text_file(o.output, validation_to_json(r).dump(2) + "\n");
  return r.passed() ? kExitOk : kExitFailure;
}

Vec parse_view(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad --view component '" + cell + "'");
    }
  }
  if (v.size() != 3) throw Error(ErrorKind::ParseError, "--view needs three comma separated numbers");
  Vec out = Eigen::Map<Vec>(v.data(), 3);
  if (out.norm() == 0.0) throw Error(ErrorKind::ParseError, "--view must be nonzero");
  return out.normalized();
}

int cmd_render(const Options& o, std::ostream& out, std::ostream& err) {
  const auto data = load_input(o, err).sequence;
  RenderOptions ro;
  if (!o.view.empty()) ro.view = parse_view(o.view);
  std::optional<PointSequence> refined;
  if (o.iterations > 0 && (!o.scheme.empty() || !o.mask_file.empty())) {
    refined = iterate(resolve_mask(o), data, o.iterations).back().points;
  }
  const std::string svg = render_svg(data, refined ? &*refined : nullptr, ro);
  if (o.output.empty()) {
    out << svg;
  } else {
    write_text_file(o.output, svg);
  }
  return kExitOk;
}

int cmd_schemes(std::ostream& out) {
  for (const auto& name : builtin_mask_names()) {
    const Mask m = builtin_mask(name);
    out << name << "\n  mask:";
    for (const auto& [i, a] : m.coefficients()) out << " a[" << i << "]=" << fmt(a);
    out << "\n";
    if (const auto r = certified_radius(name)) out << "  certified for delta < " << fmt(*r) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riemannian subdivision on the unit sphere"};
  app.require_subcommand(1);
  Options o;
  double r0 = 0, c0e = 0, c0o = 0;

  auto* sub = app.add_subcommand("subdivide", "refine a point sequence");
  sub->add_option("--scheme", o.scheme, "built-in scheme name");
  sub->add_option("--mask", o.mask_file, "JSON mask file");
  sub->add_option("--input", o.input, "CSV or JSON point file")->required();
  sub->add_option("--output", o.output, "output directory")->required();
  sub->add_option("--iterations,-k", o.iterations, "number of levels");
  sub->add_flag("--open", o.open, "treat the input as an open polyline");

  auto* cert = app.add_subcommand("certify", "verify convergence certificates");
  cert->add_option("--scheme", o.scheme, "built-in scheme name");
  cert->add_option("--spec", o.spec, "JSON certificate spec");
  cert->add_option("--output", o.output, "report file (default: standard output)");
  auto* gs = cert->add_option("--grid-step", o.grid_step, "t-grid spacing");
  auto* r0o = cert->add_option("--r0", r0, "override r0");
  auto* c0eo = cert->add_option("--c0-even", c0e, "override C0 of the even rule");
  auto* c0oo = cert->add_option("--c0-odd", c0o, "override C0 of the odd rule");

  auto* val = app.add_subcommand("validate", "run the oracle suite");
  val->add_option("--seed", o.seed, "random seed");
  val->add_option("--output", o.output, "JSON report file");
  val->add_flag("--quick", o.quick, "fewer random trials");

  auto* ren = app.add_subcommand("render", "export an SVG projection (S^2 only)");
  ren->add_option("--input", o.input, "CSV or JSON point file")->required();
  ren->add_option("--output", o.output, "SVG file (default: standard output)");
  ren->add_option("--scheme", o.scheme, "scheme for the refined curve");
  ren->add_option("--mask", o.mask_file, "JSON mask file for the refined curve");
  ren->add_option("--iterations,-k", o.iterations, "levels of refinement (0: polygon only)");
  ren->add_option("--view", o.view, "view direction x,y,z");
  ren->add_flag("--open", o.open, "treat the input as an open polyline");

  auto* sch = app.add_subcommand("schemes", "list built-in schemes");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  o.grid_step_set = gs->count() > 0;
  if (r0o->count()) o.r0 = r0;
  if (c0eo->count()) o.c0_even = c0e;
  if (c0oo->count()) o.c0_odd = c0o;
  if (ren->parsed() && !ren->get_option("--iterations")->count()) o.iterations = 0;

  try {
    if (sub->parsed()) return cmd_subdivide(o, out, err);
    if (cert->parsed()) return cmd_certify(o, out, err);
    if (val->parsed()) return cmd_validate(o, out, err);
    if (ren->parsed()) return cmd_render(o, out, err);
    if (sch->parsed()) return cmd_schemes(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sphsub
