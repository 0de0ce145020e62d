#include "helpers.hpp"

#include "sphsub/cli.hpp"
#include "sphsub/errors.hpp"
#include "sphsub/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace sphsub;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("sphsub_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_points(const fs::path& dir, const std::string& name, const PointSequence& s) {
  std::ostringstream os;
  write_points_csv(os, s);
  write_text_file(dir / name, os.str());
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

int count(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("CSV point files") {
  std::istringstream in("# header\n0,0,1\n1, 0, 0  # trailing comment\n\n0,1.0000005,0\n");
  const auto lp = read_points_csv(in);
  CHECK(lp.sequence.size() == 3);
  CHECK(lp.renormalized == 1);
  CHECK(lp.sequence.points[2][1] == doctest::Approx(1.0).epsilon(1e-15));

  std::istringstream far("0,0,1.1\n");
  CHECK_THROWS_AS(read_points_csv(far), Error);
  std::istringstream ragged("0,0,1\n1,0\n");
  CHECK_THROWS_AS(read_points_csv(ragged), Error);
  std::istringstream junk("0,0,x\n");
  CHECK_THROWS_AS(read_points_csv(junk), Error);

  const PointSequence hex = testing::regular_polygon(6, 0.2);
  std::stringstream rt;
  write_points_csv(rt, hex);
  const auto back = read_points_csv(rt);
  for (std::size_t i = 0; i < hex.size(); ++i) CHECK(back.sequence.points[i].coords() == hex.points[i].coords());
}

TEST_CASE("JSON point files") {
  const json j = {{"dimension", 3}, {"periodic", false}, {"points", {{0, 0, 1}, {0, 1, 0}}}};
  const auto lp = read_points_json(j);
  CHECK(lp.sequence.boundary == Boundary::Truncate);
  CHECK(lp.sequence.size() == 2);
  CHECK_THROWS_AS(read_points_json(json{{"dimension", 3}, {"points", {{0, 1}}}}), Error);
  CHECK(points_to_json(lp.sequence)["points"].size() == 2);
}

TEST_CASE("certificate spec JSON round trip") {
  for (const auto& name : builtin_mask_names()) {
    for (const auto& spec : builtin_certificate_specs(name)) {
      const json j = spec_to_json(spec);
      const CertificateSpec back = spec_from_json(json::parse(j.dump()));
      const Certificate a = certify(spec), b = certify(back);
      CHECK(a.certified == b.certified);
      CHECK(a.C1 == b.C1);
      CHECK(a.mu == b.mu);
    }
  }
  // offsets default to polygon distances
  json j = spec_to_json(builtin_certificate_specs("neg-13-21").front());
  j["paths"]["even"].erase("offsets");
  j["scheme"] = "neg-13-21";
  CHECK(certify(spec_from_json(j)).certified);
  j["paths"]["odd"]["reference"]["kind"] = "centroid";
  CHECK_THROWS_AS(spec_from_json(j), Error);

  const json report = certificate_to_json(certify(builtin_certificate_specs("four-point").front()));
  CHECK(report["schema_version"] == kReportSchemaVersion);
  CHECK(report["status"] == "Certified");
  CHECK(report["audit"].size() > 5);
}

TEST_CASE("cli: usage and schemes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"certify", "--r0", "abc"}).code == kExitUsage);
  CHECK(run({"certify", "--scheme", "nope"}).code == kExitUsage);
  CHECK(run({"subdivide", "--scheme", "four-point", "--input", "/nonexistent.csv", "--output", "/tmp/x"}).code ==
        kExitUsage);
  const auto s = run({"schemes"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.find("neg-13-21") != std::string::npos);
}

TEST_CASE("cli: certify") {
  TempDir tmp;
  const auto lr = run({"certify", "--scheme", "lane-riesenfeld-cubic", "--output", (tmp.path / "lr.json").string()});
  CHECK(lr.code == kExitOk);
  const json j = read_json_file(tmp.path / "lr.json");
  REQUIRE(j.is_array());
  CHECK(j.size() == 2);
  CHECK(j[0]["r0"] == 0.25);
  CHECK(j[0]["mu"].get<double>() <= 0.89);
  CHECK(j[1]["r0"] == 0.6);

  const auto fp = run({"certify", "--scheme", "four-point", "--c0-even", "0.26", "--c0-odd", "0.26"});
  CHECK(fp.code == kExitFailure);
  const json fj = json::parse(fp.out);
  CHECK(fj["status"] == "Failed");
  CHECK(fj["failure"].get<std::string>().find("Assumption 3") != std::string::npos);

  CHECK(run({"certify", "--scheme", "lane-riesenfeld-cubic", "--r0", "1.0"}).code == kExitFailure);

  write_text_file(tmp.path / "spec.json", spec_to_json(builtin_certificate_specs("neg-13-21").front()).dump());
  CHECK(run({"certify", "--spec", (tmp.path / "spec.json").string(), "--grid-step", "0.01"}).code == kExitOk);
  write_text_file(tmp.path / "broken.json", "{\"r0\": ");
  CHECK(run({"certify", "--spec", (tmp.path / "broken.json").string()}).code == kExitUsage);
}

TEST_CASE("cli: subdivide") {
  TempDir tmp;
  const auto hex = write_points(tmp.path, "hex.csv", testing::regular_polygon(6, 0.2));
  const auto r = run({"subdivide", "--scheme", "lane-riesenfeld-cubic", "--input", hex.string(), "--output",
                      (tmp.path / "out").string(), "--iterations", "5"});
  REQUIRE(r.code == kExitOk);
  const auto last = load_points(tmp.path / "out" / "level_5.csv");
  CHECK(last.sequence.size() == 192);
  const json d = read_json_file(tmp.path / "out" / "diagnostics.json");
  CHECK(d["levels"].size() == 5);
  for (const auto& lv : d["levels"]) CHECK(lv["contraction_ratio"].get<double>() <= 0.89);

  PointSequence constant;
  constant.points.assign(5, testing::p3(0, 1, 1));
  const auto c = write_points(tmp.path, "const.csv", constant);
  REQUIRE(run({"subdivide", "--scheme", "four-point", "--input", c.string(), "--output", (tmp.path / "c").string(),
               "-k", "2"})
              .code == kExitOk);
  for (const auto& lv : read_json_file(tmp.path / "c" / "diagnostics.json")["levels"])
    CHECK(lv["contraction_ratio"] == 0.0);

  const auto wide = write_points(tmp.path, "wide.csv", testing::regular_polygon(5, 1.2));
  const auto g = run({"subdivide", "--scheme", "neg-13-21", "--input", wide.string(), "--output",
                      (tmp.path / "w").string(), "-k", "3"});
  CHECK(g.code == kExitFailure);
  CHECK(g.err.find("gate violation") != std::string::npos);
  CHECK(g.err.find("0.4") != std::string::npos);

  // custom masks skip the scheme-level gate but keep the per-stencil one
  write_text_file(tmp.path / "mask.json", mask_to_json(builtin_mask("neg-13-21")).dump());
  const auto m = run({"subdivide", "--mask", (tmp.path / "mask.json").string(), "--input", wide.string(),
                      "--output", (tmp.path / "m").string()});
  CHECK(m.code == kExitFailure);
  CHECK(m.err.find("output index") != std::string::npos);

  CHECK(run({"subdivide", "--scheme", "four-point", "--input", hex.string(), "--output", (tmp.path / "z").string(),
             "-k", "0"})
            .code == kExitUsage);
}

TEST_CASE("cli: render") {
  TempDir tmp;
  const auto hex = write_points(tmp.path, "hex.csv", testing::regular_polygon(6, 0.2));
  const auto poly = run({"render", "--input", hex.string()});
  REQUIRE(poly.code == kExitOk);
  CHECK(count(poly.out, "<circle") == 1);
  CHECK(count(poly.out, "<path") == 1);
  CHECK(poly.out.find(" Z\"") != std::string::npos);

  const auto both = run({"render", "--input", hex.string(), "--scheme", "lane-riesenfeld-cubic", "-k", "5"});
  CHECK(count(both.out, "<path") == 2);
  CHECK(both.out == run({"render", "--input", hex.string(), "--scheme", "lane-riesenfeld-cubic", "-k", "5"}).out);
  CHECK(both.out != run({"render", "--input", hex.string(), "--scheme", "lane-riesenfeld-cubic", "-k", "5", "--view",
                         "0,0,1"})
                        .out);

  const auto open = run({"render", "--input", hex.string(), "--open"});
  CHECK(open.out.find(" Z\"") == std::string::npos);

  write_text_file(tmp.path / "s3.csv", "0,0,0,1\n0,0,1,0\n0,1,0,0\n");
  CHECK(run({"render", "--input", (tmp.path / "s3.csv").string()}).code == kExitUsage);
}

TEST_CASE("cli: validate") {
  TempDir tmp;
  const auto r = run({"validate", "--quick", "--seed", "3", "--output", (tmp.path / "v.json").string()});
  CHECK(r.code == kExitOk);
  const json j = read_json_file(tmp.path / "v.json");
  CHECK(j["seed"] == 3);
  CHECK(j["passed"] == true);
  CHECK(r.out.find("FAIL") == std::string::npos);
  const auto again = run({"validate", "--quick", "--seed", "3", "--output", (tmp.path / "w.json").string()});
  CHECK(slurp(tmp.path / "v.json") == slurp(tmp.path / "w.json"));
}
