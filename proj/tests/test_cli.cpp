#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "warpbif/cli.hpp"

using namespace warpbif;
using doctest::Approx;

namespace {

const std::string kData = WARPBIF_TEST_DATA;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_file(const std::string& command, const std::string& file, ConfigOverrides overrides = {},
                 std::optional<std::string> out_dir = std::nullopt) {
  CliRequest req{command, kData + "/" + file, std::move(out_dir), overrides};
  std::ostringstream out, err;
  Outcome o;
  o.code = run(req, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

Outcome run_text(const std::string& command, const std::string& text) {
  CliRequest req{command, "<inline>", std::nullopt, {}};
  std::ostringstream out, err;
  Outcome o;
  o.code = run_document(req, text, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome run_binary(const std::string& args) {
  const std::string cmd = std::string(WARPBIF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Outcome o;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("warpbif_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("reference scan certifies one crossing") {
  const Outcome o = run_file("scan", "reference.json");
  REQUIRE(o.code == kExitOk);
  const Json certs = Json::parse(o.out);
  REQUIRE(certs.size() == 1);
  const double crossing = std::sqrt(1.5 * std::numbers::pi);
  CHECK(certs[0]["t_lo"].get<double>() < crossing);
  CHECK(certs[0]["t_hi"].get<double>() > crossing);
  CHECK(certs[0]["t_hi"].get<double>() - certs[0]["t_lo"].get<double>() <= 1e-6);
  CHECK(certs[0]["n_lo"] == 1);
  CHECK(certs[0]["n_hi"] == 3);
  CHECK(certs[0]["sbar"].get<double>() == Approx(8 * std::numbers::pi / 3));
}

TEST_CASE("commands on the reference configuration") {
  const Json torus = Json::parse(run_file("torus-spectrum", "reference.json").out);
  REQUIRE(torus.size() == 2);
  CHECK(torus[1]["mult"] == 4);

  const Json weight = Json::parse(run_file("weight", "reference.json").out);
  CHECK(weight["S"].get<double>() == Approx(8 * std::numbers::pi));
  CHECK(weight["f"].size() == 1);

  const Json warped = Json::parse(run_file("warped-spectrum", "reference.json").out);
  REQUIRE(warped.size() == 3);
  CHECK(warped[0]["mult"] == 1);
  CHECK(warped[2]["mult"] == 4);

  const Outcome hyp = run_file("check-hypothesis", "reference.json");
  CHECK(hyp.code == kExitOk);
  CHECK(Json::parse(hyp.out)["pass"] == true);

  const Json family = Json::parse(run_file("family-scan", "reference.json").out);
  CHECK(family["rejected"] == 0);
  CHECK(family["samples"].size() == 5);
  for (const auto& s : family["samples"]) CHECK(s["certificates"].size() == 1);
}

TEST_CASE("exit codes") {
  const Outcome deg = run_file("check-hypothesis", "degenerate.json");
  CHECK(deg.code == kExitHypothesisViolated);
  CHECK(Json::parse(deg.out)["pass"] == false);
  CHECK(run_file("scan", "degenerate.json").code == kExitHypothesisViolated);

  CHECK(run_file("scan", "malformed.json").code == kExitConfigError);
  CHECK(run_file("scan", "does_not_exist.json").code == kExitConfigError);
  CHECK(run_text("scan", R"({"k": 0})").code == kExitConfigError);
  CHECK(run_text("weight", R"({"base": {"kind": "oblate", "eps": 1.0, "N": 64}})").code == kExitConfigError);
  CHECK(run_text("weight", R"({"base": {"kind": "torus"}})").code == kExitConfigError);
  CHECK(run_text("torus-spectrum", R"({"base": {"kind": "sphere", "dim": 2}, "lattice": {"basis": [[1, 2], [2, 4]]}})").code == kExitConfigError);
  CHECK(run_text("torus-spectrum", R"({"base": {"kind": "sphere", "dim": 2}, "k": 3, "lattice": {"basis": [[1, 0], [0, 1]]}})").code ==
        kExitConfigError);
  CHECK(run_text("scan", R"({"base": {"kind": "sphere", "dim": 2}, "k": 1, "lattice": {"basis": [[1]]}})").code == kExitConfigError);
  CHECK(run_text("scan", "{}").code == kExitConfigError);
  const Outcome huge = run_text("torus-spectrum", R"({"base": {"kind": "sphere", "dim": 2}, "lattice": {"basis": [[1, 0], [0, 1]]}, "cutoff": 1e12})");
  CHECK(huge.code == kExitNumericalFailure);
  CHECK(huge.err.find("CutoffTooLarge") != std::string::npos);
}

TEST_CASE("overrides") {
  ConfigOverrides coarse;
  coarse.grid = 8;
  coarse.eps = 1e-3;
  const Json certs = Json::parse(run_file("scan", "reference.json", coarse).out);
  REQUIRE(certs.size() == 1);
  CHECK(certs[0]["eps"].get<double>() == 1e-3);
  CHECK(certs[0]["t_hi"].get<double>() - certs[0]["t_lo"].get<double>() <= 1e-3);

  ConfigOverrides bad;
  bad.eps = -1.0;
  CHECK(run_file("scan", "reference.json", bad).code == kExitConfigError);
}

TEST_CASE("output is byte-identical across runs and thread counts") {
  const std::string first = run_file("scan", "oblate.json").out;
  CHECK(run_file("scan", "oblate.json").out == first);
  ConfigOverrides threaded;
  threaded.threads = 3;
  CHECK(run_file("scan", "oblate.json", threaded).out == first);
  CHECK(run_file("warped-spectrum", "oblate.json", threaded).out == run_file("warped-spectrum", "oblate.json").out);
}

TEST_CASE("scan trace reloads and reproduces the reported indices") {
  const auto dir = scratch("trace");
  const Outcome o = run_file("scan", "oblate.json", {}, dir.string());
  REQUIRE(o.code == kExitOk);
  CHECK(o.out.empty());
  const Json certs = Json::parse(slurp(dir / "certificates.json"));
  const std::vector<PathSample> trace = parse_scan_csv(slurp(dir / "scan.csv"));
  REQUIRE(certs.size() == 1);
  REQUIRE(trace.size() > 16);

  const RunConfig cfg = parse_config(Json::parse(slurp(kData + "/oblate.json")));
  const OperatorFamily family(cfg.base, solve_weight(cfg.base, cfg.k));
  for (size_t i = 0; i < trace.size(); i += 7) {
    const PathSample again = path_sample(family, *cfg.lattice, trace[i].t, cfg.scan.path);
    CHECK(again.morse_index == trace[i].morse_index);
    CHECK(again.degenerate == trace[i].degenerate);
  }
  bool lo_found = false, hi_found = false;
  for (const auto& s : trace) {
    if (s.t == certs[0]["t_lo"].get<double>()) lo_found = s.morse_index == certs[0]["n_lo"].get<long>();
    if (s.t == certs[0]["t_hi"].get<double>()) hi_found = s.morse_index == certs[0]["n_hi"].get<long>();
  }
  CHECK(lo_found);
  CHECK(hi_found);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sampled base round-trips through the weight report") {
  const Json report = Json::parse(run_file("weight", "oblate.json").out);
  REQUIRE(report.contains("base"));
  Json cfg;
  cfg["base"] = report["base"];
  cfg["base"]["kind"] = "sl";
  cfg["k"] = 2;
  const Json again = Json::parse(run_text("weight", cfg.dump()).out);
  CHECK(again["S"].get<double>() == report["S"].get<double>());
  CHECK(again["f"] == report["f"]);
}

TEST_CASE("installed binary") {
  const std::string ref = kData + "/reference.json";
  const Outcome a = run_binary("scan --config " + ref);
  CHECK(a.code == 0);
  CHECK(a.out == run_file("scan", "reference.json").out);
  CHECK(run_binary("check-hypothesis --config " + kData + "/degenerate.json").code == 2);
  CHECK(run_binary("scan --config " + kData + "/malformed.json").code == 4);
  CHECK(run_binary("no-such-command --config " + ref).code == 4);
  CHECK(run_binary("scan").code == 4);
  CHECK(run_binary("scan --config " + ref + " --grid 8 --threads 2").out ==
        run_binary("scan --config " + ref + " --grid 8").out);
}
