#include "warpbif/cli.hpp"
#include "warpbif/errors.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace warpbif {

namespace {

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level_from_env() {
  const char* env = std::getenv("WARPBIF_LOG");
  if (env == nullptr) return LogLevel::kQuiet;
  const std::string v(env);
  if (v == "debug" || v == "2") return LogLevel::kDebug;
  if (v == "info" || v == "1") return LogLevel::kInfo;
  return LogLevel::kQuiet;
}

class Log {
 public:
  Log(std::ostream& err, LogLevel level) : err_(err), level_(level) {}
  void info(const std::string& msg) const {
    if (level_ >= LogLevel::kInfo) err_ << "[warpbif] " << msg << "\n";
  }
  void debug(const std::string& msg) const {
    if (level_ >= LogLevel::kDebug) err_ << "[warpbif:debug] " << msg << "\n";
  }

 private:
  std::ostream& err_;
  LogLevel level_;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSingularBasis:
    case ErrorCode::kDegeneratePath:
    case ErrorCode::kInvalidEps:
    case ErrorCode::kNonPositiveCurvature:
      return kExitConfigError;
    case ErrorCode::kNoNondegenerateEndpoint:
      return kExitHypothesisViolated;
    default:
      return kExitNumericalFailure;
  }
}

class Emitter {
 public:
  Emitter(const CliRequest& request, std::ostream& out) : request_(request), out_(out) {
    if (request_.out_dir) std::filesystem::create_directories(*request_.out_dir);
  }

  // The primary artifact goes to stdout when no directory is given.
  void primary(const std::string& name, const std::string& text) {
    if (request_.out_dir) {
      write_file(name, text);
    } else {
      out_ << text;
    }
  }

  void secondary(const std::string& name, const std::string& text) {
    if (request_.out_dir) write_file(name, text);
  }

 private:
  void write_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::path(*request_.out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kConfigError, "cannot write " + path.string());
    f << text;
  }

  const CliRequest& request_;
  std::ostream& out_;
};

const LatticeBasis& require_lattice(const RunConfig& cfg, const std::string& command) {
  if (!cfg.lattice) throw Error(ErrorCode::kConfigError, command + " needs a \"lattice\"");
  return *cfg.lattice;
}

void require_path_lattice(const RunConfig& cfg, const std::string& command) {
  if (require_lattice(cfg, command).dim() < 2) {
    throw Error(ErrorCode::kConfigError, command + " needs k >= 2 (a 1-torus has one flat metric)");
  }
}

int execute(const CliRequest& request, const RunConfig& cfg, Emitter& emit, const Log& log) {
  const std::string& cmd = request.command;
  if (cmd == "torus-spectrum") {
    const auto& lattice = require_lattice(cfg, cmd);
    emit.primary("torus_spectrum.json", dump_json(to_json(enumerate_eigenvalues(lattice, cfg.cutoff))));
    return kExitOk;
  }

  const WarpWeight weight = solve_weight(cfg.base, cfg.k);
  log.info("S = " + std::to_string(weight.S) + ", residual = " + std::to_string(weight.residual));
  if (cmd == "weight") {
    Json report = to_json(weight);
    if (const auto* sl = std::get_if<SLBase>(&cfg.base)) report["base"] = to_json(*sl);
    emit.primary("weight.json", dump_json(report));
    return kExitOk;
  }

  const OperatorFamily family(cfg.base, weight);
  if (cmd == "warped-spectrum") {
    const auto& lattice = require_lattice(cfg, cmd);
    emit.primary("warped_spectrum.json",
                 dump_json(to_json(merged_spectrum(family, lattice, cfg.cutoff, {cfg.threads}))));
    return kExitOk;
  }

  const HypothesisReport hyp = check_hypothesis(family, cfg.scan.path.delta);
  log.info("sbar = " + std::to_string(hyp.sbar) + ", L0 gap = " + std::to_string(hyp.l0_gap));
  if (cmd == "check-hypothesis") {
    emit.primary("hypothesis.json", dump_json(to_json(hyp)));
    return hyp.pass ? kExitOk : kExitHypothesisViolated;
  }
  if (!hyp.pass) {
    emit.secondary("hypothesis.json", dump_json(to_json(hyp)));
    log.info("sbar lies in Spec(L0); varying the torus cannot certify bifurcation");
    return kExitHypothesisViolated;
  }

  if (cmd == "scan") {
    require_path_lattice(cfg, cmd);
    const ScanResult scan = scan_path(family, *cfg.lattice, cfg.t_min, cfg.t_max, cfg.scan);
    log.info(std::to_string(scan.brackets.size()) + " certificate(s), " + std::to_string(scan.unresolved) +
             " unresolved interval(s)");
    emit.primary("certificates.json", dump_json(certificates_json(scan, cfg.scan.path.delta, cfg.scan.eps)));
    emit.secondary("scan.csv", scan_csv(scan.trace));
    return kExitOk;
  }
  if (cmd == "family-scan") {
    require_path_lattice(cfg, cmd);
    const FamilyResult result = family_scan(family, *cfg.lattice, cfg.family);
    Json samples = Json::array();
    for (size_t i = 0; i < result.samples.size(); ++i) {
      const FamilySample& s = result.samples[i];
      Json item;
      item["index"] = i;
      item["s"] = s.s;
      item["dual"] = basis_to_json(s.dual)["basis"];
      item["rejected"] = s.rejected;
      item["certificates"] = s.rejected ? Json::array() : certificates_json(s.scan, cfg.scan.path.delta, cfg.scan.eps);
      samples.push_back(std::move(item));
    }
    Json report;
    report["rejected"] = result.rejected;
    report["samples"] = std::move(samples);
    if (result.rejected > 0) log.info(std::to_string(result.rejected) + " sample(s) rejected");
    emit.primary("family.json", dump_json(report));
    return kExitOk;
  }
  throw Error(ErrorCode::kConfigError, "unknown command \"" + cmd + "\"");
}

}  // namespace

int run_document(const CliRequest& request, const std::string& config_text, std::ostream& out,
                 std::ostream& err) {
  const Log log(err, log_level_from_env());
  try {
    Json doc;
    try {
      doc = Json::parse(config_text);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kConfigError, std::string("malformed JSON: ") + e.what());
    }
    const RunConfig cfg = parse_config(doc, request.overrides);
    Emitter emit(request, out);
    const auto start = std::chrono::steady_clock::now();
    const int code = execute(request, cfg, emit, log);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    log.debug(request.command + " finished in " + std::to_string(elapsed.count()) + " s");
    return code;
  } catch (const Error& e) {
    err << "warpbif: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "warpbif: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}

int run(const CliRequest& request, std::ostream& out, std::ostream& err) {
  std::ifstream in(request.config_path, std::ios::binary);
  if (!in) {
    err << "warpbif: cannot read config " << request.config_path << "\n";
    return kExitConfigError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return run_document(request, buffer.str(), out, err);
}

}  // namespace warpbif
