#include "warpbif/config.hpp"
#include "warpbif/errors.hpp"

#include <string>

namespace warpbif {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::kConfigError, what); }

double number(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) fail(std::string("\"") + key + "\" must be a number");
  return obj.at(key).get<double>();
}

int integer(const Json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) fail(std::string("\"") + key + "\" must be an integer");
  return obj.at(key).get<int>();
}

AnalyticBase parse_sphere(const Json& spec) {
  const int dim = integer(spec, "dim", 2);
  if (dim < 2) fail("sphere dim must be >= 2");
  if (spec.contains("radius") && spec.contains("volume")) fail("give either radius or volume, not both");
  if (spec.contains("volume")) {
    const double vol = number(spec, "volume", 1.0);
    if (!(vol > 0.0)) fail("sphere volume must be > 0");
    return round_sphere_with_volume(dim, vol);
  }
  const double radius = number(spec, "radius", 1.0);
  if (!(radius > 0.0)) fail("sphere radius must be > 0");
  return round_sphere(dim, radius);
}

LatticeBasis parse_lattice(const Json& spec) {
  try {
    return normalize_unimodular(basis_from_json(spec));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    fail(std::string("lattice: ") + e.what());
  }
}

}  // namespace

BaseManifold parse_base(const Json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string()) {
    fail("\"base\" must be an object with a string \"kind\"");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  try {
    if (kind == "sphere") return parse_sphere(spec);
    if (kind == "sphere_x_torus") {
      if (!spec.contains("torus")) fail("sphere_x_torus needs a \"torus\" object");
      const Json& torus = spec.at("torus");
      const double vol = number(torus, "volume", 1.0);
      if (!(vol > 0.0)) fail("torus volume must be > 0");
      return product_with_flat_torus(parse_sphere(spec), parse_lattice(torus), vol);
    }
    if (kind == "oblate") {
      const double eps = number(spec, "eps", 0.0);
      const int n = integer(spec, "N", 128);
      if (n < 16) fail("oblate N must be >= 16");
      return oblate_sphere(eps, n);
    }
    if (kind == "sl") return sl_base_from_json(spec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    fail(std::string("base: ") + e.what());
  }
  fail("unknown base kind \"" + kind + "\"");
}

RunConfig parse_config(const Json& doc, const ConfigOverrides& overrides) {
  if (!doc.is_object()) fail("config must be a JSON object");
  RunConfig cfg;
  if (!doc.contains("base")) fail("config needs a \"base\"");
  cfg.base = parse_base(doc.at("base"));

  cfg.k = integer(doc, "k", 2);
  if (cfg.k < 1 || cfg.k > 8) fail("k must be in [1, 8]");
  if (base_dim(cfg.base) + cfg.k < 3) fail("warped product must have dimension >= 3");
  if (doc.contains("lattice")) {
    cfg.lattice = parse_lattice(doc.at("lattice"));
    if (cfg.lattice->dim() != cfg.k) fail("lattice dimension must equal k");
  }
  cfg.cutoff = number(doc, "cutoff", cfg.cutoff);
  if (!(cfg.cutoff >= 0.0)) fail("cutoff must be >= 0");

  cfg.threads = integer(doc, "threads", 1);
  if (overrides.threads) cfg.threads = *overrides.threads;
  if (cfg.threads < 1) fail("threads must be >= 1");

  const Json scan = doc.contains("scan") ? doc.at("scan") : Json::object();
  if (!scan.is_object()) fail("\"scan\" must be an object");
  cfg.t_min = number(scan, "t_min", 1.0);
  cfg.t_max = number(scan, "t_max", 3.0);
  cfg.scan.grid_points = overrides.grid.value_or(integer(scan, "grid", 64));
  cfg.scan.eps = overrides.eps.value_or(number(scan, "eps", 1e-6));
  cfg.scan.path.delta = overrides.delta.value_or(number(scan, "delta", 1e-6));
  cfg.scan.path.margin = number(scan, "margin", 0.0);
  cfg.scan.path.threads = cfg.threads;
  cfg.scan.adjust.step = number(scan, "step", 1e-3);
  cfg.scan.adjust.max_steps = integer(scan, "max_steps", 1000);
  if (!(cfg.t_min > 0.0) || !(cfg.t_min < cfg.t_max)) fail("scan needs 0 < t_min < t_max");
  if (cfg.scan.grid_points < 2) fail("grid must be >= 2");
  if (!(cfg.scan.eps > 0.0)) fail("eps must be > 0");
  if (!(cfg.scan.path.delta > 0.0)) fail("delta must be > 0");
  if (!(cfg.scan.adjust.step > 0.0)) fail("step must be > 0");
  if (cfg.scan.adjust.max_steps < 0) fail("max_steps must be >= 0");

  const Json family = doc.contains("family") ? doc.at("family") : Json::object();
  if (!family.is_object()) fail("\"family\" must be an object");
  cfg.family.samples = integer(family, "samples", 5);
  cfg.family.amplitude = number(family, "amplitude", 0.2);
  if (family.contains("seed")) {
    if (!family.at("seed").is_number_unsigned()) fail("seed must be a nonnegative integer");
    cfg.family.seed = family.at("seed").get<std::uint64_t>();
  }
  if (overrides.seed) cfg.family.seed = overrides.seed;
  if (cfg.family.samples < 1) fail("family samples must be >= 1");
  if (!(cfg.family.amplitude >= 0.0)) fail("family amplitude must be >= 0");
  cfg.family.t_min = cfg.t_min;
  cfg.family.t_max = cfg.t_max;
  cfg.family.scan = cfg.scan;
  return cfg;
}

}  // namespace warpbif
