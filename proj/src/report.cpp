#include "warpbif/report.hpp"
#include "warpbif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace warpbif {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write(const Json& v, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write(it.value(), indent, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      out += "[";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) {
          out += nl;
          out += pad;
        }
        first = false;
        write(e, indent, depth + 1, out);
      }
      if (!flat) {
        out += nl;
        out += close_pad;
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
  std::string out;
  write(value, indent, 0, out);
  out += "\n";
  return out;
}

Json basis_to_json(const Matrix& columns) {
  Json cols = Json::array();
  for (int j = 0; j < columns.cols(); ++j) {
    Json col = Json::array();
    for (int i = 0; i < columns.rows(); ++i) col.push_back(columns(i, j));
    cols.push_back(std::move(col));
  }
  Json out;
  out["basis"] = std::move(cols);
  return out;
}

Matrix basis_from_json(const Json& value) {
  const Json& cols = value.contains("basis") ? value.at("basis") : value;
  if (!cols.is_array() || cols.empty()) {
    throw Error(ErrorCode::kConfigError, "\"basis\" must be a nonempty array of column vectors");
  }
  const auto k = static_cast<Eigen::Index>(cols.size());
  Matrix m(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Json& col = cols[static_cast<size_t>(j)];
    if (!col.is_array() || static_cast<Eigen::Index>(col.size()) != k) {
      throw Error(ErrorCode::kConfigError, "basis columns must all have length k");
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!col[static_cast<size_t>(i)].is_number()) {
        throw Error(ErrorCode::kConfigError, "basis entries must be numbers");
      }
      m(i, j) = col[static_cast<size_t>(i)].get<double>();
    }
  }
  return m;
}

Json to_json(const SpectrumSlice& slice) {
  Json out = Json::array();
  for (const auto& e : slice.entries) {
    Json item;
    item["lambda"] = e.value;
    item["mult"] = e.multiplicity;
    out.push_back(std::move(item));
  }
  return out;
}

Json to_json(const MergedSpectrum& spectrum) {
  Json out = Json::array();
  for (const auto& e : spectrum.entries) {
    Json item;
    item["mu"] = e.mu;
    item["mult"] = e.multiplicity;
    Json sources = Json::array();
    for (const auto& s : e.sources) sources.push_back(Json::array({s.lambda, s.j}));
    item["sources"] = std::move(sources);
    out.push_back(std::move(item));
  }
  return out;
}

Json to_json(const OperatorSpectrum& spectrum) {
  Json mus = Json::array();
  for (const auto& m : spectrum.mus) {
    Json item;
    item["mu"] = m.mu;
    item["mult"] = m.multiplicity;
    item["j"] = m.j;
    mus.push_back(std::move(item));
  }
  Json out;
  out["lambda"] = spectrum.lambda;
  out["cutoff"] = spectrum.cutoff;
  out["mus"] = std::move(mus);
  return out;
}

Json to_json(const WarpWeight& w) {
  Json out;
  out["S"] = w.S;
  out["k"] = w.k;
  out["f"] = w.f;
  out["residual"] = w.residual;
  out["int_f_k"] = w.int_f_k;
  out["int_f_km2"] = w.int_f_km2;
  out["max_f"] = w.max_f;
  out["min_f"] = w.min_f;
  out["scale"] = w.scale;
  out["iterations"] = w.iterations;
  return out;
}

Json to_json(const HypothesisReport& r) {
  Json out;
  out["sbar"] = r.sbar;
  out["l0_gap"] = r.l0_gap;
  out["nearest"] = r.nearest;
  out["delta"] = r.delta;
  out["pass"] = r.pass;
  return out;
}

Json to_json(const SLBase& base) {
  Json out;
  out["theta"] = base.theta();
  out["h"] = base.h();
  out["R"] = base.curvature();
  return out;
}

SLBase sl_base_from_json(const Json& value) {
  try {
    return SLBase(value.at("theta").get<std::vector<double>>(), value.at("h").get<std::vector<double>>(),
                  value.at("R").get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("SL base: ") + e.what());
  }
}

Json certificate_json(const BifurcationBracket& b, double sbar_value, double delta, double eps) {
  Json out;
  out["t_lo"] = b.t_lo;
  out["t_hi"] = b.t_hi;
  out["n_lo"] = b.n_lo;
  out["n_hi"] = b.n_hi;
  out["gap_lo"] = b.gap_lo;
  out["gap_hi"] = b.gap_hi;
  out["sbar"] = sbar_value;
  out["delta"] = delta;
  out["eps"] = eps;
  return out;
}

Json certificates_json(const ScanResult& scan, double delta, double eps) {
  Json out = Json::array();
  for (const auto& b : scan.brackets) out.push_back(certificate_json(b, scan.sbar, delta, eps));
  return out;
}

std::string scan_csv(const std::vector<PathSample>& trace) {
  std::string out = "t,morse_index,gap,degenerate\n";
  for (const auto& s : trace) {
    out += format_double(s.t) + "," + std::to_string(s.morse_index) + "," + format_double(s.gap) + "," +
           (s.degenerate ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<PathSample> parse_scan_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<PathSample> out;
  if (!std::getline(in, line) || line != "t,morse_index,gap,degenerate") {
    throw Error(ErrorCode::kConfigError, "unexpected scan CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t, n, gap, deg;
    if (!std::getline(row, t, ',') || !std::getline(row, n, ',') || !std::getline(row, gap, ',') ||
        !std::getline(row, deg)) {
      throw Error(ErrorCode::kConfigError, "malformed scan CSV row: " + line);
    }
    out.push_back({std::stod(t), std::stol(n), std::stod(gap), deg == "1"});
  }
  return out;
}

}  // namespace warpbif
