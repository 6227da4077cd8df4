#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "warpbif/base.hpp"
#include "warpbif/bifurcate.hpp"
#include "warpbif/lattice.hpp"
#include "warpbif/warpspec.hpp"
#include "warpbif/weight.hpp"

namespace warpbif {

using Json = nlohmann::ordered_json;

/// Serializes with fixed key order and every double printed with 17
/// significant digits, so equal inputs give byte-identical text.
std::string dump_json(const Json& value, int indent = 2);

/// {"basis": [[column 1], [column 2], ...]}
Json basis_to_json(const Matrix& columns);
/// Reads the "basis" field (an array of column vectors).
Matrix basis_from_json(const Json& value);

/// [{"lambda": λ, "mult": m}, ...]
Json to_json(const SpectrumSlice& slice);
/// [{"mu": μ, "mult": m, "sources": [[λ, j], ...]}, ...]
Json to_json(const MergedSpectrum& spectrum);
Json to_json(const OperatorSpectrum& spectrum);
/// {"S", "k", "f", "residual", "int_f_k", ...}
Json to_json(const WarpWeight& weight);
Json to_json(const HypothesisReport& report);
Json to_json(const SLBase& base);
SLBase sl_base_from_json(const Json& value);

Json certificate_json(const BifurcationBracket& bracket, double sbar, double delta, double eps);
Json certificates_json(const ScanResult& scan, double delta, double eps);

/// Header "t,morse_index,gap,degenerate", one row per sample.
std::string scan_csv(const std::vector<PathSample>& trace);
std::vector<PathSample> parse_scan_csv(const std::string& text);

}  // namespace warpbif
