#include "warpbif/spectrum.hpp"
#include "warpbif/errors.hpp"

#include <algorithm>
#include <cmath>

namespace warpbif {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSingularBasis: return "SingularBasis";
    case ErrorCode::kCutoffTooLarge: return "CutoffTooLarge";
    case ErrorCode::kDegeneratePath: return "DegeneratePath";
    case ErrorCode::kInvalidEps: return "InvalidEps";
    case ErrorCode::kModeTooLarge: return "ModeTooLarge";
    case ErrorCode::kNonPositiveCurvature: return "NonPositiveCurvature";
    case ErrorCode::kGroundStateSignFailure: return "GroundStateSignFailure";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kNoNondegenerateEndpoint: return "NoNondegenerateEndpoint";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool same_eigenvalue(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b)) + kMergeAbsFloor;
}

long SpectrumSlice::total_count() const {
  long n = 0;
  for (const auto& e : entries) n += e.multiplicity;
  return n;
}

std::vector<double> SpectrumSlice::expanded() const {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(total_count()));
  for (const auto& e : entries) out.insert(out.end(), static_cast<size_t>(e.multiplicity), e.value);
  return out;
}

SpectrumSlice merge_entries(std::vector<SpectrumEntry> entries, double cutoff) {
  std::sort(entries.begin(), entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value < b.value; });
  SpectrumSlice slice;
  slice.cutoff = cutoff;
  size_t i = 0;
  while (i < entries.size()) {
    const double anchor = entries[i].value;
    double weighted = 0.0;
    int mult = 0;
    size_t j = i;
    while (j < entries.size() && same_eigenvalue(anchor, entries[j].value)) {
      weighted += entries[j].value * entries[j].multiplicity;
      mult += entries[j].multiplicity;
      ++j;
    }
    const double value = mult > 0 ? weighted / mult : anchor;
    if (value <= cutoff && mult > 0) slice.entries.push_back({value, mult});
    i = j;
  }
  return slice;
}

SpectrumSlice merge_values(const std::vector<double>& values, double cutoff) {
  std::vector<SpectrumEntry> entries;
  entries.reserve(values.size());
  for (double v : values) entries.push_back({v, 1});
  return merge_entries(std::move(entries), cutoff);
}

bool same_multiset(const SpectrumSlice& a, const SpectrumSlice& b, double rel_tol) {
  if (a.entries.size() != b.entries.size()) return false;
  for (size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].multiplicity != b.entries[i].multiplicity) return false;
    if (!same_eigenvalue(a.entries[i].value, b.entries[i].value, rel_tol)) return false;
  }
  return true;
}

}  // namespace warpbif
