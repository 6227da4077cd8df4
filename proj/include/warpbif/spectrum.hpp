#pragma once

#include <vector>

namespace warpbif {

/// Relative tolerance under which two computed eigenvalues are treated as one.
inline constexpr double kMergeRelTol = 1e-9;
/// Absolute floor so that round-off around zero still merges.
inline constexpr double kMergeAbsFloor = 1e-12;

bool same_eigenvalue(double a, double b, double rel_tol = kMergeRelTol);

struct SpectrumEntry {
  double value = 0.0;
  int multiplicity = 0;
};

/// Sorted multiset of eigenvalues below a cutoff.
struct SpectrumSlice {
  double cutoff = 0.0;
  std::vector<SpectrumEntry> entries;

  long total_count() const;
  /// Flattened list, each value repeated by its multiplicity.
  std::vector<double> expanded() const;
};

/// Sorts and merges (value, multiplicity) pairs; entries above the cutoff are dropped.
/// A merged bin reports the multiplicity-weighted mean of its members.
SpectrumSlice merge_entries(std::vector<SpectrumEntry> entries, double cutoff);

SpectrumSlice merge_values(const std::vector<double>& values, double cutoff);

/// Multiset equality: same number of bins, equal multiplicities, values within rel_tol.
bool same_multiset(const SpectrumSlice& a, const SpectrumSlice& b, double rel_tol);

}  // namespace warpbif
