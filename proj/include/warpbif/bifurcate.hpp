#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "warpbif/lattice.hpp"
#include "warpbif/warpspec.hpp"

namespace warpbif {

/// Morse threshold S / (m + k − 1) of the warped product M^m ×_f T^k.
double sbar(double S, int m, int k);

/// Threshold of the warped products built from a family (m from the base, k from the weight).
double sbar(const OperatorFamily& family);

struct HypothesisReport {
  double sbar = 0.0;
  /// Distance from sbar to Spec(L₀).
  double l0_gap = 0.0;
  /// Eigenvalue of L₀ realizing the gap.
  double nearest = 0.0;
  double delta = 0.0;
  bool pass = false;
};

/// Tests sbar ∉ Spec(L₀) with tolerance delta. Since 0 ∈ Spec(L₀) the gap is
/// at most sbar, so L₀ is resolved up to 2·sbar + delta.
HypothesisReport check_hypothesis(const OperatorFamily& family, double delta = 1e-6);

struct PathOptions {
  double delta = 1e-6;
  /// Spectrum window above sbar used for the gap; <= 0 selects margin = sbar.
  double margin = 0.0;
  int threads = 1;
};

struct PathSample {
  double t = 0.0;
  long morse_index = 0;
  /// min |μ − sbar| over the merged spectrum in [0, sbar + margin], capped at margin.
  double gap = 0.0;
  bool degenerate = false;
};

/// Index and gap of G_t = g_M + f² g_t with g_t = path_basis(basis, t).
PathSample path_sample(const OperatorFamily& family, const LatticeBasis& basis, double t,
                       const PathOptions& options = {});

struct AdjustOptions {
  double step = 1e-3;
  int max_steps = 1000;
};

/// First t = t0 (1 + step)^i, i >= 0, whose sample is non-degenerate.
/// Throws NoNondegenerateEndpoint after max_steps.
PathSample adjust_endpoint(const OperatorFamily& family, const LatticeBasis& basis, double t0,
                           const PathOptions& options = {}, const AdjustOptions& adjust = {});

/// Path parameter past which the first q multiples of w₁ (first dual column)
/// have dropped below sbar, via μ⁰ <= λ ∫f^{k−2} / ∫f^k:
///   t₁ = [ (∫f^{k−2}/∫f^k) 4π² q² ‖w₁‖² / sbar ]^{1/(2(k−1))} (1 + 1e-9).
double index_growth_t(int q, const WarpWeight& w, const LatticeBasis& basis, double sbar);

/// [t_lo, t_hi] with non-degenerate endpoints of different Morse index; a
/// bifurcation instant lies inside.
struct BifurcationBracket {
  double t_lo = 0.0;
  double t_hi = 0.0;
  long n_lo = 0;
  long n_hi = 0;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  double width = 0.0;
};

struct ScanOptions {
  int grid_points = 64;
  double eps = 1e-6;
  PathOptions path;
  AdjustOptions adjust;
};

struct ScanResult {
  double sbar = 0.0;
  double a = 0.0;   // adjusted start
  double b = 0.0;   // adjusted end
  std::vector<BifurcationBracket> brackets;
  /// Every sample taken, strictly increasing in t.
  std::vector<PathSample> trace;
  int unresolved = 0;
};

ScanResult scan_path(const OperatorFamily& family, const LatticeBasis& basis, double a, double b,
                     const ScanOptions& options = {});

struct FamilyOptions {
  int samples = 5;
  double amplitude = 0.2;
  /// Without a seed, columns w_2..w_k are sheared along w₁; with one, each is
  /// moved along a fixed random direction and the volume restored by rescaling them.
  std::optional<std::uint64_t> seed;
  double t_min = 1.0;
  double t_max = 3.0;
  ScanOptions scan;
};

struct FamilySample {
  double s = 0.0;
  Matrix dual;
  bool rejected = false;
  ScanResult scan;
};

struct FamilyResult {
  std::vector<FamilySample> samples;
  int rejected = 0;
};

/// Scans the paths through nearby lattices whose first dual column w₁ is kept,
/// so ‖w₁‖ is constant across the family. Samples where w₁ is no longer the
/// shortest dual column are rejected and counted.
FamilyResult family_scan(const OperatorFamily& family, const LatticeBasis& basis,
                         const FamilyOptions& options = {});

}  // namespace warpbif
