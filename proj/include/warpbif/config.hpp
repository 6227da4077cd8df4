#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "warpbif/base.hpp"
#include "warpbif/bifurcate.hpp"
#include "warpbif/report.hpp"

namespace warpbif {

/// Parsed and range-checked run configuration. Schema ("base" is required, the
/// rest optional unless a command needs them):
///
///   {
///     "base":    {"kind": "sphere", "dim": 2, "radius": 1.0}      // or "volume"
///              | {"kind": "sphere_x_torus", "dim": 2, "radius": 1.0,
///                 "torus": {"basis": [[...], ...], "volume": 0.0796}}
///              | {"kind": "oblate", "eps": 0.1, "N": 128}
///              | {"kind": "sl", "theta": [...], "h": [...], "R": [...]},
///     "k": 2,
///     "lattice": {"basis": [[1, 0], [0, 1]]},                     // columns
///     "cutoff": 100.0,
///     "scan":   {"t_min": 1, "t_max": 3, "grid": 64, "delta": 1e-6,
///                "eps": 1e-6, "margin": 0, "step": 1e-3, "max_steps": 1000},
///     "family": {"samples": 5, "amplitude": 0.2, "seed": 7},
///     "threads": 1
///   }
///
/// A lattice basis that is not unimodular is rescaled to |det| = 1.
struct RunConfig {
  BaseManifold base = round_sphere(2, 1.0);
  int k = 2;
  std::optional<LatticeBasis> lattice;
  double cutoff = 50.0;
  double t_min = 1.0;
  double t_max = 3.0;
  ScanOptions scan;
  FamilyOptions family;
  int threads = 1;
};

struct ConfigOverrides {
  std::optional<double> delta;
  std::optional<double> eps;
  std::optional<int> grid;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

/// Throws Error(kConfigError) on any schema or range violation.
RunConfig parse_config(const Json& document, const ConfigOverrides& overrides = {});

BaseManifold parse_base(const Json& spec);

}  // namespace warpbif
