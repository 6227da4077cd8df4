#pragma once

#include <vector>

#include "warpbif/base.hpp"

namespace warpbif {

/// Weight f of the unit-volume constant-scalar-curvature warped product M ×_f T^k
/// together with the resulting scalar curvature S.
///
/// On an analytic base every sample vector has length one (f is constant);
/// on an SLBase they are nodal samples on the θ grid.
struct WarpWeight {
  int k = 1;
  double S = 0.0;
  std::vector<double> f;
  /// Ground state of (4k/(k+1))Δ + R scaled to max 1.
  std::vector<double> u1;
  /// f = (scale · u1)^{2/(k+1)}.
  double scale = 1.0;
  double residual = 0.0;
  int iterations = 0;
  double int_f_k = 0.0;
  double int_f_km2 = 0.0;
  double max_f = 0.0;
  double min_f = 0.0;

  bool is_constant() const { return f.size() == 1; }
  /// (max f − min f) / max f.
  double nodal_spread() const { return (max_f - min_f) / max_f; }
  /// f^p sampled like f.
  std::vector<double> power(double p) const;
};

struct WeightSolverOptions {
  double rayleigh_rel_tol = 1e-12;
  /// Stop only once ‖A u − S M u‖ / ‖M u‖ <= residual_rel_tol · S as well.
  double residual_rel_tol = 1e-10;
  int max_iterations = 500;
  double sign_tolerance = 1e-10;
};

WarpWeight solve_weight(const BaseManifold& base, int k, const WeightSolverOptions& options = {});

/// Builds f from a positive ground state of any scale: u1 = u / max u, then the
/// constant fixing ∫ f^k dV = 1.
WarpWeight normalize_weight(const SLBase& base, int k, std::vector<double> ground_state, double S);

struct WeightFunctionals {
  double int_f_k = 0.0;
  double int_f_km2 = 0.0;
  double max_f = 0.0;
};

/// ∫ f^k dV, ∫ f^{k−2} dV and max f by the base's quadrature.
WeightFunctionals weight_functionals(const WarpWeight& w, const BaseManifold& base);

}  // namespace warpbif
