#pragma once

#include <variant>
#include <vector>

#include "warpbif/lattice.hpp"
#include "warpbif/spectrum.hpp"

namespace warpbif {

/// Flat torus factor of an analytic base: a unimodular lattice rescaled to `volume`.
struct TorusFactor {
  LatticeBasis basis;
  double volume = 1.0;
};

/// Constant-curvature base with closed-form spectrum: a round sphere S^m(r),
/// optionally multiplied by flat tori.
class AnalyticBase {
 public:
  AnalyticBase(int sphere_dim, double radius);

  int dim() const;
  double volume() const;
  double scalar_curvature() const { return scalar_curvature_; }
  int sphere_dim() const { return sphere_dim_; }
  double radius() const { return radius_; }
  const std::vector<TorusFactor>& tori() const { return tori_; }

  /// Laplace spectrum up to `cutoff`, sums over all factors.
  SpectrumSlice spectrum(double cutoff) const;

  AnalyticBase with_torus(TorusFactor torus) const;

 private:
  int sphere_dim_;
  double radius_;
  double scalar_curvature_;
  std::vector<TorusFactor> tori_;
};

AnalyticBase round_sphere(int m, double radius);
/// Round sphere S^m of the given total volume.
AnalyticBase round_sphere_with_volume(int m, double volume);
double unit_sphere_volume(int m);

AnalyticBase product_with_flat_torus(const AnalyticBase& base, const LatticeBasis& torus,
                                     double torus_volume);

/// Rotationally symmetric 2-sphere dθ² + h(θ)² dφ² sampled on a uniform θ grid.
class SLBase {
 public:
  /// Validates the grid (uniform, 0 to π), h (zero at the poles, positive inside)
  /// and R (positive everywhere).
  SLBase(std::vector<double> theta, std::vector<double> h, std::vector<double> curvature);

  int dim() const { return 2; }
  int intervals() const { return static_cast<int>(theta_.size()) - 1; }
  int nodes() const { return static_cast<int>(theta_.size()); }
  double spacing() const { return theta_[1] - theta_[0]; }

  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& h() const { return h_; }
  const std::vector<double>& curvature() const { return curvature_; }
  /// Trapezoid weights for ∫₀^π g h dθ; pole weights vanish with h.
  const std::vector<double>& weights() const { return weights_; }

  /// 2π Σ weights_i g_i, i.e. ∫_M g dV for nodal samples g.
  double integrate(const std::vector<double>& g) const;
  double volume() const;
  double max_h() const;

 private:
  std::vector<double> theta_;
  std::vector<double> h_;
  std::vector<double> curvature_;
  std::vector<double> weights_;
};

/// h(θ) = sin θ (1 − ε sin²θ); Gaussian curvature −h″/h, R = 2K.
SLBase oblate_sphere(double eps, int intervals);

using BaseManifold = std::variant<AnalyticBase, SLBase>;

int base_dim(const BaseManifold& base);
double base_volume(const BaseManifold& base);

/// Symmetric tridiagonal matrix: diag has n entries, off has n−1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  int size() const { return static_cast<int>(diag.size()); }
  Matrix to_dense() const;
  std::vector<double> multiply(const std::vector<double>& x) const;
  SymTridiagonal& add_scaled(const SymTridiagonal& other, double scale);
};

/// Solves T x = rhs for symmetric positive definite T; returns false if a pivot
/// is not positive.
bool spd_tridiagonal_solve(const SymTridiagonal& t, std::vector<double>& rhs);
bool is_positive_definite(const SymTridiagonal& t);

/// Pencil for one azimuthal Fourier mode. Mode 0 keeps all nodes (natural ends);
/// mode n >= 1 drops both poles, so row r corresponds to node first_node + r.
struct WeightedForms {
  SymTridiagonal stiffness;
  SymTridiagonal mass;
  int mode = 0;
  int first_node = 0;
};

struct FormOptions {
  int max_mode = 4096;
};

/// Piecewise-linear discretization of
///   stiffness: 2π ∫ a (v′² + n² v²/h²) h dθ,   mass: 2π ∫ b v² h dθ,
/// with a, b and h frozen at cell midpoints (nodal averages).
WeightedForms assemble_forms(const SLBase& base, const std::vector<double>& density_a,
                             const std::vector<double>& density_b, int mode,
                             const FormOptions& options = {});

/// Highest Fourier mode that can still hold an eigenvalue <= cutoff for the pencil
/// with densities (a, b).
int mode_bound(const SLBase& base, const std::vector<double>& density_a,
               const std::vector<double>& density_b, double cutoff);

}  // namespace warpbif
