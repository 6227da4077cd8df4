#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "warpbif/base.hpp"
#include "warpbif/weight.hpp"

namespace warpbif {

struct OperatorEigenvalue {
  double mu = 0.0;
  int multiplicity = 0;
  /// Position in the sorted list of distinct eigenvalues of L_λ.
  int j = 0;
};

/// Eigenvalues μ^j(λ) <= cutoff of L_λ = Δ_M − (k/f)∇_{grad f} + λ/f².
struct OperatorSpectrum {
  double lambda = 0.0;
  double cutoff = 0.0;
  std::vector<OperatorEigenvalue> mus;

  SpectrumSlice as_slice() const;
  std::vector<double> expanded() const;
};

struct OperatorOptions {
  FormOptions forms;
};

/// The operator family {L_λ}_{λ >= 0} for a fixed base and weight.
///
/// L_λ is self-adjoint for the measure f^k dV with quadratic form
/// ∫ f^k ‖∇v‖² + λ ∫ f^{k−2} v², so on an SLBase each Fourier mode is the
/// symmetric-definite pencil (K + λ M₂, M) with K the f^k-weighted stiffness,
/// M₂ the f^{k−2}-weighted mass and M the f^k-weighted mass. Per mode the
/// pencil is reduced once through the Cholesky factor of M; every λ then costs
/// one dense symmetric eigensolve. Reductions are cached, guarded by a mutex.
class OperatorFamily {
 public:
  OperatorFamily(BaseManifold base, WarpWeight weight, OperatorOptions options = {});

  const BaseManifold& base() const { return base_; }
  const WarpWeight& weight() const { return weight_; }

  OperatorSpectrum spectrum(double lambda, double cutoff) const;
  /// The first `count` eigenvalues of L_λ, repeated by multiplicity.
  std::vector<double> lowest(double lambda, int count) const;

 private:
  struct ReducedMode {
    Matrix stiffness;   // L⁻¹ K L⁻ᵀ
    Matrix potential;   // L⁻¹ M₂ L⁻ᵀ
  };

  std::shared_ptr<const ReducedMode> mode(int n) const;
  std::vector<double> mode_eigenvalues(int n, double lambda) const;

  BaseManifold base_;
  WarpWeight weight_;
  OperatorOptions options_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::shared_ptr<const ReducedMode>> cache_;
};

OperatorSpectrum l_lambda_spectrum(const BaseManifold& base, const WarpWeight& w, double lambda,
                                   double cutoff);

/// L₀ never sees the torus, so this takes no lattice.
OperatorSpectrum l0_spectrum(const BaseManifold& base, const WarpWeight& w, double cutoff);

/// (sbar + margin) · max_f²: torus eigenvalues above this cannot produce
/// warped eigenvalues at or below sbar + margin, since μ(λ) >= λ / max_f².
double truncation_lambda_max(double sbar, double margin, const WarpWeight& w);

struct SpectrumSource {
  double lambda = 0.0;
  int j = 0;
};

struct MergedEntry {
  double mu = 0.0;
  long multiplicity = 0;
  std::vector<SpectrumSource> sources;
};

/// Warped-product Laplace spectrum assembled from {μ^j(λ_i)}, complete below cutoff.
struct MergedSpectrum {
  double cutoff = 0.0;
  std::vector<MergedEntry> entries;

  SpectrumSlice as_slice() const;
};

struct MergeOptions {
  int threads = 1;
};

MergedSpectrum merged_spectrum(const OperatorFamily& family, const LatticeBasis& torus,
                               double cutoff, const MergeOptions& options = {});

MergedSpectrum merged_spectrum(const BaseManifold& base, const WarpWeight& w,
                               const LatticeBasis& torus, double cutoff,
                               const MergeOptions& options = {});

struct UpperBoundCheck {
  double bound = 0.0;
  bool satisfied = false;
  double slack = 0.0;
};

/// μ⁰ against λ · ∫ f^{k−2} dV / ∫ f^k dV.
UpperBoundCheck first_eigenvalue_bound(const WarpWeight& w, double lambda, double mu0);

}  // namespace warpbif
