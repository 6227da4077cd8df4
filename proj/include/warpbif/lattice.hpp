#pragma once

#include <Eigen/Dense>

#include <vector>

#include "warpbif/spectrum.hpp"

namespace warpbif {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Basis of a lattice Γ ⊂ ℝ^k with |det| = 1, i.e. a unit-volume flat torus ℝ^k/Γ.
/// Columns are the generators v_1..v_k.
class LatticeBasis {
 public:
  /// Accepts a matrix that is already unimodular (|det| within 1e-10 of 1).
  explicit LatticeBasis(Matrix columns);

  int dim() const { return static_cast<int>(columns_.cols()); }
  const Matrix& columns() const { return columns_; }

 private:
  Matrix columns_;
};

/// Generators w_1..w_k of the dual lattice Γ*, W = (Bᵀ)⁻¹.
class DualBasis {
 public:
  explicit DualBasis(Matrix columns) : columns_(std::move(columns)) {}

  int dim() const { return static_cast<int>(columns_.cols()); }
  const Matrix& columns() const { return columns_; }
  Vector column_norms() const { return columns_.colwise().norm().transpose(); }

 private:
  Matrix columns_;
};

struct EnumerationLimits {
  long max_entries = 1'000'000;
};

/// Scales B by |det B|^(-1/k). Throws SingularBasis when |det B| < 1e-14.
LatticeBasis normalize_unimodular(const Matrix& basis);

DualBasis dual_basis(const LatticeBasis& basis);

/// Inverse of dual_basis: the primal basis whose dual is W.
LatticeBasis primal_from_dual(const Matrix& dual_columns);

/// Torus Laplace eigenvalues 4π²‖W n‖² ≤ cutoff over all n ∈ ℤ^k, n = 0 included.
/// Multiplicity counts the integer vectors landing in one merged bin.
SpectrumSlice enumerate_eigenvalues(const LatticeBasis& basis, double cutoff,
                                    const EnumerationLimits& limits = {});

/// Same enumeration, but for an arbitrary (not necessarily unimodular) dual basis.
SpectrumSlice enumerate_dual_eigenvalues(const Matrix& dual_columns, double cutoff,
                                         const EnumerationLimits& limits = {});

/// Point on the unimodular deformation path (t^{k-1} v_1, v_2/t, ..., v_k/t).
/// Throws DegeneratePath for k = 1 and InvalidArgument for t <= 0.
LatticeBasis path_basis(const LatticeBasis& basis, double t);

/// Length of the shortest nonzero vector of Γ*.
double shortest_dual_norm(const LatticeBasis& basis);

}  // namespace warpbif
