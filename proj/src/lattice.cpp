#include "warpbif/lattice.hpp"
#include "warpbif/errors.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace warpbif {

namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

// Fincke–Pohst: visits every n with ‖W n‖² <= radius_sq using the Cholesky
// factor R of the Gram matrix WᵀW (‖W n‖² = ‖R n‖²), fixing coordinates from
// the last one down. The visitor receives n and returns false to abort.
void for_each_short_vector(const Matrix& dual, double radius_sq,
                           const std::function<bool(const Eigen::VectorXi&)>& visit) {
  const int k = static_cast<int>(dual.cols());
  const Matrix gram = dual.transpose() * dual;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularBasis, "dual Gram matrix is not positive definite");
  }
  const Matrix r = llt.matrixU();
  const double budget = radius_sq * (1.0 + 1e-10) + std::numeric_limits<double>::min();

  Eigen::VectorXi n = Eigen::VectorXi::Zero(k);
  bool aborted = false;

  std::function<void(int, double)> descend = [&](int i, double remaining) {
    double shift = 0.0;
    for (int j = i + 1; j < k; ++j) shift += r(i, j) * n(j);
    const double center = -shift / r(i, i);
    const double half = std::sqrt(std::max(remaining, 0.0)) / r(i, i);
    const long lo = static_cast<long>(std::ceil(center - half));
    const long hi = static_cast<long>(std::floor(center + half));
    for (long v = lo; v <= hi && !aborted; ++v) {
      n(i) = static_cast<int>(v);
      const double term = r(i, i) * (static_cast<double>(v) - center);
      const double left = remaining - term * term;
      if (left < -1e-12 * budget) continue;
      if (i == 0) {
        if (!visit(n)) aborted = true;
      } else {
        descend(i - 1, left);
      }
    }
    n(i) = 0;
  };
  descend(k - 1, budget);
}

}  // namespace

LatticeBasis::LatticeBasis(Matrix columns) : columns_(std::move(columns)) {
  if (columns_.rows() != columns_.cols() || columns_.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "lattice basis must be a nonempty square matrix");
  }
  const double det = std::abs(columns_.determinant());
  if (std::abs(det - 1.0) > 1e-10) {
    throw Error(ErrorCode::kInvalidArgument,
                "lattice basis is not unimodular (|det| = " + std::to_string(det) + ")");
  }
}

LatticeBasis normalize_unimodular(const Matrix& basis) {
  if (basis.rows() != basis.cols() || basis.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "lattice basis must be a nonempty square matrix");
  }
  const double det = std::abs(basis.determinant());
  if (!(det >= 1e-14)) throw Error(ErrorCode::kSingularBasis, "|det B| < 1e-14");
  const double scale = std::pow(det, -1.0 / static_cast<double>(basis.cols()));
  return LatticeBasis(basis * scale);
}

DualBasis dual_basis(const LatticeBasis& basis) {
  return DualBasis(basis.columns().transpose().inverse());
}

LatticeBasis primal_from_dual(const Matrix& dual_columns) {
  return LatticeBasis(dual_columns.transpose().inverse());
}

SpectrumSlice enumerate_dual_eigenvalues(const Matrix& dual_columns, double cutoff,
                                         const EnumerationLimits& limits) {
  if (!(cutoff >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "cutoff must be >= 0");
  std::vector<double> values;
  for_each_short_vector(dual_columns, cutoff / kFourPiSq, [&](const Eigen::VectorXi& n) {
    const double lambda = kFourPiSq * (dual_columns * n.cast<double>()).squaredNorm();
    if (lambda <= cutoff) {
      if (static_cast<long>(values.size()) >= limits.max_entries) {
        throw Error(ErrorCode::kCutoffTooLarge,
                    "more than " + std::to_string(limits.max_entries) + " lattice vectors below cutoff");
      }
      values.push_back(lambda);
    }
    return true;
  });
  return merge_values(values, cutoff);
}

SpectrumSlice enumerate_eigenvalues(const LatticeBasis& basis, double cutoff,
                                    const EnumerationLimits& limits) {
  return enumerate_dual_eigenvalues(dual_basis(basis).columns(), cutoff, limits);
}

LatticeBasis path_basis(const LatticeBasis& basis, double t) {
  const int k = basis.dim();
  if (k < 2) throw Error(ErrorCode::kDegeneratePath, "k = 1 admits a single unit-volume flat metric");
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "path parameter t must be > 0");
  Matrix out = basis.columns();
  out.col(0) *= std::pow(t, k - 1);
  for (int j = 1; j < k; ++j) out.col(j) /= t;
  return LatticeBasis(std::move(out));
}

double shortest_dual_norm(const LatticeBasis& basis) {
  const Matrix w = dual_basis(basis).columns();
  // The shortest column bounds the answer, so one pass at that radius suffices.
  const double radius_sq = w.colwise().squaredNorm().minCoeff();
  double best = radius_sq;
  for_each_short_vector(w, radius_sq, [&](const Eigen::VectorXi& n) {
    if (n.any()) best = std::min(best, (w * n.cast<double>()).squaredNorm());
    return true;
  });
  return std::sqrt(best);
}

}  // namespace warpbif
