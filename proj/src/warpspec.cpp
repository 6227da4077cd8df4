#include "warpbif/warpspec.hpp"
#include "warpbif/errors.hpp"
#include "warpbif/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace warpbif {

namespace {

OperatorSpectrum to_operator_spectrum(double lambda, double cutoff, const SpectrumSlice& slice) {
  OperatorSpectrum out;
  out.lambda = lambda;
  out.cutoff = cutoff;
  int j = 0;
  for (const auto& e : slice.entries) out.mus.push_back({e.value, e.multiplicity, j++});
  return out;
}

}  // namespace

SpectrumSlice OperatorSpectrum::as_slice() const {
  SpectrumSlice s;
  s.cutoff = cutoff;
  for (const auto& m : mus) s.entries.push_back({m.mu, m.multiplicity});
  return s;
}

std::vector<double> OperatorSpectrum::expanded() const { return as_slice().expanded(); }

SpectrumSlice MergedSpectrum::as_slice() const {
  SpectrumSlice s;
  s.cutoff = cutoff;
  for (const auto& e : entries) s.entries.push_back({e.mu, static_cast<int>(e.multiplicity)});
  return s;
}

OperatorFamily::OperatorFamily(BaseManifold base, WarpWeight weight, OperatorOptions options)
    : base_(std::move(base)), weight_(std::move(weight)), options_(options) {
  if (const auto* sl = std::get_if<SLBase>(&base_)) {
    if (static_cast<int>(weight_.f.size()) != sl->nodes()) {
      throw Error(ErrorCode::kInvalidArgument, "weight samples do not match the base grid");
    }
  } else if (!weight_.is_constant()) {
    throw Error(ErrorCode::kInvalidArgument, "analytic bases carry a constant weight");
  }
}

std::shared_ptr<const OperatorFamily::ReducedMode> OperatorFamily::mode(int n) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second;
  }
  const auto& sl = std::get<SLBase>(base_);
  const std::vector<double> fk = weight_.power(weight_.k);
  const std::vector<double> fkm2 = weight_.power(weight_.k - 2);
  const WeightedForms main = assemble_forms(sl, fk, fk, n, options_.forms);
  const WeightedForms pot = assemble_forms(sl, fkm2, fkm2, n, options_.forms);

  Eigen::LLT<Matrix> llt(main.mass.to_dense());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSolverFailure, "mass matrix of mode " + std::to_string(n) +
                                               " is not positive definite");
  }
  auto reduce = [&](const Matrix& a) {
    Matrix x = llt.matrixL().solve(a);
    Matrix c = llt.matrixL().solve(x.transpose()).transpose();
    return Matrix(0.5 * (c + c.transpose()));
  };
  auto reduced = std::make_shared<ReducedMode>();
  reduced->stiffness = reduce(main.stiffness.to_dense());
  reduced->potential = reduce(pot.mass.to_dense());

  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = cache_.emplace(n, std::move(reduced));
  return it->second;
}

std::vector<double> OperatorFamily::mode_eigenvalues(int n, double lambda) const {
  const auto reduced = mode(n);
  const Matrix c = reduced->stiffness + lambda * reduced->potential;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(c, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kSolverFailure, "symmetric eigensolver did not converge");
  }
  const Vector& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

OperatorSpectrum OperatorFamily::spectrum(double lambda, double cutoff) const {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  if (const auto* analytic = std::get_if<AnalyticBase>(&base_)) {
    const double c = weight_.f.front();
    const double shift = lambda / (c * c);
    SpectrumSlice base_part;
    base_part.cutoff = cutoff;
    if (cutoff >= shift) base_part = analytic->spectrum(cutoff - shift);
    for (auto& e : base_part.entries) e.value += shift;
    base_part.cutoff = cutoff;
    return to_operator_spectrum(lambda, cutoff, base_part);
  }

  const auto& sl = std::get<SLBase>(base_);
  const std::vector<double> fk = weight_.power(weight_.k);
  const int n_max = mode_bound(sl, fk, fk, cutoff);
  std::vector<SpectrumEntry> raw;
  for (int n = 0; n <= n_max; ++n) {
    const std::vector<double> ev = mode_eigenvalues(n, lambda);
    bool any = false;
    for (double v : ev) {
      if (v > cutoff) break;
      raw.push_back({v, n == 0 ? 1 : 2});
      any = true;
    }
    // The lowest eigenvalue of mode n increases with n.
    if (!any && n > 0) break;
  }
  return to_operator_spectrum(lambda, cutoff, merge_entries(std::move(raw), cutoff));
}

std::vector<double> OperatorFamily::lowest(double lambda, int count) const {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  if (count <= 0) return {};
  if (std::holds_alternative<AnalyticBase>(base_)) {
    const double c = weight_.f.front();
    double cutoff = lambda / (c * c) + 1.0;
    for (;;) {
      std::vector<double> all = spectrum(lambda, cutoff).expanded();
      if (static_cast<int>(all.size()) >= count) {
        all.resize(static_cast<size_t>(count));
        return all;
      }
      cutoff *= 2.0;
    }
  }
  std::vector<double> all;
  for (int n = 0; n <= options_.forms.max_mode; ++n) {
    const std::vector<double> ev = mode_eigenvalues(n, lambda);
    if (n > 0 && static_cast<int>(all.size()) >= count) {
      std::vector<double> sorted = all;
      std::nth_element(sorted.begin(), sorted.begin() + (count - 1), sorted.end());
      if (ev.front() > sorted[static_cast<size_t>(count - 1)]) break;
    }
    for (double v : ev) {
      all.push_back(v);
      if (n > 0) all.push_back(v);
    }
  }
  std::sort(all.begin(), all.end());
  if (static_cast<int>(all.size()) < count) {
    throw Error(ErrorCode::kSolverFailure, "discretization holds fewer eigenvalues than requested");
  }
  all.resize(static_cast<size_t>(count));
  return all;
}

OperatorSpectrum l_lambda_spectrum(const BaseManifold& base, const WarpWeight& w, double lambda,
                                   double cutoff) {
  return OperatorFamily(base, w).spectrum(lambda, cutoff);
}

OperatorSpectrum l0_spectrum(const BaseManifold& base, const WarpWeight& w, double cutoff) {
  return l_lambda_spectrum(base, w, 0.0, cutoff);
}

double truncation_lambda_max(double sbar, double margin, const WarpWeight& w) {
  if (!(sbar >= 0.0) || !(margin >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sbar and margin must be nonnegative");
  }
  return (sbar + margin) * w.max_f * w.max_f;
}

MergedSpectrum merged_spectrum(const OperatorFamily& family, const LatticeBasis& torus,
                               double cutoff, const MergeOptions& options) {
  const WarpWeight& w = family.weight();
  if (torus.dim() != w.k) {
    throw Error(ErrorCode::kInvalidArgument, "torus dimension " + std::to_string(torus.dim()) +
                                                 " differs from weight k = " + std::to_string(w.k));
  }
  const SpectrumSlice fiber = enumerate_eigenvalues(torus, truncation_lambda_max(cutoff, 0.0, w));
  std::vector<OperatorSpectrum> per_lambda(fiber.entries.size());
  parallel_for(static_cast<int>(fiber.entries.size()), options.threads, [&](int i) {
    per_lambda[static_cast<size_t>(i)] = family.spectrum(fiber.entries[static_cast<size_t>(i)].value, cutoff);
  });

  struct Item {
    double mu;
    long mult;
    SpectrumSource source;
  };
  std::vector<Item> items;
  for (size_t i = 0; i < fiber.entries.size(); ++i) {
    for (const auto& m : per_lambda[i].mus) {
      items.push_back({m.mu, static_cast<long>(fiber.entries[i].multiplicity) * m.multiplicity,
                       {fiber.entries[i].value, m.j}});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return std::tie(a.mu, a.source.lambda, a.source.j) < std::tie(b.mu, b.source.lambda, b.source.j);
  });

  MergedSpectrum out;
  out.cutoff = cutoff;
  size_t i = 0;
  while (i < items.size()) {
    MergedEntry entry;
    double weighted = 0.0;
    size_t j = i;
    while (j < items.size() && same_eigenvalue(items[i].mu, items[j].mu)) {
      weighted += items[j].mu * static_cast<double>(items[j].mult);
      entry.multiplicity += items[j].mult;
      entry.sources.push_back(items[j].source);
      ++j;
    }
    entry.mu = weighted / static_cast<double>(entry.multiplicity);
    if (entry.mu <= cutoff) out.entries.push_back(std::move(entry));
    i = j;
  }
  return out;
}

MergedSpectrum merged_spectrum(const BaseManifold& base, const WarpWeight& w,
                               const LatticeBasis& torus, double cutoff, const MergeOptions& options) {
  return merged_spectrum(OperatorFamily(base, w), torus, cutoff, options);
}

UpperBoundCheck first_eigenvalue_bound(const WarpWeight& w, double lambda, double mu0) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  UpperBoundCheck r;
  r.bound = lambda * w.int_f_km2 / w.int_f_k;
  r.slack = r.bound - mu0;
  r.satisfied = mu0 <= r.bound + 1e-8 * std::max(1.0, std::abs(r.bound));
  return r;
}

}  // namespace warpbif
