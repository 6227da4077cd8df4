#include "warpbif/bifurcate.hpp"
#include "warpbif/errors.hpp"
#include "warpbif/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace warpbif {

namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

class Bisector {
 public:
  Bisector(const OperatorFamily& family, const LatticeBasis& basis, const ScanOptions& options,
           ScanResult& result)
      : family_(family), basis_(basis), options_(options), result_(result) {}

  void run(const PathSample& lo, const PathSample& hi) {
    if (lo.morse_index == hi.morse_index) return;
    if (hi.t - lo.t <= options_.eps) {
      push(lo, hi);
      return;
    }
    const double mid = 0.5 * (lo.t + hi.t);
    const PathSample s = sample(mid);
    if (!s.degenerate) {
      // Recurse into every half that still shows an index change.
      run(lo, s);
      run(s, hi);
      return;
    }
    // mid lies in a degenerate band; bracket the band by its nearest
    // non-degenerate neighbours on either side.
    const PathSample left = band_edge(lo, mid);
    const PathSample right = band_edge(hi, mid);
    run(lo, left);
    if (left.morse_index != right.morse_index) {
      if (right.t - left.t <= options_.eps)
        push(left, right);
      else
        ++result_.unresolved;
    }
    run(right, hi);
  }

 private:
  PathSample sample(double t) {
    PathSample s = path_sample(family_, basis_, t, options_.path);
    result_.trace.push_back(s);
    return s;
  }

  void push(const PathSample& lo, const PathSample& hi) {
    result_.brackets.push_back({lo.t, hi.t, lo.morse_index, hi.morse_index, lo.gap, hi.gap, hi.t - lo.t});
  }

  // Non-degenerate sample between `outer` (non-degenerate) and the degenerate
  // point `inner`, as close to `inner` as bisection to eps/8 allows.
  PathSample band_edge(const PathSample& outer, double inner) {
    PathSample good = outer;
    double bad = inner;
    while (std::abs(good.t - bad) > options_.eps / 8.0) {
      const PathSample s = sample(0.5 * (good.t + bad));
      if (s.degenerate)
        bad = s.t;
      else
        good = s;
    }
    return good;
  }

  const OperatorFamily& family_;
  const LatticeBasis& basis_;
  const ScanOptions& options_;
  ScanResult& result_;
};

}  // namespace

double sbar(double S, int m, int k) {
  if (m + k < 3) throw Error(ErrorCode::kInvalidArgument, "warped product must have dimension >= 3");
  return S / static_cast<double>(m + k - 1);
}

double sbar(const OperatorFamily& family) {
  return sbar(family.weight().S, base_dim(family.base()), family.weight().k);
}

HypothesisReport check_hypothesis(const OperatorFamily& family, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be > 0");
  HypothesisReport report;
  report.sbar = sbar(family);
  report.delta = delta;
  const OperatorSpectrum l0 = family.spectrum(0.0, 2.0 * report.sbar + delta);
  report.l0_gap = std::numeric_limits<double>::infinity();
  for (const auto& m : l0.mus) {
    const double d = std::abs(m.mu - report.sbar);
    if (d < report.l0_gap) {
      report.l0_gap = d;
      report.nearest = m.mu;
    }
  }
  report.pass = report.l0_gap >= delta;
  return report;
}

PathSample path_sample(const OperatorFamily& family, const LatticeBasis& basis, double t,
                       const PathOptions& options) {
  const double threshold = sbar(family);
  const double margin = options.margin > 0.0 ? options.margin : threshold;
  const MergedSpectrum spec =
      merged_spectrum(family, path_basis(basis, t), threshold + margin, {options.threads});
  PathSample s;
  s.t = t;
  s.gap = margin;
  const double tol = kMergeRelTol * threshold;
  for (const auto& e : spec.entries) {
    if (e.mu < threshold - tol) s.morse_index += e.multiplicity;
    s.gap = std::min(s.gap, std::abs(e.mu - threshold));
  }
  s.degenerate = s.gap < options.delta;
  return s;
}

PathSample adjust_endpoint(const OperatorFamily& family, const LatticeBasis& basis, double t0,
                           const PathOptions& options, const AdjustOptions& adjust) {
  double t = t0;
  for (int i = 0; i <= adjust.max_steps; ++i) {
    PathSample s = path_sample(family, basis, t, options);
    if (!s.degenerate) return s;
    t *= 1.0 + adjust.step;
  }
  throw Error(ErrorCode::kNoNondegenerateEndpoint,
              "no non-degenerate metric within " + std::to_string(adjust.max_steps) +
                  " steps from t = " + std::to_string(t0));
}

double index_growth_t(int q, const WarpWeight& w, const LatticeBasis& basis, double sbar_value) {
  const int k = basis.dim();
  if (k < 2) throw Error(ErrorCode::kDegeneratePath, "index growth needs k >= 2");
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "q must be >= 1");
  if (!(sbar_value > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sbar must be > 0");
  const double w1_sq = dual_basis(basis).columns().col(0).squaredNorm();
  const double ratio = w.int_f_km2 / w.int_f_k;
  const double base = ratio * kFourPiSq * static_cast<double>(q) * q * w1_sq / sbar_value;
  return std::pow(base, 1.0 / (2.0 * (k - 1))) * (1.0 + 1e-9);
}

ScanResult scan_path(const OperatorFamily& family, const LatticeBasis& basis, double a, double b,
                     const ScanOptions& options) {
  if (!(a > 0.0) || !(a < b)) throw Error(ErrorCode::kInvalidArgument, "scan needs 0 < a < b");
  if (options.grid_points < 2) throw Error(ErrorCode::kInvalidArgument, "grid needs >= 2 points");
  if (!(options.eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be > 0");

  ScanResult result;
  result.sbar = sbar(family);
  const PathSample start = adjust_endpoint(family, basis, a, options.path, options.adjust);
  const PathSample end = adjust_endpoint(family, basis, b, options.path, options.adjust);
  result.a = start.t;
  result.b = end.t;
  if (!(result.a < result.b)) throw Error(ErrorCode::kInvalidArgument, "adjusted endpoints collapsed");

  const int n = options.grid_points;
  std::vector<PathSample> grid(static_cast<size_t>(n));
  grid.front() = start;
  grid.back() = end;
  PathOptions serial = options.path;
  serial.threads = 1;
  parallel_for(n - 2, options.path.threads, [&](int i) {
    const double t = result.a + (result.b - result.a) * (i + 1) / (n - 1);
    grid[static_cast<size_t>(i + 1)] = path_sample(family, basis, t, serial);
  });

  // Nudge degenerate interior nodes forward, dropping any that would overtake
  // the next node.
  std::vector<PathSample> usable;
  for (int i = 0; i < n; ++i) {
    PathSample s = grid[static_cast<size_t>(i)];
    result.trace.push_back(s);
    if (s.degenerate) {
      const double limit = grid[static_cast<size_t>(i + 1)].t;
      try {
        s = adjust_endpoint(family, basis, s.t, options.path, options.adjust);
      } catch (const Error&) {
        continue;
      }
      if (s.t >= limit) continue;
      result.trace.push_back(s);
    }
    usable.push_back(s);
  }

  Bisector bisector(family, basis, options, result);
  for (size_t i = 0; i + 1 < usable.size(); ++i) bisector.run(usable[i], usable[i + 1]);

  std::sort(result.brackets.begin(), result.brackets.end(),
            [](const BifurcationBracket& x, const BifurcationBracket& y) { return x.t_lo < y.t_lo; });
  std::sort(result.trace.begin(), result.trace.end(),
            [](const PathSample& x, const PathSample& y) { return x.t < y.t; });
  result.trace.erase(std::unique(result.trace.begin(), result.trace.end(),
                                 [](const PathSample& x, const PathSample& y) { return x.t == y.t; }),
                     result.trace.end());
  return result;
}

FamilyResult family_scan(const OperatorFamily& family, const LatticeBasis& basis,
                         const FamilyOptions& options) {
  const int k = basis.dim();
  if (k < 2) throw Error(ErrorCode::kDegeneratePath, "family scan needs k >= 2");
  if (options.samples < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one sample");

  const Matrix w = dual_basis(basis).columns();
  Matrix directions = Matrix::Zero(k, k);
  if (options.seed) {
    std::mt19937_64 rng(*options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 1; j < k; ++j) {
      for (int r = 0; r < k; ++r) directions(r, j) = gauss(rng);
      directions.col(j) *= w.col(0).norm() / directions.col(j).norm();
    }
  } else {
    for (int j = 1; j < k; ++j) directions.col(j) = w.col(0);
  }

  FamilyResult out;
  out.samples.resize(static_cast<size_t>(options.samples));
  for (int i = 0; i < options.samples; ++i) {
    const double s = options.samples == 1
                         ? 0.0
                         : -options.amplitude + 2.0 * options.amplitude * i / (options.samples - 1);
    Matrix ws = w + s * directions;
    if (options.seed && k > 1) {
      const double det = std::abs(ws.determinant());
      if (!(det > 1e-14)) throw Error(ErrorCode::kSingularBasis, "perturbed dual basis is singular");
      const double scale = std::pow(det, -1.0 / (k - 1));
      for (int j = 1; j < k; ++j) ws.col(j) *= scale;
    }
    FamilySample& sample = out.samples[static_cast<size_t>(i)];
    sample.s = s;
    sample.dual = ws;
    const double w1 = ws.col(0).norm();
    for (int j = 1; j < k; ++j) {
      if (ws.col(j).norm() < w1 * (1.0 - 1e-12)) sample.rejected = true;
    }
    if (sample.rejected) {
      ++out.rejected;
      continue;
    }
    sample.scan = scan_path(family, primal_from_dual(ws), options.t_min, options.t_max, options.scan);
  }
  return out;
}

}  // namespace warpbif
