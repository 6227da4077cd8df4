#include "warpbif/weight.hpp"
#include "warpbif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace warpbif {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

WarpWeight solve_analytic(const AnalyticBase& base, int k) {
  if (!(base.scalar_curvature() > 0.0)) {
    throw Error(ErrorCode::kNonPositiveCurvature, "base scalar curvature must be > 0");
  }
  // Constant R: the constants realize the infimum, so S = R and f is constant.
  const double vol = base.volume();
  WarpWeight w;
  w.k = k;
  w.S = base.scalar_curvature();
  w.u1 = {1.0};
  const double f = std::pow(vol, -1.0 / k);
  w.scale = std::pow(f, 0.5 * (k + 1));
  w.f = {f};
  w.max_f = w.min_f = f;
  w.int_f_k = std::pow(f, k) * vol;
  w.int_f_km2 = std::pow(f, k - 2) * vol;
  return w;
}

WarpWeight solve_sl(const SLBase& base, int k, const WeightSolverOptions& options) {
  const int n = base.nodes();
  for (double r : base.curvature()) {
    if (!(r > 0.0)) throw Error(ErrorCode::kNonPositiveCurvature, "base scalar curvature must be > 0");
  }
  const double coeff = 4.0 * k / (k + 1.0);
  const std::vector<double> ones(n, 1.0);
  const WeightedForms grad_and_r =
      assemble_forms(base, std::vector<double>(n, coeff), base.curvature(), 0);
  const WeightedForms plain = assemble_forms(base, ones, ones, 0);
  SymTridiagonal op = grad_and_r.stiffness;
  op.add_scaled(grad_and_r.mass, 1.0);
  const SymTridiagonal& mass = plain.mass;

  // Inverse iteration with zero shift; the operator is positive definite since R > 0.
  std::vector<double> u = ones;
  double rq = dot(u, op.multiply(u)) / dot(u, mass.multiply(u));
  double residual = 0.0;
  int it = 0;
  bool converged = false;
  for (; it < options.max_iterations; ++it) {
    std::vector<double> x = mass.multiply(u);
    if (!spd_tridiagonal_solve(op, x)) {
      throw Error(ErrorCode::kSolverFailure, "weight operator is not positive definite");
    }
    const double scale = 1.0 / norm(x);
    for (double& v : x) v *= scale;
    const std::vector<double> ax = op.multiply(x);
    const std::vector<double> mx = mass.multiply(x);
    const double next = dot(x, ax) / dot(x, mx);
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = ax[i] - next * mx[i];
    residual = norm(r) / norm(mx);
    const bool rq_done = std::abs(next - rq) < options.rayleigh_rel_tol * std::abs(next);
    u = std::move(x);
    rq = next;
    if (rq_done && residual <= options.residual_rel_tol * rq) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::kSolverFailure, "inverse iteration did not converge");
  }

  const double peak = *std::max_element(u.begin(), u.end());
  const double trough = *std::min_element(u.begin(), u.end());
  if (std::abs(trough) > std::abs(peak)) {
    for (double& v : u) v = -v;
  }
  const double top = *std::max_element(u.begin(), u.end());
  for (double v : u) {
    if (v / top < -options.sign_tolerance) {
      throw Error(ErrorCode::kGroundStateSignFailure, "ground state changes sign");
    }
  }
  WarpWeight w = normalize_weight(base, k, std::move(u), rq);
  w.residual = residual;
  w.iterations = it;
  return w;
}

}  // namespace

std::vector<double> WarpWeight::power(double p) const {
  std::vector<double> out(f.size());
  std::transform(f.begin(), f.end(), out.begin(), [p](double v) { return std::pow(v, p); });
  return out;
}

WarpWeight normalize_weight(const SLBase& base, int k, std::vector<double> ground_state, double S) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "fiber dimension k must be >= 1");
  const double top = *std::max_element(ground_state.begin(), ground_state.end());
  if (!(top > 0.0)) throw Error(ErrorCode::kGroundStateSignFailure, "ground state has no positive part");
  WarpWeight w;
  w.k = k;
  w.S = S;
  w.u1 = std::move(ground_state);
  for (double& v : w.u1) v = std::max(v / top, 0.0);

  const double expo = 2.0 / (k + 1.0);
  std::vector<double> g(w.u1.size());
  std::transform(w.u1.begin(), w.u1.end(), g.begin(), [&](double v) { return std::pow(v, expo); });
  std::vector<double> gk(g.size());
  std::transform(g.begin(), g.end(), gk.begin(), [&](double v) { return std::pow(v, k); });
  // ∫ (c u1)^{2k/(k+1)} dV = 1  ⇒  c^{2k/(k+1)} = 1 / ∫ g^k dV.
  const double gk_int = base.integrate(gk);
  const double f_factor = std::pow(gk_int, -1.0 / k);
  w.scale = std::pow(f_factor, 0.5 * (k + 1));
  w.f.resize(g.size());
  std::transform(g.begin(), g.end(), w.f.begin(), [&](double v) { return f_factor * v; });
  if (*std::min_element(w.f.begin(), w.f.end()) <= 0.0) {
    throw Error(ErrorCode::kGroundStateSignFailure, "weight vanishes on the grid");
  }

  const WeightFunctionals fn = weight_functionals(w, BaseManifold(base));
  w.int_f_k = fn.int_f_k;
  w.int_f_km2 = fn.int_f_km2;
  w.max_f = fn.max_f;
  w.min_f = *std::min_element(w.f.begin(), w.f.end());
  return w;
}

WarpWeight solve_weight(const BaseManifold& base, int k, const WeightSolverOptions& options) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "fiber dimension k must be >= 1");
  if (const auto* analytic = std::get_if<AnalyticBase>(&base)) return solve_analytic(*analytic, k);
  return solve_sl(std::get<SLBase>(base), k, options);
}

WeightFunctionals weight_functionals(const WarpWeight& w, const BaseManifold& base) {
  WeightFunctionals out;
  out.max_f = *std::max_element(w.f.begin(), w.f.end());
  if (const auto* sl = std::get_if<SLBase>(&base)) {
    out.int_f_k = sl->integrate(w.power(w.k));
    out.int_f_km2 = sl->integrate(w.power(w.k - 2));
  } else {
    const double vol = base_volume(base);
    out.int_f_k = std::pow(w.f.front(), w.k) * vol;
    out.int_f_km2 = std::pow(w.f.front(), w.k - 2) * vol;
  }
  return out;
}

}  // namespace warpbif
