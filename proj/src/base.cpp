#include "warpbif/base.hpp"
#include "warpbif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace warpbif {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(long n, long r) {
  if (r < 0 || n < 0 || r > n) return 0.0;
  double out = 1.0;
  for (long i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return std::round(out);
}

// Dimension of degree-ℓ spherical harmonics on S^m.
long harmonic_multiplicity(int m, long l) {
  return static_cast<long>(binomial(m + l, m) - binomial(m + l - 2, m));
}

SpectrumSlice sphere_spectrum(int m, double radius, double cutoff) {
  std::vector<SpectrumEntry> entries;
  const double r2 = radius * radius;
  for (long l = 0;; ++l) {
    const double value = static_cast<double>(l) * static_cast<double>(l + m - 1) / r2;
    if (value > cutoff) break;
    entries.push_back({value, static_cast<int>(harmonic_multiplicity(m, l))});
  }
  return merge_entries(std::move(entries), cutoff);
}

}  // namespace

double unit_sphere_volume(int m) {
  const double half = 0.5 * (m + 1);
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

AnalyticBase::AnalyticBase(int sphere_dim, double radius)
    : sphere_dim_(sphere_dim), radius_(radius),
      scalar_curvature_(sphere_dim * (sphere_dim - 1) / (radius * radius)) {
  if (sphere_dim < 2) throw Error(ErrorCode::kInvalidArgument, "sphere dimension must be >= 2");
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sphere radius must be > 0");
}

int AnalyticBase::dim() const {
  int d = sphere_dim_;
  for (const auto& t : tori_) d += t.basis.dim();
  return d;
}

double AnalyticBase::volume() const {
  double v = unit_sphere_volume(sphere_dim_) * std::pow(radius_, sphere_dim_);
  for (const auto& t : tori_) v *= t.volume;
  return v;
}

SpectrumSlice AnalyticBase::spectrum(double cutoff) const {
  if (!(cutoff >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "cutoff must be >= 0");
  SpectrumSlice acc = sphere_spectrum(sphere_dim_, radius_, cutoff);
  for (const auto& torus : tori_) {
    // Rescaling Γ by s divides the dual by s, hence the eigenvalues by s².
    const double s2 = std::pow(torus.volume, 2.0 / torus.basis.dim());
    const SpectrumSlice unit = enumerate_eigenvalues(torus.basis, cutoff * s2);
    std::vector<SpectrumEntry> sums;
    for (const auto& a : acc.entries) {
      for (const auto& l : unit.entries) {
        const double value = a.value + l.value / s2;
        if (value <= cutoff) sums.push_back({value, a.multiplicity * l.multiplicity});
      }
    }
    acc = merge_entries(std::move(sums), cutoff);
  }
  return acc;
}

AnalyticBase AnalyticBase::with_torus(TorusFactor torus) const {
  if (!(torus.volume > 0.0)) throw Error(ErrorCode::kInvalidArgument, "torus volume must be > 0");
  AnalyticBase out = *this;
  out.tori_.push_back(std::move(torus));
  return out;
}

AnalyticBase round_sphere(int m, double radius) { return AnalyticBase(m, radius); }

AnalyticBase round_sphere_with_volume(int m, double volume) {
  if (!(volume > 0.0)) throw Error(ErrorCode::kInvalidArgument, "volume must be > 0");
  return AnalyticBase(m, std::pow(volume / unit_sphere_volume(m), 1.0 / m));
}

AnalyticBase product_with_flat_torus(const AnalyticBase& base, const LatticeBasis& torus,
                                     double torus_volume) {
  return base.with_torus(TorusFactor{torus, torus_volume});
}

SLBase::SLBase(std::vector<double> theta, std::vector<double> h, std::vector<double> curvature)
    : theta_(std::move(theta)), h_(std::move(h)), curvature_(std::move(curvature)) {
  const size_t n = theta_.size();
  if (n < 3 || h_.size() != n || curvature_.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "theta, h and R must have equal length >= 3");
  }
  const double step = kPi / static_cast<double>(n - 1);
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(theta_[i] - step * static_cast<double>(i)) > 1e-12) {
      throw Error(ErrorCode::kInvalidArgument, "theta grid must be uniform on [0, pi]");
    }
  }
  if (std::abs(h_.front()) > 1e-12 || std::abs(h_.back()) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "profile must vanish at the poles");
  }
  h_.front() = 0.0;
  h_.back() = 0.0;
  for (size_t i = 1; i + 1 < n; ++i) {
    if (!(h_[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "profile must be positive inside");
  }
  for (double r : curvature_) {
    if (!(r > 0.0)) throw Error(ErrorCode::kNonPositiveCurvature, "scalar curvature must be > 0");
  }
  weights_.assign(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) weights_[i] = step * h_[i];
}

double SLBase::integrate(const std::vector<double>& g) const {
  if (g.size() != h_.size()) throw Error(ErrorCode::kInvalidArgument, "sample count mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < g.size(); ++i) sum += weights_[i] * g[i];
  return 2.0 * kPi * sum;
}

double SLBase::volume() const { return integrate(std::vector<double>(h_.size(), 1.0)); }

double SLBase::max_h() const { return *std::max_element(h_.begin(), h_.end()); }

SLBase oblate_sphere(double eps, int intervals) {
  if (intervals < 16) throw Error(ErrorCode::kInvalidArgument, "oblate sphere needs N >= 16");
  if (!(eps < 1.0)) throw Error(ErrorCode::kInvalidEps, "eps must be < 1 for a positive profile");
  const int n = intervals + 1;
  std::vector<double> theta(n), h(n), r(n);
  for (int i = 0; i < n; ++i) {
    theta[i] = kPi * static_cast<double>(i) / intervals;
    const double s = std::sin(theta[i]);
    const double s2 = s * s;
    h[i] = s * (1.0 - eps * s2);
    const double gauss = (1.0 + 6.0 * eps - 9.0 * eps * s2) / (1.0 - eps * s2);
    if (!(gauss > 0.0)) {
      throw Error(ErrorCode::kInvalidEps,
                  "Gaussian curvature is not positive at theta = " + std::to_string(theta[i]));
    }
    r[i] = 2.0 * gauss;
  }
  h.front() = 0.0;
  h.back() = 0.0;
  return SLBase(std::move(theta), std::move(h), std::move(r));
}

int base_dim(const BaseManifold& base) {
  return std::visit([](const auto& b) { return b.dim(); }, base);
}

double base_volume(const BaseManifold& base) {
  return std::visit([](const auto& b) { return b.volume(); }, base);
}

Matrix SymTridiagonal::to_dense() const {
  const int n = size();
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) out(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) out(i, i + 1) = out(i + 1, i) = off[i];
  return out;
}

std::vector<double> SymTridiagonal::multiply(const std::vector<double>& x) const {
  const int n = size();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

SymTridiagonal& SymTridiagonal::add_scaled(const SymTridiagonal& other, double scale) {
  for (size_t i = 0; i < diag.size(); ++i) diag[i] += scale * other.diag[i];
  for (size_t i = 0; i < off.size(); ++i) off[i] += scale * other.off[i];
  return *this;
}

bool spd_tridiagonal_solve(const SymTridiagonal& t, std::vector<double>& rhs) {
  // LDLᵀ with forward/backward sweeps.
  const int n = t.size();
  std::vector<double> d(n), l(n > 0 ? n - 1 : 0);
  d[0] = t.diag[0];
  if (!(d[0] > 0.0)) return false;
  for (int i = 1; i < n; ++i) {
    l[i - 1] = t.off[i - 1] / d[i - 1];
    d[i] = t.diag[i] - l[i - 1] * t.off[i - 1];
    if (!(d[i] > 0.0)) return false;
  }
  for (int i = 1; i < n; ++i) rhs[i] -= l[i - 1] * rhs[i - 1];
  for (int i = 0; i < n; ++i) rhs[i] /= d[i];
  for (int i = n - 2; i >= 0; --i) rhs[i] -= l[i] * rhs[i + 1];
  return true;
}

bool is_positive_definite(const SymTridiagonal& t) {
  std::vector<double> scratch(t.diag.size(), 0.0);
  return spd_tridiagonal_solve(t, scratch);
}

WeightedForms assemble_forms(const SLBase& base, const std::vector<double>& density_a,
                             const std::vector<double>& density_b, int mode,
                             const FormOptions& options) {
  const int nodes = base.nodes();
  if (static_cast<int>(density_a.size()) != nodes || static_cast<int>(density_b.size()) != nodes) {
    throw Error(ErrorCode::kInvalidArgument, "density samples must match the grid");
  }
  if (mode < 0) throw Error(ErrorCode::kInvalidArgument, "Fourier mode must be >= 0");
  if (mode > options.max_mode) {
    throw Error(ErrorCode::kModeTooLarge, "mode " + std::to_string(mode) + " exceeds n_max = " +
                                              std::to_string(options.max_mode));
  }
  for (int i = 1; i + 1 < nodes; ++i) {
    if (!(density_a[i] > 0.0) || !(density_b[i] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "densities must be positive on interior nodes");
    }
  }

  const auto& h = base.h();
  const double dx = base.spacing();
  const double n2 = static_cast<double>(mode) * mode;
  const double two_pi = 2.0 * kPi;

  WeightedForms forms;
  forms.mode = mode;
  forms.first_node = mode == 0 ? 0 : 1;
  const int size = mode == 0 ? nodes : nodes - 2;
  forms.stiffness.diag.assign(size, 0.0);
  forms.stiffness.off.assign(size - 1, 0.0);
  forms.mass.diag.assign(size, 0.0);
  forms.mass.off.assign(size - 1, 0.0);

  auto add = [&](SymTridiagonal& m, int node_i, int node_j, double value) {
    const int ri = node_i - forms.first_node;
    const int rj = node_j - forms.first_node;
    if (ri < 0 || rj < 0 || ri >= size || rj >= size) return;
    if (ri == rj) {
      m.diag[ri] += value;
    } else {
      m.off[std::min(ri, rj)] += value;
    }
  };

  for (int e = 0; e + 1 < nodes; ++e) {
    const double hm = 0.5 * (h[e] + h[e + 1]);
    const double am = 0.5 * (density_a[e] + density_a[e + 1]);
    const double bm = 0.5 * (density_b[e] + density_b[e + 1]);
    const double grad = two_pi * am * hm / dx;
    const double angular = two_pi * am * n2 / hm * dx / 6.0;
    const double mass = two_pi * bm * hm * dx / 6.0;
    add(forms.stiffness, e, e, grad + 2.0 * angular);
    add(forms.stiffness, e + 1, e + 1, grad + 2.0 * angular);
    add(forms.stiffness, e, e + 1, -grad + angular);
    add(forms.mass, e, e, 2.0 * mass);
    add(forms.mass, e + 1, e + 1, 2.0 * mass);
    add(forms.mass, e, e + 1, mass);
  }
  return forms;
}

int mode_bound(const SLBase& base, const std::vector<double>& density_a,
               const std::vector<double>& density_b, double cutoff) {
  double min_ratio = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < density_a.size(); ++i) {
    if (density_b[i] > 0.0) min_ratio = std::min(min_ratio, density_a[i] / density_b[i]);
  }
  if (!(min_ratio > 0.0) || !std::isfinite(min_ratio)) {
    throw Error(ErrorCode::kInvalidArgument, "densities must be positive");
  }
  const double c = std::max(cutoff, 0.0);
  return static_cast<int>(std::ceil(base.max_h() * std::sqrt(c / min_ratio))) + 2;
}

}  // namespace warpbif
