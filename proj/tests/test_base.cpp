#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

#include "warpbif/base.hpp"
#include "warpbif/errors.hpp"

using namespace warpbif;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Rectangular torus of area 1/(4π) whose shortest dual vector has length 1/(π√10),
// returned as a unimodular basis plus the volume it is rescaled to.
LatticeBasis degenerate_example_torus() {
  const double a = kPi * std::sqrt(10.0);
  const double b = 1.0 / (4.0 * kPi * a);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return normalize_unimodular(m);
}

std::vector<double> sorted_pencil_eigenvalues(const WeightedForms& forms) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(forms.stiffness.to_dense(), forms.mass.to_dense(),
                                                          Eigen::EigenvaluesOnly);
  const Vector ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

}  // namespace

TEST_CASE("round_sphere spectrum follows spherical harmonics") {
  const AnalyticBase s2 = round_sphere(2, 1.0);
  CHECK(s2.scalar_curvature() == Approx(2.0));
  CHECK(s2.volume() == Approx(4 * kPi));
  const SpectrumSlice s = s2.spectrum(12.0);
  REQUIRE(s.entries.size() == 4);
  const double values[] = {0, 2, 6, 12};
  const int mults[] = {1, 3, 5, 7};
  for (int i = 0; i < 4; ++i) {
    CHECK(s.entries[i].value == Approx(values[i]));
    CHECK(s.entries[i].multiplicity == mults[i]);
  }

  const AnalyticBase unit = round_sphere(2, 1.0 / std::sqrt(4 * kPi));
  CHECK(unit.volume() == Approx(1.0).epsilon(1e-14));
  CHECK(unit.scalar_curvature() == Approx(8 * kPi));
  const SpectrumSlice u = unit.spectrum(80.0);
  REQUIRE(u.entries.size() == 3);
  CHECK(u.entries[1].value == Approx(8 * kPi));
  CHECK(u.entries[2].value == Approx(24 * kPi));
  CHECK(round_sphere_with_volume(2, 1.0).radius() == Approx(unit.radius()).epsilon(1e-14));

  const AnalyticBase s3 = round_sphere(3, 1.0);
  CHECK(s3.scalar_curvature() == Approx(6.0));
  CHECK(s3.volume() == Approx(2 * kPi * kPi));
  const SpectrumSlice t = s3.spectrum(24.0);
  for (size_t l = 0; l < t.entries.size(); ++l) CHECK(t.entries[l].value == Approx(double(l * (l + 2))));

  // Multiplicities against monomial counting for several dimensions.
  for (int m = 2; m <= 5; ++m) {
    const SpectrumSlice sp = round_sphere(m, 1.0).spectrum(60.0);
    for (size_t l = 0; l < sp.entries.size(); ++l) {
      CHECK(sp.entries[l].multiplicity == oracle::sphere_multiplicity(m, static_cast<int>(l)));
    }
  }
}

TEST_CASE("product_with_flat_torus sums the factor spectra") {
  const LatticeBasis square(Matrix::Identity(2, 2));
  const AnalyticBase prod = product_with_flat_torus(round_sphere(2, 1.0), square, 1.0);
  CHECK(prod.dim() == 4);
  CHECK(prod.scalar_curvature() == Approx(2.0));
  CHECK(prod.volume() == Approx(4 * kPi));
  const double fp = 4 * kPi * kPi;
  const SpectrumSlice s = prod.spectrum(2 + fp + 1e-9);
  auto mult_of = [&](double v) {
    for (const auto& e : s.entries)
      if (same_eigenvalue(e.value, v)) return e.multiplicity;
    return 0;
  };
  CHECK(mult_of(0) == 1);
  CHECK(mult_of(2) == 3);
  CHECK(mult_of(fp) == 4);
  CHECK(mult_of(2 + fp) == 12);

  const double cutoff = 100.0;
  const SpectrumSlice expected = oracle::sum_merge(
      round_sphere(2, 1.0).spectrum(cutoff), merge_values(oracle::torus_box(Matrix::Identity(2, 2), cutoff), cutoff),
      cutoff);
  CHECK(same_multiset(prod.spectrum(cutoff), expected, 1e-12));

  CHECK(prod.spectrum(0.0).entries.size() == 1);
  CHECK(prod.spectrum(0.0).entries[0].multiplicity == 1);
}

TEST_CASE("degenerate example torus carries the eigenvalue 2/5") {
  const LatticeBasis torus = degenerate_example_torus();
  const double vol = 1.0 / (4 * kPi);
  const AnalyticBase prod = product_with_flat_torus(round_sphere(2, 1.0), torus, vol);
  CHECK(prod.volume() == Approx(1.0).epsilon(1e-14));
  // Dual of the rescaled lattice is the unit dual divided by sqrt(vol).
  CHECK(shortest_dual_norm(torus) / std::sqrt(vol) == Approx(1.0 / (kPi * std::sqrt(10.0))).epsilon(1e-13));
  const SpectrumSlice s = prod.spectrum(1.0);
  REQUIRE(s.entries.size() >= 2);
  CHECK(s.entries[1].value == Approx(0.4).epsilon(1e-13));
  CHECK(s.entries[1].multiplicity == 2);
}

TEST_CASE("oblate_sphere profile, curvature and volume") {
  const SLBase round = oblate_sphere(0.0, 64);
  for (int i = 0; i < round.nodes(); ++i) {
    CHECK(round.h()[i] == Approx(std::sin(round.theta()[i])).epsilon(1e-15));
    CHECK(round.curvature()[i] == Approx(2.0).epsilon(1e-15));
  }
  CHECK(std::abs(round.volume() - 4 * kPi) <= 30.0 / (64.0 * 64.0));

  const SLBase ob = oblate_sphere(0.1, 64);
  CHECK(ob.curvature().front() == Approx(3.2).epsilon(1e-14));
  CHECK(ob.curvature()[32] == Approx(1.4 / 0.9).epsilon(1e-14));
  const double exact = 2 * kPi * (2 - 0.4 / 3);
  CHECK(exact == Approx(11.729).epsilon(1e-4));
  double previous = 0.0;
  for (int n : {32, 64, 128, 256}) {
    const double err = std::abs(oblate_sphere(0.1, n).volume() - exact);
    CHECK(err <= 30.0 / (double(n) * n));
    if (previous > 0.0) CHECK(previous / err == Approx(4.0).epsilon(0.01));
    previous = err;
  }

  const SLBase fine = oblate_sphere(0.1, 128);
  for (int i = 0; i < ob.nodes(); ++i) {
    CHECK(std::abs(ob.curvature()[i] - fine.curvature()[2 * i]) <= 1e-14);
  }

  CHECK_THROWS_AS(oblate_sphere(0.1, 8), Error);
  try {
    oblate_sphere(0.34, 64);
    FAIL("expected InvalidEps");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidEps);
  }
  CHECK_NOTHROW(oblate_sphere(0.33, 64));
  CHECK_NOTHROW(oblate_sphere(-0.1, 64));
}

TEST_CASE("SLBase validates its samples") {
  const SLBase ok = oblate_sphere(0.0, 16);
  auto h = ok.h();
  auto r = ok.curvature();
  r[3] = -1.0;
  try {
    SLBase(ok.theta(), h, r);
    FAIL("expected NonPositiveCurvature");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonPositiveCurvature);
  }
  h[0] = 0.5;
  CHECK_THROWS_AS(SLBase(ok.theta(), h, ok.curvature()), Error);
}

TEST_CASE("assemble_forms basic structure") {
  const SLBase round = oblate_sphere(0.0, 64);
  const std::vector<double> ones(round.nodes(), 1.0);
  const WeightedForms f0 = assemble_forms(round, ones, ones, 0);
  REQUIRE(f0.stiffness.size() == round.nodes());
  const auto k1 = f0.stiffness.multiply(ones);
  for (double v : k1) CHECK(std::abs(v) <= 1e-12);
  const auto m1 = f0.mass.multiply(ones);
  double total = 0;
  for (double v : m1) total += v;
  CHECK(std::abs(total - round.volume()) <= 1e-10);
  CHECK(is_positive_definite(f0.mass));

  const SLBase ob = oblate_sphere(0.2, 48);
  std::vector<double> a(ob.nodes()), b(ob.nodes());
  for (int i = 0; i < ob.nodes(); ++i) {
    a[i] = 1.0 + 0.3 * std::cos(ob.theta()[i]);
    b[i] = 2.0 - std::sin(ob.theta()[i]);
  }
  for (int mode : {0, 1, 5}) {
    const WeightedForms f = assemble_forms(ob, a, b, mode);
    CHECK(f.stiffness.size() == (mode == 0 ? ob.nodes() : ob.nodes() - 2));
    const Matrix ks = f.stiffness.to_dense();
    CHECK((ks - ks.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(is_positive_definite(f.mass));
  }

  try {
    assemble_forms(round, ones, ones, 10, FormOptions{8});
    FAIL("expected ModeTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kModeTooLarge);
  }
}

TEST_CASE("round profile pencils reproduce l(l+1) with the right multiplicities") {
  const int n = 128;
  const SLBase round = oblate_sphere(0.0, n);
  const std::vector<double> ones(round.nodes(), 1.0);
  std::vector<double> found;
  for (int mode = 0; mode <= 4; ++mode) {
    const auto ev = sorted_pencil_eigenvalues(assemble_forms(round, ones, ones, mode));
    for (int l = mode; l <= 3; ++l) {
      const double exact = l * (l + 1.0);
      CHECK(std::abs(ev[l - mode] - exact) <= 4.0 * exact * exact / (double(n) * n) + 1e-10);
    }
    for (double v : ev) {
      if (v > 13.0) break;
      found.push_back(v);
      if (mode > 0) found.push_back(v);
    }
  }
  CHECK(found.size() == 16);  // 1 + 3 + 5 + 7
}

TEST_CASE("mode_bound covers every eigenvalue below the cutoff") {
  const SLBase ob = oblate_sphere(0.1, 64);
  const std::vector<double> ones(ob.nodes(), 1.0);
  const double cutoff = 30.0;
  const int n_max = mode_bound(ob, ones, ones, cutoff);
  CHECK(n_max == static_cast<int>(std::ceil(ob.max_h() * std::sqrt(cutoff))) + 2);
  const auto ev = sorted_pencil_eigenvalues(assemble_forms(ob, ones, ones, n_max + 1));
  CHECK(ev.front() > cutoff);
}
