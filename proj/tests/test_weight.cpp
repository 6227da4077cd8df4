#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "warpbif/errors.hpp"
#include "warpbif/weight.hpp"

using namespace warpbif;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Legendre–Galerkin reference (tests/oracles/spectral_oracle.py), eps = 0.1.
constexpr double kOblateS[] = {2.122183804923391, 2.1272552703685865, 2.1289603662396934};  // k = 1, 2, 3
constexpr double kOblateMaxF_k2 = 0.29896310930452086;
constexpr double kOblateMinF_k2 = 0.2789826476688512;

}  // namespace

TEST_CASE("unit-volume round sphere gives f = 1 and S = R") {
  const BaseManifold base = round_sphere(2, 1.0 / std::sqrt(4 * kPi));
  const WarpWeight w = solve_weight(base, 2);
  CHECK(w.is_constant());
  CHECK(w.f.front() == Approx(1.0).epsilon(1e-14));
  CHECK(w.S == Approx(8 * kPi).epsilon(1e-14));
  const WeightFunctionals fn = weight_functionals(w, base);
  CHECK(fn.int_f_k == Approx(1.0).epsilon(1e-14));
  CHECK(fn.int_f_km2 == Approx(1.0).epsilon(1e-14));
  CHECK(fn.max_f == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("unit round sphere gives f = (4 pi)^(-1/2)") {
  const BaseManifold base = round_sphere(2, 1.0);
  const WarpWeight w = solve_weight(base, 2);
  CHECK(w.S == Approx(2.0));
  CHECK(w.f.front() == Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-14));
  const WeightFunctionals fn = weight_functionals(w, base);
  CHECK(fn.int_f_k == Approx(1.0).epsilon(1e-14));
  CHECK(fn.int_f_km2 == Approx(4 * kPi).epsilon(1e-14));
  CHECK(fn.max_f == Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-14));
  // f = (scale · u1)^{2/(k+1)} with u1 = 1.
  CHECK(std::pow(w.scale, 2.0 / 3.0) == Approx(w.f.front()).epsilon(1e-14));
}

TEST_CASE("discretized round profile has a constant weight") {
  const SLBase round = oblate_sphere(0.0, 128);
  for (int k : {1, 2, 3}) {
    const WarpWeight w = solve_weight(round, k);
    CHECK(w.nodal_spread() <= 1e-8);
    CHECK(std::abs(w.S - 2.0) <= 1e-8 * 2.0);
    CHECK(std::abs(w.int_f_k - 1.0) <= 1e-8);
  }
}

TEST_CASE("oblate base: nonconstant weight, bounds and reference value") {
  const SLBase ob = oblate_sphere(0.1, 128);
  const WarpWeight w = solve_weight(ob, 2);
  CHECK(w.nodal_spread() > 1e-3);
  CHECK(w.residual <= 1e-8);
  CHECK(std::abs(w.int_f_k - 1.0) <= 1e-8);
  CHECK(*std::min_element(w.u1.begin(), w.u1.end()) > 0.0);
  CHECK(*std::max_element(w.u1.begin(), w.u1.end()) == Approx(1.0).epsilon(1e-15));

  const double r_min = *std::min_element(ob.curvature().begin(), ob.curvature().end());
  const double r_mean = ob.integrate(ob.curvature()) / ob.volume();
  CHECK(w.S >= r_min);
  CHECK(w.S <= r_mean + 1e-3);  // quadrature of ∫R differs from the FEM form at O(N⁻²)
  CHECK(r_min == Approx(1.4 / 0.9).epsilon(1e-3));

  CHECK(std::abs(w.S - kOblateS[1]) <= 5.0 / (128.0 * 128.0));
  CHECK(std::abs(w.max_f - kOblateMaxF_k2) <= 1e-3);
  CHECK(std::abs(w.min_f - kOblateMinF_k2) <= 1e-3);
}

TEST_CASE("S converges to the spectral reference at second order") {
  for (int k : {1, 2, 3}) {
    double previous = 0.0;
    for (int n : {64, 128, 256}) {
      const double err = std::abs(solve_weight(oblate_sphere(0.1, n), k).S - kOblateS[k - 1]);
      if (previous > 0.0) {
        CHECK(previous / err > 3.0);
        CHECK(previous / err < 5.0);
      }
      previous = err;
    }
  }
}

TEST_CASE("normalization is invariant under rescaling the ground state") {
  const SLBase ob = oblate_sphere(0.1, 64);
  const WarpWeight w = solve_weight(ob, 2);
  std::vector<double> scaled = w.u1;
  for (double& v : scaled) v *= 3.7;
  const WarpWeight again = normalize_weight(ob, 2, scaled, w.S);
  CHECK(again.S == w.S);
  for (size_t i = 0; i < w.f.size(); ++i) CHECK(std::abs(again.f[i] - w.f[i]) <= 1e-10 * w.f[i]);
}

TEST_CASE("weight_functionals on the oblate base") {
  const SLBase ob = oblate_sphere(0.1, 128);
  const WarpWeight w = solve_weight(ob, 2);
  const WeightFunctionals fn = weight_functionals(w, ob);
  CHECK(fn.int_f_k == Approx(1.0).epsilon(1e-12));
  // k = 2: f^{k−2} = 1, so the second functional is the volume.
  CHECK(fn.int_f_km2 == Approx(ob.volume()).epsilon(1e-12));
  CHECK(fn.max_f == w.max_f);
}

TEST_CASE("solve_weight rejects bad input") {
  CHECK_THROWS_AS(solve_weight(round_sphere(2, 1.0), 0), Error);
  const SLBase ob = oblate_sphere(0.1, 32);
  WeightSolverOptions tight;
  tight.max_iterations = 1;
  try {
    solve_weight(ob, 2, tight);
    FAIL("expected SolverFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSolverFailure);
  }
  std::vector<double> sign_change(ob.nodes(), 1.0);
  sign_change[5] = -0.5;
  try {
    normalize_weight(ob, 2, sign_change, 2.0);
    FAIL("expected GroundStateSignFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGroundStateSignFailure);
  }
}
