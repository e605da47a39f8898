#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "cogrates/errors.hpp"
#include "cogrates/gaussian_zic.hpp"
#include "cogrates/polytope_fm.hpp"

using namespace cogrates;

namespace {

StandardZic zic(double P1, double P2, double K, double b) { return {P1, P2, K, b}; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

SweepGrid coarse() {
  SweepGrid g;
  g.alpha_steps = 21;
  g.beta_steps = 21;
  g.mu_steps = 41;
  g.r1_samples = 64;
  return g;
}

}  // namespace

TEST_CASE("gamma values") {
  CHECK(cogrates::gamma(0.0) == 0.0);
  CHECK(cogrates::gamma(3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cogrates::gamma(6.0) == doctest::Approx(1.403677).epsilon(1e-6));
  CHECK(code_of([] { cogrates::gamma(-0.1); }) == ErrorCode::NegativeArgument);
}

TEST_CASE("gamma composition identity") {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(0.2);
  for (int i = 0; i < 2000; ++i) {
    const double a = e(rng), b = e(rng);
    CHECK(std::abs(cogrates::gamma(a) + cogrates::gamma(b / (1.0 + a)) - cogrates::gamma(a + b)) < 1e-12);
  }
}

TEST_CASE("standard form scaling") {
  PhysicalZic p;
  p.P1p = 5.0;
  p.P2p = 7.0;
  auto c = standardize(p);
  CHECK(c.P1 == 5.0);
  CHECK(c.P2 == 7.0);
  CHECK(c.K == 1.0);
  CHECK(c.b == 1.0);

  p.h11 = 2.0;
  c = standardize(p);
  CHECK(c.P1 == doctest::Approx(20.0));
  CHECK(c.K == doctest::Approx(0.5));
  CHECK(c.b == doctest::Approx(0.5));
  CHECK(c.P2 == doctest::Approx(7.0));

  p.h11 = 1.0;
  p.N3 = 4.0;
  c = standardize(p);
  CHECK(c.b == doctest::Approx(0.5));
  CHECK(c.P2 == doctest::Approx(7.0 / 4.0));

  p.h13 = 0.0;
  CHECK(code_of([&] { standardize(p); }) == ErrorCode::ZeroGain);
  CHECK(code_of([] { validate(zic(1, 1, 2e6, 1)); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { validate(zic(-1, 1, 1, 1)); }) == ErrorCode::NegativeArgument);
}

TEST_CASE("strong interference pentagon") {
  auto e = region_r1(zic(6, 6, 1, 1.5));
  CHECK(e.r1_max() == doctest::Approx(1.40368).epsilon(1e-5));
  CHECK(e.value_at(e.r1_max()) == doctest::Approx(0.77512).epsilon(1e-4));
  CHECK(e.value_at(0.77512) == doctest::Approx(1.40368).epsilon(1e-4));
  CHECK(e.value_at(0.0) == doctest::Approx(cogrates::gamma(6.0)));

  // Very strong interference: the sum row is inactive.
  auto c = zic(6, 6, 1, 2.7);
  CHECK(max_deviation(region_r1(c), region_r2(c)) < 1e-9);

  auto seg = region_r1(zic(6, 0, 1, 1.5));
  CHECK(seg.r1_max() == doctest::Approx(cogrates::gamma(6.0)));
  CHECK(seg.value_at(0.0) == 0.0);

  CHECK(code_of([] { region_r1(zic(6, 6, 1, 0.9)); }) == ErrorCode::WeakInterference);
  CHECK_NOTHROW(region_r1(zic(6, 6, 1, 1.0)));
}

TEST_CASE("rectangle outer region") {
  auto r = region_r2(zic(6, 6, 1, 0.6));
  CHECK(r.r1_max() == doctest::Approx(1.403677).epsilon(1e-6));
  CHECK(r.value_at(r.r1_max()) == doctest::Approx(1.403677).epsilon(1e-6));
  auto edge = region_r2(zic(0, 6, 1, 0.6));
  CHECK(edge.r1_max() == 0.0);
  CHECK(max_deviation(region_r2(zic(6, 6, 0.3, 0.1)), region_r2(zic(6, 6, 9, 4))) == 0.0);
}

TEST_CASE("weak interference sum capacity") {
  CHECK(zic_sum_capacity(zic(6, 6, 1, 0)) == doctest::Approx(2 * cogrates::gamma(6.0)));
  CHECK(zic_sum_capacity(zic(6, 6, 1, 0.6)) == doctest::Approx(2.17139).epsilon(1e-5));
  CHECK(zic_sum_capacity(zic(6, 0, 1, 0.6)) == doctest::Approx(cogrates::gamma(6.0)));
  CHECK(code_of([] { zic_sum_capacity(zic(6, 6, 1, 1.0)); }) == ErrorCode::StrongInterference);
}

TEST_CASE("R3 slices and sweep") {
  auto s = r3_slice(zic(6, 6, 1, 0.6), 0.0, 0.0);
  CHECK(s.r1 == 0.0);
  CHECK(s.r2 == doctest::Approx(cogrates::gamma(6.0)));
  s = r3_slice(zic(6, 6, 1, 0.6), 1.0, 0.0);
  CHECK(s.r1 == doctest::Approx(1.40368).epsilon(1e-5));
  CHECK(s.r2 == doctest::Approx(0.76771).epsilon(1e-5));

  auto c = zic(6, 6, 3, 1.5);
  auto e = region_r3(c);
  CHECK(e.r1_max() == doctest::Approx(cogrates::gamma(6.0)).epsilon(1e-9));
  CHECK(e.value_at(cogrates::gamma(6.0)) == doctest::Approx(cogrates::gamma(2.4)).epsilon(1e-4));
  CHECK(std::abs(cogrates::gamma(2.4) - 0.8826) < 5e-4);
}

TEST_CASE("refinement never loses area against the plain grid union") {
  for (auto c : {zic(6, 6, 1.5, 1.5), zic(6, 6, 1, 0.6), zic(3, 8, 0.7, 0.3)}) {
    auto g = coarse();
    g.refine = false;
    auto plain = region_r3(c, g);
    g.refine = true;
    auto refined = region_r3(c, g);
    CHECK(subset(plain, refined, 1e-12).holds);
    CHECK(subset(refined, region_r2(c), 1e-9).holds);
  }
}

TEST_CASE("block-Markov system projects onto the R3 slice") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto c : {zic(6, 6, 2, 1.5), zic(6, 6, 1.5, 1.5), zic(6, 6, 3, 1.5)}) {
    for (int i = 0; i < 20; ++i) {
      double a = u(rng), b = u(rng);
      if (b > a) std::swap(a, b);
      auto report = project(zic_rate_system(c, a, b), {"R1", "R2"});
      CHECK(polygon_distance(report.output, r3_slice_system(c, a, b)) < 1e-9);
    }
    auto report = project(zic_rate_system(c, 0.9, 0.3), {"R1", "R2"});
    CHECK(polygon_distance(report.output, r3_slice_system(c, 0.9, 0.3)) < 1e-9);
  }
}

TEST_CASE("block-Markov system corner cases") {
  auto sys = zic_rate_system(zic(6, 6, 2, 1.5), 1.0, 1.0);
  bool found_r0 = false;
  const auto r0 = sys.require_index("R0");
  for (const auto& row : sys.rows()) {
    int nz = 0;
    for (double a : row.coeffs) nz += a != 0.0;
    if (nz == 1 && row.coeffs[r0] == 1.0) {
      CHECK(row.rhs == 0.0);
      found_r0 = true;
    }
  }
  CHECK(found_r0);

  auto blind = zic_rate_system(zic(6, 6, 0, 1.5), 0.7, 0.2);
  const auto r11 = blind.require_index("R11");
  const auto r12 = blind.require_index("R12");
  // The first three rows are the relay's decoding constraints.
  for (int i = 0; i < 3; ++i) {
    const auto& row = blind.rows()[i];
    CHECK((row.coeffs[r11] != 0.0 || row.coeffs[r12] != 0.0));
    CHECK(row.rhs == 0.0);
  }
  CHECK(code_of([] { zic_rate_system(zic(6, 6, 2, 1.5), 0.3, 0.5); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("dirty-paper coefficients") {
  auto c = zic(6, 6, 1, 1.5);
  auto z0 = zeta(c, 0.8, 0.3, 0.0);
  CHECK(z0.z2 == doctest::Approx(cogrates::gamma(6.0 / (1.0 + 2.25 * 0.7 * 6.0))).epsilon(1e-12));

  auto z1 = zeta(c, 1.0, 0.4, -2.0);
  auto z2 = zeta(c, 1.0, 0.4, 3.5);
  CHECK(z1.z2 == doctest::Approx(z2.z2).epsilon(1e-12));

  const double mu = costa_mu(c, 0.8, 0.3);
  CHECK(mu == doctest::Approx(1.5 * 6.0 / (7.0 + 2.25 * 0.5 * 6.0)));
  CHECK(zeta(c, 0.8, 0.3, mu).z2 == doctest::Approx(r3_slice(c, 0.8, 0.3).r2).epsilon(1e-12));
  // mu_c is where zeta_2 peaks.
  for (double d : {-0.3, -0.01, 0.01, 0.3}) CHECK(zeta(c, 0.8, 0.3, mu + d).z2 < zeta(c, 0.8, 0.3, mu).z2);

  auto full = zeta(c, 1.0, 1.0, 0.7);
  CHECK(full.z1 == doctest::Approx(cogrates::gamma(2.25 * 6.0)));
  CHECK(full.z2 == doctest::Approx(cogrates::gamma(6.0)));
  CHECK(full.z3 == doctest::Approx(cogrates::gamma(2.25 * 6.0 + 6.0)));

  // With X2 silent the covariance is singular; the P2 -> 0 limit is used.
  auto silent = zeta(zic(6, 0, 1, 1.5), 0.5, 0.2, 1.0);
  CHECK(silent.z2 == 0.0);
  CHECK(silent.z1 == doctest::Approx(silent.z3));
}

TEST_CASE("R4 without interference and its dominance") {
  auto c0 = zic(6, 6, 0.8, 0.0);
  auto e0 = region_r4(c0, coarse());
  CHECK(e0.r1_max() == doctest::Approx(cogrates::gamma(0.64 * 6.0)).epsilon(1e-7));
  CHECK(e0.value_at(e0.r1_max()) == doctest::Approx(cogrates::gamma(6.0)).epsilon(1e-7));

  auto c = zic(6, 6, 1.5, 1.5);
  auto r4 = region_r4(c);
  CHECK(subset(region_r3(c), r4, 5e-3).holds);
  CHECK(subset(region_r1(c), r4, 5e-3).holds);
  CHECK(subset(r4, region_r2(c), 1e-9).holds);
}

TEST_CASE("HK region slices") {
  auto c = zic(6, 6, 1, 0.6);
  auto s = r5_slice(c, 1.0);
  CHECK(s.r1 == doctest::Approx(1.40368).epsilon(1e-5));
  CHECK(s.r2 == doctest::Approx(0.76771).epsilon(1e-5));
  s = r5_slice(c, 0.0);
  CHECK(s.r1 == doctest::Approx(0.19400).epsilon(1e-4));
  CHECK(s.r2 == doctest::Approx(1.40368).epsilon(1e-5));
  auto tiny = zic(6, 6, 1, 1e-9);
  CHECK(max_deviation(region_r5(tiny, coarse()), region_r2(tiny)) < 1e-9);
  CHECK(code_of([] { region_r5(zic(6, 6, 1, 1.2)); }) == ErrorCode::StrongInterference);
  CHECK_NOTHROW(region_r5(zic(6, 6, 1, 1.0), coarse()));
}

TEST_CASE("outer bound") {
  auto c = zic(6, 6, 1, 0.6);
  auto s = outer_slice(c, 1.0);
  CHECK(s.r1 == doctest::Approx(1.40368).epsilon(1e-5));
  CHECK(s.r2 == doctest::Approx(0.76771).epsilon(1e-5));
  s = outer_slice(c, 0.0);
  CHECK(s.r1 == 0.0);
  CHECK(s.r2 == doctest::Approx(cogrates::gamma(6.0)));

  for (double b : {0.0, 0.3, 0.6, 1.0}) {
    auto cb = zic(6, 6, 1, b);
    auto o = outer_bound_gaussian(cb);
    CHECK(std::abs(o.value_at(cogrates::gamma(6.0)) - corollary_point(cb).r2) < 1e-9);
    auto r5 = region_r5(cb, coarse());
    CHECK(std::abs(r5.value_at(cogrates::gamma(6.0)) - corollary_point(cb).r2) < 5e-3);
  }
  // Every slice corner lies on the envelope; interpolating a convex
  // boundary between samples costs a little.
  auto c12 = zic(6, 6, 1.2, 0.6);
  auto o = outer_bound_gaussian(c12);
  for (const auto& p : outer_bound_tradeoff(c12, 41)) CHECK(o.contains(p, 1e-5));
  SweepGrid at_corners;
  for (const auto& p : outer_bound_tradeoff(c12, 41)) at_corners.extra_r1.push_back(p.r1);
  auto exact = outer_bound_gaussian(c12, at_corners);
  for (const auto& p : outer_bound_tradeoff(c12, 41)) CHECK(exact.contains(p, 1e-12));

  CHECK(code_of([] { outer_bound_gaussian(zic(6, 6, 1, 1.1)); }) == ErrorCode::ParameterRegime);
  CHECK(code_of([] { outer_bound_gaussian(zic(6, 6, 0.9, 0.6)); }) == ErrorCode::ParameterRegime);
}

TEST_CASE("cognitive gain threshold for the pentagon inside R3") {
  CHECK(r1_subset_r3_k_threshold(zic(6, 6, 1, 1.0)) == doctest::Approx(1.0));
  CHECK(r1_subset_r3_k_threshold(zic(6, 6, 1, 1.5)) == doctest::Approx(2.52877).epsilon(1e-5));
  const double K2 = std::pow(r1_subset_r3_k_threshold(zic(6, 6, 1, 1.5)), 2);
  CHECK(K2 == doctest::Approx(6.3947).epsilon(1e-4));
  CHECK(code_of([] { r1_subset_r3_k_threshold(zic(6, 6, 1, std::sqrt(7.0))); }) == ErrorCode::RegimeBoundary);
}

TEST_CASE("shared corner point") {
  auto p = corner_point(zic(6, 6, 1, 0.0));
  CHECK(p.r1 == 0.0);
  CHECK(p.r2 == doctest::Approx(cogrates::gamma(6.0)));
  p = corner_point(zic(6, 6, 1, 0.6));
  CHECK(p.r1 == doctest::Approx(0.19400).epsilon(1e-4));
  CHECK(p.r2 == doctest::Approx(1.40368).epsilon(1e-5));
  auto q = corollary_point(zic(6, 6, 1, 0.6));
  CHECK(q.r1 == doctest::Approx(1.40368).epsilon(1e-5));
  CHECK(q.r2 == doctest::Approx(0.76771).epsilon(1e-5));

  for (double K : {1.5, 2.0, 3.0}) {
    for (double b : {1.0, 1.5, 2.0}) {
      auto c = zic(6, 6, K, b);
      auto corner = corner_point(c);
      auto r1 = region_r1(c);
      auto g = coarse();
      g.extra_r1 = {corner.r1};
      auto r3 = region_r3(c, g);
      CHECK(std::abs(r1.value_at(corner.r1) - corner.r2) < 5e-3);
      CHECK(std::abs(r3.value_at(corner.r1) - corner.r2) < 5e-3);
    }
  }
}

TEST_CASE("every region lies inside the rectangle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pw(0.0, 10.0), kk(0.0, 3.0), bb(0.0, 2.5);
  for (int i = 0; i < 8; ++i) {
    auto c = zic(pw(rng), pw(rng), kk(rng), bb(rng));
    auto rect = region_r2(c);
    auto g = coarse();
    CHECK(subset(region_r3(c, g), rect, 1e-9).holds);
    CHECK(subset(region_r4(c, g), rect, 1e-9).holds);
    if (c.b >= 1.0) CHECK(subset(region_r1(c), rect, 1e-9).holds);
    if (c.b <= 1.0) CHECK(subset(region_r5(c, g), rect, 1e-9).holds);
    if (c.b <= 1.0 && c.K >= 1.0) CHECK(subset(outer_bound_gaussian(c, g), rect, 1e-9).holds);
  }
}

TEST_CASE("R3 grows with the cognitive gain") {
  // Compared pointwise at the smaller region's samples, which are adjoined
  // to the larger region's grid.
  auto g = coarse();
  g.refine = false;
  for (double b : {0.6, 1.5}) {
    Envelope prev = region_r3(zic(6, 6, 0.0, b), g);
    for (double K : {0.5, 1.0, 1.5, 2.0, 3.0, 6.0}) {
      auto gk = g;
      gk.extra_r1.assign(prev.r1_grid().begin(), prev.r1_grid().end());
      auto cur = region_r3(zic(6, 6, K, b), gk);
      CHECK(cur.r1_max() >= prev.r1_max());
      double worst = -1.0;
      for (double x : prev.r1_grid()) worst = std::max(worst, prev.value_at(x) - cur.value_at(x));
      CHECK(worst <= 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("refined R3 is never below a dense brute-force grid") {
  auto c = zic(6, 6, 3, 1.5);
  auto e = region_r3(c);
  for (double x = 0.05; x < e.r1_max(); x += 0.1) {
    double brute = -1.0;
    for (int i = 0; i <= 800; ++i)
      for (int j = 0; j <= i; ++j) {
        auto s = r3_slice(c, i / 800.0, j / 800.0);
        if (s.r1 >= x) brute = std::max(brute, s.r2);
      }
    CHECK(e.value_at(x) >= brute - 1e-4);
    CHECK(e.value_at(x) <= cogrates::gamma(6.0) + 1e-12);
  }
}
