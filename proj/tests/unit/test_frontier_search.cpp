#include <doctest.h>

#include <cmath>
#include <random>

#include "cogrates/errors.hpp"
#include "cogrates/frontier_search.hpp"

using namespace cogrates;

namespace {

DiscreteChannel parallel_noiseless() {
  std::vector<double> t(16, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) t[((x1 * 2 + x2) * 2 + x1) * 2 + x2] = 1.0;
  return DiscreteChannel(2, 2, 2, 2, t);
}

DiscreteChannel constant_channel() {
  std::vector<double> t(16, 0.0);
  for (int x = 0; x < 4; ++x) t[x * 4] = 1.0;
  return DiscreteChannel(2, 2, 2, 2, t);
}

// Y2 reveals (X1, X2) completely; Y1 is a noisy function of both inputs.
DiscreteChannel revealing_channel() {
  std::mt19937_64 rng(12);
  auto y1 = dirichlet_rows(rng, 4, 2, 0.5);
  std::vector<double> y2(16, 0.0);
  for (int x = 0; x < 4; ++x) y2[x * 4 + x] = 1.0;
  return DiscreteChannel::from_marginals(2, 2, 2, 4, y1, y2);
}

SearchConfig small_config(std::size_t restarts) {
  SearchConfig c;
  c.restarts = restarts;
  c.weight_sweep = {{1, 0}, {1, 1}, {0, 1}};
  c.seed = 7;
  return c;
}

bool same_envelope(const Envelope& a, const Envelope& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.r1_grid()[i] != b.r1_grid()[i] || a.r2_max()[i] != b.r2_max()[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("stick-breaking parameters build valid factored pmfs") {
  auto ch = parallel_noiseless();
  auto fam = default_family("thm1", ch);
  CHECK(fam.num_params() == 1 + 2 + 2 + 4 + 4 + 4 + 32);
  auto x = fam.random_params(3);
  REQUIRE(x.size() == fam.num_params());
  for (double v : x) CHECK((v >= 0.0 && v <= 1.0));
  auto p = fam.build(x);
  double s = 0.0;
  for (double v : p.table()) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  // Codebook order: X1 depends on the primary auxiliaries only.
  CHECK(p.mutual_information({"X1"}, {"V11", "V20", "V22"}, {"U10", "U11"}) < 1e-12);
  CHECK_THROWS_AS(fam.build(std::vector<double>(3, 0.5)), Error);

  auto thm4 = default_family("thm4", ch);
  CHECK(thm4.num_params() == 1 + 2 + 4 * 3);
  CHECK_THROWS_AS(default_family("thm7", ch), Error);
}

TEST_CASE("random restarts are uniform on each row simplex") {
  // For a ternary row the first stick fraction has mean 1/3 and the
  // second coordinate p2 = (1 - t1) t2 has mean 1/3 as well.
  DistributionFamily fam;
  fam.names = {"A"};
  fam.sizes = {3};
  fam.factors = {{"A", {}, {}}};
  double m1 = 0.0, m2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto p = fam.build(fam.random_params(static_cast<std::uint64_t>(i)));
    m1 += p.table()[0];
    m2 += p.table()[1];
  }
  CHECK(std::abs(m1 / n - 1.0 / 3.0) < 0.01);
  CHECK(std::abs(m2 / n - 1.0 / 3.0) < 0.01);
}

TEST_CASE("support masks restrict the search space") {
  std::mt19937_64 rng(4);
  auto in = random_semidet_instance(rng);
  auto fam = semidet_family(in.ch, true);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = fam.build(fam.random_params(static_cast<std::uint64_t>(trial)));
    // X2 stays on the preimage of S, so S is a copy of Y2 and the gap vanishes.
    auto report = semidet_capacity_rows(p.marginal({"U", "X1", "X2"}), in.ch);
    CHECK(std::abs(report.gap()) < 1e-9);
  }
  std::mt19937_64 r(1);
  CHECK_THROWS_AS(semidet_family(random_channel(r, 2, 2, 2, 2, 1.0), false), Error);
}

TEST_CASE("exhaustive grid on the parallel channel reaches one bit") {
  SearchConfig c;
  c.exhaustive = true;
  auto ch = parallel_noiseless();
  auto fam = default_family("thm4", ch, 1);
  REQUIRE(fam.num_params() == 3);
  auto r = maximize_weighted_rate(registered_spec("thm4"), ch, fam, {1, 0}, c);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.point.r1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.evaluations == 125);
  CHECK(r.argmax.entropy({"X1"}) == doctest::Approx(1.0));

  auto strong = maximize_weighted_rate(registered_spec("prop1"), ch, {1, 0}, c);
  CHECK(strong.value == doctest::Approx(1.0).epsilon(1e-12));

  c.max_candidates = 100;
  CHECK_THROWS_AS(maximize_weighted_rate(registered_spec("thm4"), ch, fam, {1, 0}, c), Error);
}

TEST_CASE("constant-output channel gives the origin") {
  auto ch = constant_channel();
  auto c = small_config(2);
  for (std::array<double, 2> w : {std::array<double, 2>{1, 0}, {1, 1}, {0, 1}}) {
    auto r = maximize_weighted_rate(registered_spec("thm4"), ch, w, c);
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
  }
  auto e = frontier(registered_spec("thm1"), ch, c);
  CHECK(e.r1_max() < 1e-12);
  CHECK(e.value_at(0.0) < 1e-12);
}

TEST_CASE("configuration and weights are validated") {
  auto ch = parallel_noiseless();
  SearchConfig c = small_config(1);
  CHECK_THROWS_AS(maximize_weighted_rate(registered_spec("thm4"), ch, {0, 0}, c), Error);
  CHECK_THROWS_AS(maximize_weighted_rate(registered_spec("thm4"), ch, {-1, 1}, c), Error);
  c.restarts = 0;
  CHECK_THROWS_AS(frontier(registered_spec("thm4"), ch, c), Error);
  c = small_config(1);
  c.weight_sweep = {{1, 0}, {0, 0}};
  CHECK_THROWS_AS(frontier(registered_spec("thm4"), ch, c), Error);
}

TEST_CASE("hull envelope of a point set") {
  auto e = hull_envelope({{1, 0}, {0, 1}, {0.6, 0.6}});
  CHECK(e.value_at(0.0) == doctest::Approx(1.0));
  CHECK(e.value_at(0.6) == doctest::Approx(0.6));
  CHECK(e.value_at(0.3) == doctest::Approx(0.8));
  CHECK(e.r1_max() == doctest::Approx(1.0));
  // An interior point does not change the hull.
  auto f = hull_envelope({{1, 0}, {0, 1}, {0.6, 0.6}, {0.3, 0.3}});
  CHECK(max_deviation(e, f) < 1e-15);
  CHECK(hull_envelope({}).r1_max() == 0.0);
}

TEST_CASE("reproducible and monotone in the restart budget") {
  std::mt19937_64 rng(21);
  auto ch = random_channel(rng, 2, 2, 2, 2, 0.5);
  auto c = small_config(3);
  auto a = frontier(registered_spec("thm4"), ch, c);
  auto b = frontier(registered_spec("thm4"), ch, c);
  CHECK(same_envelope(a, b));
  c.restarts = 6;
  auto d = frontier(registered_spec("thm4"), ch, c);
  CHECK(subset(a, d, 1e-12).holds);
  c.seed = 8;
  auto other = frontier(registered_spec("thm4"), ch, c);
  CHECK(other.r1_max() > 0.0);
}

TEST_CASE("parallel noiseless channel: the new inner bound reaches the unit square") {
  auto c = small_config(20);
  auto e = frontier(registered_spec("thm1"), parallel_noiseless(), c);
  // Containment between the shrunken and the grown square; a pointwise
  // r2 comparison is ill-conditioned at the vertical edge r1 = 1.
  CHECK(subset(e, Envelope::rectangle(1.0 + 1e-3, 1.0 + 1e-3), 0.0).holds);
  CHECK(subset(Envelope::rectangle(1.0 - 1e-3, 1.0 - 1e-3), e, 0.0).holds);
}

TEST_CASE("inner frontier stays inside the outer frontier") {
  std::mt19937_64 rng(33);
  std::vector<DiscreteChannel> corpus{parallel_noiseless(), constant_channel()};
  for (int i = 0; i < 3; ++i) corpus.push_back(random_channel(rng, 2, 2, 2, 2, 0.5));
  auto c = small_config(6);
  for (const auto& ch : corpus) {
    auto inner = frontier(registered_spec("thm1"), ch, c);
    auto outer = frontier(registered_spec("thm4"), ch, c);
    auto s = subset(inner, outer, 1e-6);
    CHECK(s.holds);
  }
}

TEST_CASE("fully revealing semi-deterministic channel: inner and capacity optima agree") {
  auto ch = revealing_channel();
  auto c = small_config(6);
  auto inner = semidet_family(ch, true);
  auto cap = semidet_family(ch, false);
  for (std::array<double, 2> w : {std::array<double, 2>{1, 0}, {1, 1}, {0, 1}}) {
    auto a = maximize_weighted_rate(registered_spec("thm1"), ch, inner, w, c);
    auto b = maximize_weighted_rate(registered_spec("thm5"), ch, cap, w, c);
    CHECK(std::abs(a.value - b.value) < 2e-2);
  }
}
