#include <doctest.h>

#include <cmath>
#include <random>

#include "cogrates/discrete_icdms.hpp"
#include "cogrates/errors.hpp"
#include "cogrates/joint_pmf.hpp"

using namespace cogrates;

namespace {

double binary_entropy(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

// I(X;Y) by direct summation over the 2x2 joint, written out independently
// of the marginalization code.
double direct_mi(const double joint[2][2]) {
  double px[2] = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
  double py[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
  double s = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (joint[x][y] > 0) s += joint[x][y] * std::log2(joint[x][y] / (px[x] * py[y]));
  return s;
}

DiscreteChannel parallel_noiseless() {
  std::vector<double> t(16, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) t[((x1 * 2 + x2) * 2 + x1) * 2 + x2] = 1.0;
  return DiscreteChannel(2, 2, 2, 2, t);
}

}  // namespace

TEST_CASE("mutual information of simple pairs") {
  JointPmf indep({"A", "B"}, {2, 2}, {0.12, 0.28, 0.18, 0.42});
  CHECK(indep.mutual_information({"A"}, {"B"}) == doctest::Approx(0.0).epsilon(1e-12));
  JointPmf copy({"A", "B"}, {2, 2}, {0.5, 0.0, 0.0, 0.5});
  CHECK(copy.mutual_information({"A"}, {"B"}) == doctest::Approx(1.0));
  CHECK(copy.entropy({"A", "B"}) == doctest::Approx(1.0));

  const double f = 0.11;
  double joint[2][2] = {{0.5 * (1 - f), 0.5 * f}, {0.5 * f, 0.5 * (1 - f)}};
  JointPmf bsc({"X", "Y"}, {2, 2}, {joint[0][0], joint[0][1], joint[1][0], joint[1][1]});
  double mi = bsc.mutual_information({"X"}, {"Y"});
  CHECK(mi == doctest::Approx(direct_mi(joint)).epsilon(1e-12));
  CHECK(mi == doctest::Approx(1.0 - binary_entropy(f)).epsilon(1e-12));
  CHECK(std::abs(mi - 0.5) < 1e-3);
}

TEST_CASE("table layout puts the last variable fastest") {
  JointPmf p({"A", "B", "C"}, {2, 3, 2}, std::vector<double>(12, 1.0 / 12));
  std::vector<double> t(12, 0.0);
  t[1 * 6 + 2 * 2 + 1] = 1.0;
  JointPmf point({"A", "B", "C"}, {2, 3, 2}, t);
  CHECK(point.prob({1, 2, 1}) == 1.0);
  auto m = point.marginal({"C", "A"});
  CHECK(m.prob({1, 1}) == 1.0);
  CHECK(p.entropy({"B"}) == doctest::Approx(std::log2(3.0)));
}

TEST_CASE("invalid tables and unknown names are rejected") {
  CHECK_THROWS_AS(JointPmf({"A"}, {2}, {0.5, 0.6}), Error);
  CHECK_THROWS_AS(JointPmf({"A"}, {2}, {1.5, -0.5}), Error);
  CHECK_THROWS_AS(JointPmf({"A", "A"}, {1, 1}, {1.0}), Error);
  CHECK_THROWS_AS(JointPmf({"A"}, {3}, {0.5, 0.5}), Error);
  JointPmf p({"A"}, {2}, {0.5, 0.5});
  try {
    p.entropy({"Z"});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownVariable);
  }
  CHECK_THROWS_AS(DiscreteChannel(1, 1, 2, 1, {0.5, 0.4}), Error);
}

TEST_CASE("derived variables act as tuples and constants") {
  std::mt19937_64 rng(3);
  auto p = uniform_simplex_pmf(rng, {"A", "B", "C"}, {2, 3, 2});
  auto d = p.with_derived("AB", {"A", "B"}).with_derived("K", {});
  CHECK(d.entropy({"AB"}) == doctest::Approx(p.entropy({"A", "B"})));
  CHECK(d.mutual_information({"AB"}, {"C"}) == doctest::Approx(p.mutual_information({"A", "B"}, {"C"})));
  CHECK(d.entropy({"K"}) == 0.0);
  CHECK(d.mutual_information({"K"}, {"C"}, {"A"}) < 1e-12);
  CHECK(d.mutual_information({"AB"}, {"C"}, {"A"}) == doctest::Approx(p.mutual_information({"B"}, {"C"}, {"A"})));
}

TEST_CASE("chain rule and nonnegativity on random pmfs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = uniform_simplex_pmf(rng, {"A", "B", "C", "D"}, {2, 3, 2, 2});
    double lhs = p.mutual_information({"A"}, {"C"}) + p.mutual_information({"B"}, {"C"}, {"A"});
    CHECK(std::abs(lhs - p.mutual_information({"A", "B"}, {"C"})) < 1e-10);
    CHECK(p.mutual_information({"A"}, {"D"}, {"B", "C"}) >= -1e-12);
    CHECK(p.mutual_information({"A", "D"}, {"B"}, {"C"}) >= -1e-12);
    double h = p.entropy({"A", "B"}) - p.entropy({"A"}) - p.conditional_entropy({"B"}, {"A"});
    CHECK(std::abs(h) < 1e-10);
  }
}

TEST_CASE("factored construction reproduces its conditionals") {
  std::vector<Factor> f{{"A", {}, {0.3, 0.7}}, {"B", {"A"}, {0.9, 0.1, 0.2, 0.8}}};
  auto p = JointPmf::from_factors({"A", "B"}, {2, 2}, f);
  CHECK(p.prob({0, 0}) == doctest::Approx(0.27));
  CHECK(p.prob({1, 1}) == doctest::Approx(0.56));
  std::vector<Factor> bad{{"B", {"A"}, {0.9, 0.1, 0.2, 0.8}}, {"A", {}, {0.3, 0.7}}};
  CHECK_THROWS_AS(JointPmf::from_factors({"A", "B"}, {2, 2}, bad), Error);
}

TEST_CASE("channel extension") {
  JointPmf inputs({"U", "X1", "X2"}, {2, 2, 2}, {0.1, 0.05, 0.2, 0.15, 0.05, 0.15, 0.1, 0.2});
  SUBCASE("identity channel copies inputs") {
    auto e = extend_with_channel(inputs, parallel_noiseless());
    CHECK(e.conditional_entropy({"Y1"}, {"X1"}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e.mutual_information({"Y2"}, {"X2"}) == doctest::Approx(e.entropy({"X2"})));
  }
  SUBCASE("constant output is independent of everything") {
    DiscreteChannel c(2, 2, 2, 2, {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0});
    auto e = extend_with_channel(inputs, c);
    CHECK(e.mutual_information({"Y1", "Y2"}, {"U", "X1", "X2"}) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("Markov property of the extension") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      auto p = uniform_simplex_pmf(rng, {"U", "X1", "X2"}, {3, 2, 2});
      auto e = extend_with_channel(p, random_channel(rng, 2, 2, 2, 3, 1.0));
      CHECK(e.mutual_information({"U"}, {"Y1", "Y2"}, {"X1", "X2"}) < 1e-12);
    }
  }
  SUBCASE("errors") {
    DiscreteChannel wide(3, 2, 2, 2, std::vector<double>(24, 0.25));
    CHECK_THROWS_AS(extend_with_channel(inputs, wide), Error);
    try {
      extend_with_channel(inputs, wide);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AlphabetMismatch);
    }
    JointPmf no_x2({"X1"}, {2}, {0.5, 0.5});
    CHECK_THROWS_AS(extend_with_channel(no_x2, parallel_noiseless()), Error);
  }
}

TEST_CASE("deterministic receiver detection") {
  auto ch = parallel_noiseless();
  auto h = ch.deterministic_y2();
  REQUIRE(h.has_value());
  CHECK((*h)[0] == 0);
  CHECK((*h)[3] == 1);
  std::mt19937_64 rng(2);
  CHECK_FALSE(random_channel(rng, 2, 2, 2, 2, 1.0).deterministic_y2().has_value());
}

TEST_CASE("JSON round trips") {
  std::mt19937_64 rng(9);
  auto p = uniform_simplex_pmf(rng, {"U", "X1", "X2"}, {2, 3, 2}).with_derived("T", {"U", "X2"});
  auto back = pmf_from_json(pmf_to_json(p));
  CHECK(back.names() == p.names());
  CHECK(back.sizes() == p.sizes());
  for (std::size_t i = 0; i < p.table().size(); ++i) CHECK(back.table()[i] == p.table()[i]);
  CHECK(back.entropy({"T"}) == doctest::Approx(p.entropy({"U", "X2"})));
  auto ch = random_channel(rng, 3, 2, 2, 2, 0.5);
  auto ch2 = channel_from_json(channel_to_json(ch));
  CHECK(ch2.table() == ch.table());
  CHECK_THROWS_AS(pmf_from_json("{\"vars\": [\"A\"]}"), Error);
  CHECK_THROWS_AS(channel_from_json("{\"vars\": [\"Y1\", \"X2\", \"X1\", \"Y2\"], \"sizes\": [1,1,1,1], \"table\": [1]}"),
                  Error);
}
