#include "mmd/errors.hpp"
#include "mmd/symbolic.hpp"
#include "../oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace mmd;

namespace {

PointRep pt(const std::string& prefix, const std::string& period) { return {parse_word(prefix), parse_word(period)}; }

}  // namespace

TEST_CASE("distance of a point to itself is zero") {
  const auto sys = ShiftSystem::full(2);
  const Interval d = distance(pt("0110", "01"), pt("0110", "01"), sys);
  CHECK(d.lo == 0.0);
  CHECK(d.hi == 0.0);
}

TEST_CASE("first-difference distance is 2^-first disagreement") {
  const auto sys = ShiftSystem::full(2);
  const Interval d = bowen_distance(PointRep::constant(0), pt("1", "0"), 3, sys);
  CHECK(d.lo == 1.0);
  CHECK(d.hi == 1.0);
  const Interval e = distance(pt("0001", "0"), PointRep::constant(0), sys);
  CHECK(e.lo == 0.125);
  CHECK(e.hi == 0.125);
}

TEST_CASE("weighted-sum distance of the constant sequences is a geometric series") {
  const ShiftSystem sys(Alphabet({0.0, 1.0}, SymbolMetric::Euclidean), std::nullopt, Sidedness::OneSided,
                        {MetricKind::WeightedSum, 40});
  const Interval d = bowen_distance(PointRep::constant(0), PointRep::constant(1), 5, sys);
  CHECK(d.lo <= 2.0);
  CHECK(d.hi >= 2.0);
  CHECK(d.width() < 1e-9);
}

TEST_CASE("ball depth offset and dyadic radii") {
  CHECK(ball_depth_offset(0.3) == 2);
  CHECK(ball_depth_offset(0.6) == 1);
  CHECK(ball_depth_offset(1.5) == 0);
  CHECK(ball_depth_offset(0.07) == 4);
  CHECK(is_dyadic(0.25));
  CHECK(is_dyadic(1.0));
  CHECK_FALSE(is_dyadic(0.3));
  CHECK_THROWS_AS(require_non_dyadic(0.5), Error);
  for (double eps : {0.3, 0.15, 0.07, 0.6, 0.01}) CHECK(ball_depth_offset(eps) == oracle::k_of(eps));
}

TEST_CASE("ball to cylinder matches brute-force membership") {
  const auto sys = ShiftSystem::full(2);
  struct Case {
    int n;
    double eps;
    int depth;
  };
  for (const Case c : {Case{3, 0.3, 4}, Case{1, 0.6, 1}, Case{1, 1.5, 0}, Case{2, 0.15, 4}}) {
    const CylinderSet cyl = ball_to_cylinder(Word(8, 0), c.n, c.eps, sys);
    CHECK(cyl.depth() == c.depth);
    // Every length-8 word lies in the ball iff it lies in the cylinder.
    const oracle::Digits zero(8, 0);
    for (const auto& y : oracle::all_words(2, 8)) {
      const bool in_ball = oracle::bowen_fd(zero, y, c.n) < c.eps;
      bool in_cyl = true;
      for (int i = 0; i < cyl.depth(); ++i) in_cyl = in_cyl && y[i] == cyl.word[i];
      CHECK(in_ball == in_cyl);
    }
  }
}

TEST_CASE("open ball membership agrees with the cylinder") {
  const auto sys = ShiftSystem::full(2);
  const BowenBall ball{PointRep::constant(0), 3, 0.3, false};
  CHECK(in_ball(ball, pt("0000", "1"), sys) == Tri::Yes);
  CHECK(in_ball(ball, pt("0001", "1"), sys) == Tri::No);
}

TEST_CASE("word enumeration") {
  CHECK(enumerate_words(ShiftSystem::full(2), 3).size() == 8);
  CHECK(enumerate_words(ShiftSystem::golden_mean(), 3).size() == 5);
  const auto empty = enumerate_words(ShiftSystem::full(3), 0);
  REQUIRE(empty.size() == 1);
  CHECK(empty.front().empty());
  // Fibonacci counts F_{L+2} on the golden mean shift.
  const auto gold = ShiftSystem::golden_mean();
  for (int len = 1; len <= 12; ++len) {
    CHECK(gold.count_words(len) == oracle::all_words(2, len, oracle::golden).size());
    CHECK(enumerate_words(gold, len).size() == gold.count_words(len));
  }
  CHECK(gold.log_spectral_radius() == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
}

TEST_CASE("inadmissible words are rejected") {
  const auto gold = ShiftSystem::golden_mean();
  CHECK_FALSE(gold.admissible(parse_word("0110")));
  CHECK_THROWS_AS(gold.require_admissible(parse_word("11")), Error);
  try {
    gold.require_admissible(parse_word("11"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Admissibility);
  }
}

TEST_CASE("words print and parse") {
  CHECK(to_string(parse_word("01021")) == "01021");
  CHECK(parse_word("").empty());
}
