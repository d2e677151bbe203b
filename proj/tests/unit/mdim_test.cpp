#include "mmd/errors.hpp"
#include "mmd/mdim.hpp"

#include <doctest.h>

#include <cmath>

using namespace mmd;

namespace {

const std::vector<double> kGrid{0.3, 0.15, 0.07, 0.03};

}  // namespace

TEST_CASE("slope of constant values is zero") {
  const auto r = slope_report(kGrid, {0.7, 0.7, 0.7, 0.7}, "F");
  CHECK(r.slope == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t i = 0; i < kGrid.size(); ++i) CHECK(r.ratios[i] == doctest::Approx(0.7 / std::log(1 / kGrid[i])));
  CHECK(r.ratio_finest == doctest::Approx(0.7 / std::log(1 / 0.03)));
}

TEST_CASE("slope of a log-linear profile is its coefficient") {
  std::vector<double> v;
  for (double e : kGrid) v.push_back(1.7 * std::log(1 / e));
  const auto r = slope_report(kGrid, v, "F");
  CHECK(r.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(r.upper == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(r.lower == doctest::Approx(1.7).epsilon(1e-12));
  for (double x : r.ratios) CHECK(x == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("slope grids are validated") {
  CHECK_THROWS_AS(slope_report({0.3, 0.15, 0.07}, {1, 1, 1}, "F"), Error);
  CHECK_THROWS_AS(slope_report({0.3, 0.25, 0.07, 0.03}, {1, 1, 1, 1}, "F"), Error);
  CHECK_THROWS_AS(slope_report({0.3, 0.07, 0.15, 0.03}, {1, 1, 1, 1}, "F"), Error);
  CHECK_THROWS_AS(slope_report({1.3, 0.15, 0.07, 0.03}, {1, 1, 1, 1}, "F"), Error);
}

TEST_CASE("first chain passes for the uniform measure") {
  const auto mu = MeasureModel::bernoulli(std::vector<double>{0.5, 0.5});
  const ChainReport r = lemma31_chain(mu, ShiftSystem::full(2), 0.3, 0.05);
  CHECK(r.passed());
  CHECK(r.failures().empty());
  REQUIRE(r.nodes.size() == 8);
  CHECK(r.nodes.front().quantity == "BK_UPPER");
  CHECK(r.nodes.front().eps_label == "2eps");
  CHECK(r.nodes.front().eps == doctest::Approx(0.6));
  CHECK(r.links.size() == 7);
}

TEST_CASE("chain links report failures with both modes") {
  ChainReport r;
  r.name = "demo";
  ChainNode a{"PS", "eps/10", 0.03, 0.9, EstimateMode::Certified, ""};
  ChainNode b{"KATOK_UPPER_LIM", "eps/60", 0.005, 0.5, EstimateMode::Certified, ""};
  r.links.push_back({a, b, -0.4, false});
  CHECK_FALSE(r.passed());
  REQUIRE(r.failures().size() == 1);
  CHECK(r.failures()[0].find("PS(eps/10)") != std::string::npos);
  CHECK(r.failures()[0].find("certified") != std::string::npos);
}

TEST_CASE("chains need the exact backend and reject dyadic radii") {
  const auto mu = MeasureModel::bernoulli(std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(lemma31_chain(mu, ShiftSystem::full(2), 0.25, 0.05), Error);
  const auto ws = ShiftSystem::full(2, Sidedness::OneSided, {MetricKind::WeightedSum, 20});
  CHECK_THROWS_AS(lemma32_chain(mu, ws, 0.3, 0.1), Error);
}

TEST_CASE("slope experiment with closed-form quantities") {
  const auto mu = MeasureModel::bernoulli(std::vector<double>{0.8, 0.2});
  const auto r = theorem11_experiment(mu, ShiftSystem::full(2), kGrid,
                                      {QuantityId::KS_EPS, QuantityId::BK_UPPER, QuantityId::BK_LOWER});
  REQUIRE(r.slopes.size() == 3);
  CHECK(r.discrepancy < 1e-9);
  CHECK(r.ratio_bound == doctest::Approx(std::log(2.0) / std::log(1 / 0.03)));
  for (const auto& s : r.slopes) {
    CHECK(s.ratio_finest >= 0.0);
    CHECK(s.ratio_finest <= r.ratio_bound);
    CHECK(std::abs(s.slope) < 1e-9);
  }
}

TEST_CASE("dyadic grid levels dominate the spacing") {
  const auto levels = dyadic_levels(1, 5);
  REQUIRE(levels.size() == 5);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const int m = 1 << (j + 1);
    CHECK(levels[j].m == m);
    CHECK(1.0 / (m - 1) <= levels[j].eps / 4);
    CHECK(levels[j].eps == doctest::Approx(4.0 / (m - 1)).epsilon(1e-5));
  }
}

TEST_CASE("grid family rows carry consistent brackets") {
  Example46Spec spec;
  spec.levels = dyadic_levels(3, 3);
  spec.n_schedule = {1, 2};
  const auto r = example46_experiment(spec);
  REQUIRE(r.rows.size() == 1);
  const auto& row = r.rows[0];
  CHECK(row.spacing <= row.level.eps / 4);
  CHECK(row.top.lo <= row.top.hi);
  CHECK(row.bk.lo <= row.bk.hi);
  REQUIRE(row.top_ratio.has_value());
  CHECK(row.top_ratio->lo == doctest::Approx(row.top.lo / std::log(1 / row.level.eps)));
  CHECK_FALSE(r.top_lower.has_value());
}
