#pragma once
// Metric mean dimension surrogates: ratios F(mu, eps) / ln(1/eps) over eps
// grids, the two inequality chains between the epsilon-entropies, the slope
// coincidence harness and the grid-shift family of [0,1]^Z.

#include "mmd/caratheodory.hpp"
#include "mmd/entropies.hpp"
#include "mmd/estimate.hpp"
#include "mmd/grid_family.hpp"
#include "mmd/measures.hpp"
#include "mmd/symbolic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mmd {

struct SlopeReport {
  std::string quantity;
  /// Strictly decreasing, non-dyadic, inside (0, 1).
  std::vector<double> eps;
  std::vector<double> values;
  std::vector<double> ratios;
  std::vector<std::optional<Interval>> bounds;
  std::vector<EstimateMode> modes;
  double ratio_finest = 0.0;
  /// Least-squares slope of value against ln(1/eps) over the finest half.
  double slope = 0.0;
  /// max / min of the ratios over the finest half.
  double upper = 0.0;
  double lower = 0.0;
};

SlopeReport slope_report(const std::vector<double>& eps, const std::vector<double>& values,
                         const std::string& quantity);
SlopeReport slope_report(const std::vector<EntropyEstimate>& estimates, const std::string& quantity);

/// Schedules and grids for every estimator the harnesses call.
struct EstimatorSettings {
  /// Katok at fixed delta; the Shapira threshold is 1 - delta.
  double delta = 0.2;
  std::vector<double> delta_grid{0.2, 0.1, 0.05};
  std::vector<int> sep_schedule{4, 6, 8, 10};
  std::vector<int> ks_schedule{4, 8, 12, 16};
  int ks_max_depth = 12;
  std::vector<int> katok_schedule{64, 96, 128, 192, 256, 384, 512, 768};
  std::vector<int> bk_schedule{8, 12, 16, 20};
  std::optional<SamplingSpec> bk_sampling;
  NeighbourhoodGrid ps_grid;
  std::vector<int> ps_schedule{100, 200, 400, 800};
  std::vector<int> ow_schedule{8, 12, 16};
  ReturnTimeSpec ow;
  CriticalSpec critical{{16, 32, 64, 128}};
  CriticalSpec critical_top{};
  GenericGrid generic;
  int threads = 0;
};

/// One estimator call by quantity id. Z is the whole space for the
/// topological quantities.
EntropyEstimate estimate_quantity(QuantityId quantity, const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                  const EstimatorSettings& settings);

/// Certified estimate wrapping a Caratheodory-Pesin critical value.
EntropyEstimate critical_estimate(const CriticalValue& c, QuantityId quantity, double eps);

struct ChainNode {
  std::string quantity;
  /// The printed argument, e.g. "eps/32", and its value.
  std::string eps_label;
  double eps = 0.0;
  double value = 0.0;
  EstimateMode mode = EstimateMode::Exact;
  std::string family;
};

struct ChainLink {
  ChainNode lhs;
  ChainNode rhs;
  double slack = 0.0;
  bool pass = true;
};

struct ChainReport {
  std::string name;
  double eps = 0.0;
  double tau = 0.0;
  std::vector<ChainNode> nodes;
  std::vector<ChainLink> links;
  bool passed() const;
  /// "lhs(arg) <= rhs(arg)" for every failing link, with both modes.
  std::vector<std::string> failures() const;
};

/// BK_U(2e) <= KS(e) <= Shapira(e) <= K_L(e/4, d) <= K_U(e/4, d) <= K_L(e/32)
/// <= K_U(e/32) <= BK_U(e/64), with d = settings.delta.
ChainReport lemma31_chain(const MeasureModel& mu, const ShiftSystem& sys, double eps, double tau,
                          const EstimatorSettings& settings = {});

/// BK_U(e) <= P_mu(e/10) <= inf_Z P_top(Z, e/10) <= P_top(G_mu, e/10)
/// <= PS(e/10) <= K_U(e/60) <= BK_U(e/120). The infimum runs over the whole
/// space and the generic leaf set.
ChainReport lemma32_chain(const MeasureModel& mu, const ShiftSystem& sys, double eps, double tau,
                          const EstimatorSettings& settings = {});

struct Theorem11Report {
  std::vector<SlopeReport> slopes;
  /// Max pairwise gap between finest-scale ratios.
  double discrepancy = 0.0;
  /// |upper - lower| of the fixed-delta Katok ratio surrogates.
  double katok_gap = 0.0;
  /// ln(size) / ln(1/eps_min): every finest ratio of a finite-alphabet system
  /// lies in [0, this].
  double ratio_bound = 0.0;
};

std::vector<QuantityId> theorem11_quantities();

Theorem11Report theorem11_experiment(const MeasureModel& mu, const ShiftSystem& sys, const std::vector<double>& eps,
                                     const std::vector<QuantityId>& quantities,
                                     const EstimatorSettings& settings = {});

// --- grid-shift family ----------------------------------------------------

struct GridLevel {
  int m = 2;
  double eps = 0.0;
};

struct Example46Spec {
  std::vector<GridLevel> levels;
  std::vector<int> n_schedule{1, 2, 4, 8};
  /// Radii of the lower and upper separated-count brackets, as multiples of eps.
  double inflate = 1.5;
  double deflate = 0.5;
  int max_block = 3;
  std::uint64_t cap = kDefaultEnumerationCap;
  Sidedness sidedness = Sidedness::TwoSided;
};

/// m_j = 2^j for j in [first, last] and eps_j = 4 (1 + margin) / (m_j - 1),
/// the smallest radius whose quarter dominates the grid spacing.
std::vector<GridLevel> dyadic_levels(int first, int last, double margin = 1e-6);

struct Example46Row {
  GridLevel level;
  double spacing = 0.0;
  /// Certified bracket on the separated-count rate at eps.
  Interval top;
  Interval bk;
  RateBracket lower_bracket;
  RateBracket upper_bracket;
  RateBracket bk_bracket;
  /// Present when eps < 1.
  std::optional<Interval> top_ratio;
  std::optional<Interval> bk_ratio;
  /// Gap between the two ratio intervals (0 when they overlap).
  std::optional<double> ratio_gap;
};

struct Example46Report {
  std::vector<Example46Row> rows;
  /// Lower top ratios nondecreasing over the levels where they are defined.
  bool monotone = true;
  std::optional<double> final_lower_ratio;
  double max_ratio_gap = 0.0;
  std::optional<SlopeReport> top_lower;
  std::optional<SlopeReport> top_upper;
  std::optional<SlopeReport> bk_upper;
};

Example46Report example46_experiment(const Example46Spec& spec);

}  // namespace mmd
