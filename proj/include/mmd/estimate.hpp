#pragma once
// One value of an epsilon-entropy functional together with its finite-n trace.

#include "mmd/extrapolate.hpp"
#include "mmd/symbolic.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mmd {

enum class QuantityId {
  SEP_COUNT_RATE,
  KS_EPS,
  SHAPIRA_EPS,
  BK_UPPER,
  BK_LOWER,
  KATOK_UPPER,
  KATOK_LOWER,
  KATOK_UPPER_LIM,
  KATOK_LOWER_LIM,
  PS,
  OW_RETURN,
  BOWEN_TOP,
  PACKING_TOP,
  BOWEN_MU,
  PACKING_MU,
  PACKING_GENERIC,
  PACKING_INF,
};

const char* to_string(QuantityId id);
QuantityId parse_quantity(std::string_view name);

enum class EstimateMode { Exact, Certified, MonteCarlo };
const char* to_string(EstimateMode mode);

struct EstimateParams {
  std::optional<double> delta;
  std::optional<int> ell;
  std::optional<double> eta;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> depth;
};

struct EntropyEstimate {
  QuantityId quantity = QuantityId::SEP_COUNT_RATE;
  double eps = 0.0;
  EstimateParams params;
  Trace trace;
  double value = 0.0;
  std::optional<Interval> bounds;
  EstimateMode mode = EstimateMode::Exact;
  /// Family or grid the infimum/limit was taken over.
  std::string family;
};

}  // namespace mmd
