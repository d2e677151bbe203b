#include "mmd/estimate.hpp"

#include "mmd/errors.hpp"

#include <array>
#include <utility>

namespace mmd {

namespace {

constexpr std::array<std::pair<QuantityId, const char*>, 17> kNames{{
    {QuantityId::SEP_COUNT_RATE, "SEP_COUNT_RATE"},
    {QuantityId::KS_EPS, "KS_EPS"},
    {QuantityId::SHAPIRA_EPS, "SHAPIRA_EPS"},
    {QuantityId::BK_UPPER, "BK_UPPER"},
    {QuantityId::BK_LOWER, "BK_LOWER"},
    {QuantityId::KATOK_UPPER, "KATOK_UPPER"},
    {QuantityId::KATOK_LOWER, "KATOK_LOWER"},
    {QuantityId::KATOK_UPPER_LIM, "KATOK_UPPER_LIM"},
    {QuantityId::KATOK_LOWER_LIM, "KATOK_LOWER_LIM"},
    {QuantityId::PS, "PS"},
    {QuantityId::OW_RETURN, "OW_RETURN"},
    {QuantityId::BOWEN_TOP, "BOWEN_TOP"},
    {QuantityId::PACKING_TOP, "PACKING_TOP"},
    {QuantityId::BOWEN_MU, "BOWEN_MU"},
    {QuantityId::PACKING_MU, "PACKING_MU"},
    {QuantityId::PACKING_GENERIC, "PACKING_GENERIC"},
    {QuantityId::PACKING_INF, "PACKING_INF"},
}};

}  // namespace

const char* to_string(QuantityId id) {
  for (const auto& [q, name] : kNames)
    if (q == id) return name;
  return "?";
}

QuantityId parse_quantity(std::string_view name) {
  for (const auto& [q, n] : kNames)
    if (name == n) return q;
  fail(ErrorKind::Validation, "unknown quantity '" + std::string(name) + "'");
}

const char* to_string(EstimateMode mode) {
  switch (mode) {
    case EstimateMode::Exact: return "exact";
    case EstimateMode::Certified: return "certified";
    case EstimateMode::MonteCarlo: return "monte_carlo";
  }
  return "?";
}

}  // namespace mmd
