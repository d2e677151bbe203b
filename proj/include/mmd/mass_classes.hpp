#pragma once
// Words of a fixed length grouped by mass. Greedy covering problems over
// equal-depth cylinders only need the multiset of atom masses, and for
// Bernoulli and two-symbol Markov measures that multiset has polynomially many
// distinct values (compositions and run structures).

#include "mmd/measures.hpp"
#include "mmd/rational.hpp"
#include "mmd/symbolic.hpp"

#include <optional>
#include <vector>

namespace mmd {

/// Classes sorted by decreasing mass. Exact fields are filled when the
/// measure is exact and the length is at most the exact depth.
struct MassClasses {
  int length = 0;
  std::vector<double> log_mass;
  std::vector<double> log_count;
  bool exact = false;
  std::vector<Rational> mass;
  std::vector<BigInt> count;

  std::size_t size() const { return log_mass.size(); }
};

struct MassClassOptions {
  int exact_depth = 32;
  std::uint64_t cap = kDefaultEnumerationCap;
};

MassClasses mass_classes(const MeasureModel& mu, const ShiftSystem& sys, int length,
                         const MassClassOptions& options = {});

/// Target for the cumulative mass: strict means "> value", otherwise ">= value".
struct Threshold {
  double value = 0.0;
  std::optional<Rational> exact;
  bool strict = false;
};

struct GreedyCount {
  double log_count = 0.0;
  std::optional<BigInt> count;
};

/// Fewest atoms whose total mass meets the threshold (largest atoms first,
/// optimal for disjoint atoms).
GreedyCount greedy_count(const MassClasses& classes, const Threshold& threshold);

}  // namespace mmd
