#pragma once
// Epsilon-entropy functionals on shift systems: separated counts, KS and
// Shapira entropies, Brin-Katok, Katok, Pfister-Sullivan and return times.

#include "mmd/estimate.hpp"
#include "mmd/leafset.hpp"
#include "mmd/mass_classes.hpp"
#include "mmd/measures.hpp"
#include "mmd/symbolic.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mmd {

// --- separated sets -------------------------------------------------------

struct CountBounds {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  bool exact() const { return lo == hi; }
};

/// Maximal cardinality of an (n, eps)-separated subset of Z. Exact backend:
/// distinct coordinate windows. WeightedSum backend: greedy separated set of
/// cylinder representatives (lower) and a count of cylinders of d_n-diameter
/// <= eps (upper).
CountBounds separated_count(const ShiftSystem& sys, const LeafSet& z, int n, double eps,
                            std::uint64_t cap = kDefaultEnumerationCap);
double log_separated_count(const ShiftSystem& sys, const LeafSet& z, int n, double eps);

EntropyEstimate eps_topological_entropy(const ShiftSystem& sys, const LeafSet& z, double eps,
                                        const std::vector<int>& n_schedule);

// --- partitions and covers ------------------------------------------------

/// inf over cylinder partitions of depth in [k(eps), max_depth] of h_mu(T, P).
EntropyEstimate ks_eps_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps, int max_depth = 12,
                               const std::vector<int>& n_schedule = {4, 8, 12, 16});

/// N_mu(U^n, delta): fewest members of the n-fold join with union mass >= delta.
/// `cover` lists one-sided cylinder words, possibly of mixed depths.
GreedyCount shapira_count(const MeasureModel& mu, const ShiftSystem& sys, const std::vector<Word>& cover, int n,
                          double delta, std::uint64_t cap = kDefaultEnumerationCap);
/// Same for the cover by all depth-D cylinders (mass-class fast path).
GreedyCount shapira_count_depth(const MeasureModel& mu, const ShiftSystem& sys, int depth, int n, double delta);

/// inf over depth-D cylinder covers (D in [k(eps), k(eps) + extra_depths]) of
/// the growth rate of N_mu(U^n, delta).
EntropyEstimate shapira_eps(const MeasureModel& mu, const ShiftSystem& sys, double eps, double delta,
                            const std::vector<int>& n_schedule, int extra_depths = 2);

// --- Brin-Katok -----------------------------------------------------------

/// Bracket of mu(B_n(x, eps)): exact in the first-difference backend.
Interval ball_mass(const MeasureModel& mu, const ShiftSystem& sys, const PointRep& x, int n, double eps);

/// -ln mu(B_n(x, eps)) / n as an interval; +infinity for a null ball.
Interval bk_local_exponent(const MeasureModel& mu, const ShiftSystem& sys, const PointRep& x, int n, double eps);

enum class Bound { Upper, Lower };

struct SamplingSpec {
  int samples = 500;
  std::uint64_t seed = 1;
  int threads = 0;
};

/// Exact backend without sampling: closed form. With sampling: Monte Carlo
/// mean of per-sample tail maxima (upper) or minima (lower).
EntropyEstimate bk_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps, Bound bound,
                           const std::vector<int>& n_schedule, std::optional<SamplingSpec> sampling = std::nullopt);

// --- Katok ----------------------------------------------------------------

/// Fewest Bowen (n, eps)-balls with union mass > 1 - delta.
GreedyCount katok_count(const MeasureModel& mu, const ShiftSystem& sys, int n, double eps, double delta);

EntropyEstimate katok_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps, double delta,
                              Bound bound, const std::vector<int>& n_schedule);

struct KatokLimit {
  EntropyEstimate estimate;
  /// (delta, value) for the decreasing delta grid.
  Trace sweep;
  /// Values nondecreasing as delta decreases.
  bool monotone = true;
};

KatokLimit katok_entropy_lim(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                             const std::vector<double>& delta_grid, Bound bound, const std::vector<int>& n_schedule);

// --- Pfister-Sullivan -----------------------------------------------------

struct NeighbourhoodGrid {
  std::vector<int> ells{1, 2};
  std::vector<double> etas{0.1, 0.05, 0.02, 0.01};
};

EntropyEstimate ps_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps, const NeighbourhoodGrid& grid,
                           const std::vector<int>& n_schedule, int threads = 0);

// --- return times ---------------------------------------------------------

/// First j >= 1 where the length-(n + depth - 1) window of x at j repeats the
/// window at 0; nullopt when x is too short to witness a return.
std::optional<std::uint64_t> return_time(const Word& x, int n, int depth);

struct ReturnTimeSpec {
  int samples = 1000;
  std::uint64_t seed = 1;
  int horizon = 1 << 24;
  int threads = 0;
};

/// Mean of ln R_n / n over sampled orbits, extrapolated in 1/n. The partition
/// is the depth-max(1, k(eps)) cylinder partition.
EntropyEstimate ow_return_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                  const std::vector<int>& n_schedule, const ReturnTimeSpec& spec);

}  // namespace mmd
