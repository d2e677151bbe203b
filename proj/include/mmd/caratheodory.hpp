#pragma once
// Caratheodory-Pesin weights on cylinder-realisable sets: Bowen covers and
// packings of Z, their measure-constrained versions, critical exponents, the
// 5r disjoint subfamily and leaf-set approximations of generic points.
//
// Everything here runs in the one-sided first-difference backend, where a
// Bowen ball of order n is a cylinder of length n + k(eps) - 1 and covers and
// packings reduce to antichains in the cylinder tree.

#include "mmd/entropies.hpp"
#include "mmd/estimate.hpp"
#include "mmd/leafset.hpp"
#include "mmd/measures.hpp"
#include "mmd/symbolic.hpp"

#include <string>
#include <vector>

namespace mmd {

struct CriticalValue {
  double s_star = 0.0;
  /// Jump bracket at the largest N: weight > theta_high at lo, < theta_low at hi.
  Interval bracket;
  std::vector<int> n_schedule;
  /// (N, crossing of the unit threshold) for every N.
  Trace trace;
  /// False when some weight came from the greedy cover heuristic.
  bool exact = true;
  std::string family;
};

struct CriticalSpec {
  std::vector<int> n_schedule{64, 256, 1024, 10000};
  /// Orders range over [N, N + span].
  int span = 0;
  double tol = 1e-5;
  double theta_low = 0.01;
  double theta_high = 100.0;
};

/// ln M(T, d, Z, s, N, eps) over covers by balls of orders in [N, N_max].
double log_bowen_weight(const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps);
double bowen_weight(const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps);

/// ln P(T, d, Z, s, N, eps) over disjoint closed balls centred in Z.
double log_packing_weight(const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps);
double packing_weight(const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps);

CriticalValue bowen_critical(const ShiftSystem& sys, const LeafSet& z, double eps, const CriticalSpec& spec = {});
CriticalValue packing_critical(const ShiftSystem& sys, const LeafSet& z, double eps, const CriticalSpec& spec = {});

/// Sum of packing weights over a finite decomposition of Z.
double packing_modified(const ShiftSystem& sys, const std::vector<LeafSet>& pieces, double s, int n, int n_max,
                        double eps);
CriticalValue packing_modified_critical(const ShiftSystem& sys, const std::vector<LeafSet>& pieces, double eps,
                                        const CriticalSpec& spec = {});

// --- measure versions -----------------------------------------------------

struct CoverWeight {
  double weight = 0.0;
  /// False when the exhaustive search was out of reach and the value is the
  /// best single-depth greedy cover (an upper bound).
  bool exact = true;
};

struct KatokCoverOptions {
  /// Exhaustive antichain search when N_max + k - 1 is at most this depth.
  int exhaustive_depth = 10;
  std::size_t frontier_cap = 1u << 18;
};

/// M^delta(T, d, mu, s, N, eps): least weight of a ball family of orders in
/// [N, N_max] with union mass > 1 - delta.
CoverWeight katok_cp_cover(const MeasureModel& mu, const ShiftSystem& sys, double s, int n, int n_max, double eps,
                           double delta, const KatokCoverOptions& options = {});

CriticalValue katok_cp_critical(const MeasureModel& mu, const ShiftSystem& sys, double eps, double delta,
                                const CriticalSpec& spec = {});

/// Limit over a decreasing delta grid; the value at the smallest delta.
struct MeasureCritical {
  CriticalValue critical;
  /// (delta, s_star) in the order of the grid.
  Trace sweep;
  bool monotone = true;
};

MeasureCritical katok_cp_limit(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                               const std::vector<double>& delta_grid, const CriticalSpec& spec = {});

/// P^delta(T, d, mu, s, eps) at order window [N, N_max]: least sum of packing
/// weights over decompositions into cylinders of depth N + k - 1 whose union
/// has mass > 1 - delta.
CoverWeight packing_cp_measure(const MeasureModel& mu, const ShiftSystem& sys, double s, int n, int n_max,
                               double eps, double delta);

CriticalValue packing_cp_critical(const MeasureModel& mu, const ShiftSystem& sys, double eps, double delta,
                                  const CriticalSpec& spec = {});

MeasureCritical packing_cp_limit(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                 const std::vector<double>& delta_grid, const CriticalSpec& spec = {});

// --- 5r covering ----------------------------------------------------------

/// Greedy disjoint subfamily: balls are visited largest first (smallest order,
/// then input order) and kept when disjoint from everything kept so far.
std::vector<BowenBall> five_r_disjointify(const std::vector<BowenBall>& balls, const ShiftSystem& sys);

// --- generic points -------------------------------------------------------

/// Depth-L words whose empirical depth-<=ell marginals stay within eta of
/// mu's for every window count n in [n0, L - ell + 1].
LeafSet generic_leafset(const MeasureModel& mu, const ShiftSystem& sys, int length, int ell, double eta, int n0,
                        int threads = 0);

struct GenericGrid {
  std::vector<int> ells{1, 2};
  std::vector<double> etas{0.1, 0.05, 0.02};
  /// Enumerated leaf sets.
  std::vector<int> lengths{16, 18, 20, 22, 24};
  /// Counted leaf sets (binary alphabets, ell <= 2).
  std::vector<int> count_lengths{200, 400, 800};
  /// The first constrained window count is max(n0, ceil(1/eta)).
  int n0 = 12;
};

/// h^P_top(T, G_mu, d, eps) surrogate: per (ell, eta) cell, the packing
/// critical value of the generic leaf set at the deepest order it resolves,
/// extrapolated over the length grid; the minimum over cells. On binary
/// alphabets the leaf sets are counted instead of listed, and the critical
/// value of a depth-L cylinder set at order L - k + 1 is ln|Z| / (L - k + 1).
/// Cells whose rate falls with L (the set stops growing) are skipped.
EntropyEstimate packing_entropy_generic(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                        const GenericGrid& grid = {}, int threads = 0);

}  // namespace mmd
