#pragma once
// Certified rate brackets for full shifts over a finite grid of [0,1] with
// the weighted-sum metric: separated-set growth from block codes (lower) and
// product spanning sets (upper), and the Brin-Katok exponent of the uniform
// Bernoulli measure from coordinate boxes inside and around Bowen balls.

#include "mmd/extrapolate.hpp"
#include "mmd/symbolic.hpp"

#include <cstdint>
#include <vector>

namespace mmd {

/// max_j sum_l w(l - j) rho(u_l, v_l) over positions of the block, with w the
/// metric weights (2^-|t| two-sided, 2^-t for t >= 0 one-sided). A lower bound
/// on d_n for any two points carrying u and v on the same block.
double block_separation(const ShiftSystem& sys, const Word& u, const Word& v);

/// Lexicographic greedy set of length-b words with pairwise block separation > r.
std::vector<Word> greedy_block_code(const ShiftSystem& sys, double r, int block,
                                    std::uint64_t cap = kDefaultEnumerationCap);

/// Smallest subset C of the alphabet with every symbol within distance < c of C.
std::vector<Symbol> symbol_cover(const Alphabet& alphabet, double c);

struct RateBracket {
  /// Bracket on the n -> infinity rate.
  Interval rate;
  /// Finite-n bounds on (1/n) ln of the counted quantity.
  Trace lower_trace;
  Trace upper_trace;
  int block = 1;
  std::size_t code_size = 0;
  std::size_t cover_size = 0;
};

/// (1/n) ln s_n(T, X, d, r) for the grid shift: the best block code over
/// lengths 1..max_block gives s_{qb} >= |C|^q; a spanning set with cover
/// radius below r/(2S) (S the total metric weight) gives the upper bound.
RateBracket separated_rate_bracket(const ShiftSystem& sys, double r, const std::vector<int>& n_schedule,
                                   int max_block = 3, std::uint64_t cap = kDefaultEnumerationCap);

/// -ln mu(B_n(x, eps)) / n integrated over x for the uniform Bernoulli measure:
/// the ball sits inside the box |y_j - x_j| < eps on [0, n) and contains the
/// box |y_i - x_i| < c around it with S c plus the free tail below eps.
RateBracket uniform_bk_bracket(const ShiftSystem& sys, double eps, const std::vector<int>& n_schedule);

}  // namespace mmd
