#pragma once
// Finite-n traces and their extrapolation to n -> infinity.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace mmd {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// (n, value) pairs in increasing n.
using Trace = std::vector<std::pair<double, double>>;

/// Finite-size model fitted to the tail of a trace: v(n) = a + b/n, or
/// v(n) = a + b n^{-1/2} + c/n for counting rates whose leading correction is
/// a square-root (fluctuation) term.
enum class FiniteSizeBasis { Affine, SqrtAffine };

struct TailSummary {
  double extrapolated = 0.0;
  /// max / min over the tail window of each value with its fitted
  /// finite-size terms removed (limsup / liminf surrogates).
  double upper = 0.0;
  double lower = 0.0;
  int points = 0;
  FiniteSizeBasis basis = FiniteSizeBasis::Affine;
  std::vector<double> coef;

  /// Fitted finite-size term at n (the fit minus its constant).
  double finite_size(double n) const;
};

/// Least-squares fit over the last `window` points of the trace.
TailSummary summarize_tail(const Trace& trace, FiniteSizeBasis basis, int window = 4);

}  // namespace mmd
