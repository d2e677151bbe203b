#pragma once
//===----------------------------------------------------------------------===//
// Shift systems, sequence metrics, cylinders and Bowen balls.
//
// Two metric backends are provided. FirstDifference, d(x,y) = 2^-D with D the
// smallest |index| of disagreement, is an ultrametric in which every Bowen
// ball is a cylinder; all downstream quantities reduce to word combinatorics.
// WeightedSum, d(x,y) = sum_n 2^-|n| rho(x_n, y_n), is evaluated exactly on
// eventually periodic points and as a certified interval on cylinder data.
//===----------------------------------------------------------------------===//

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mmd {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

std::string to_string(const Word& w);
Word parse_word(const std::string& digits);

enum class SymbolMetric { Discrete, Euclidean };

class Alphabet {
 public:
  Alphabet(std::vector<double> values, SymbolMetric metric);

  /// m equally spaced values k/(m-1) in [0,1] (m = 1 gives {0}).
  static Alphabet uniform_grid(int m, SymbolMetric metric = SymbolMetric::Euclidean);

  int size() const { return static_cast<int>(values_.size()); }
  double value(Symbol a) const { return values_[a]; }
  const std::vector<double>& values() const { return values_; }
  SymbolMetric metric() const { return metric_; }

  double rho(Symbol a, Symbol b) const;
  double max_rho() const;

 private:
  std::vector<double> values_;
  SymbolMetric metric_;
};

/// Row-major 0/1 matrix; entry (a,b) allows the transition a -> b.
class TransitionMatrix {
 public:
  TransitionMatrix(int m, std::vector<std::uint8_t> entries);
  static TransitionMatrix golden_mean();

  int size() const { return m_; }
  bool allowed(Symbol a, Symbol b) const { return entries_[a * m_ + b] != 0; }
  const std::vector<std::uint8_t>& entries() const { return entries_; }

 private:
  int m_;
  std::vector<std::uint8_t> entries_;
};

enum class Sidedness { OneSided, TwoSided };
enum class MetricKind { FirstDifference, WeightedSum };

struct SequenceMetric {
  MetricKind kind = MetricKind::FirstDifference;
  int window = 40;  ///< truncation window W, WeightedSum only
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool exact() const { return lo == hi; }
  double width() const { return hi - lo; }
};

/// Certified comparison outcome; Unknown only arises from interval data.
enum class Tri { No, Yes, Unknown };

/// The computable stand-in for (X, T, d): a full shift or a subshift of finite
/// type over a finite alphabet embedded in [0,1], with the left shift as T.
class ShiftSystem {
 public:
  ShiftSystem(Alphabet alphabet, std::optional<TransitionMatrix> sft, Sidedness sidedness,
              SequenceMetric metric);

  static ShiftSystem full(int m, Sidedness sidedness = Sidedness::OneSided,
                          SequenceMetric metric = {});
  static ShiftSystem golden_mean(Sidedness sidedness = Sidedness::OneSided);

  const Alphabet& alphabet() const { return alphabet_; }
  int size() const { return alphabet_.size(); }
  Sidedness sidedness() const { return sidedness_; }
  bool two_sided() const { return sidedness_ == Sidedness::TwoSided; }
  const SequenceMetric& metric() const { return metric_; }
  bool exact_backend() const { return metric_.kind == MetricKind::FirstDifference; }
  bool is_full() const { return !sft_.has_value(); }
  const std::optional<TransitionMatrix>& transitions() const { return sft_; }

  bool allowed(Symbol a, Symbol b) const { return !sft_ || sft_->allowed(a, b); }
  bool admissible(const Word& w) const;
  void require_admissible(const Word& w) const;

  /// Number of admissible words of length L (transfer-matrix count). Throws a
  /// resource error when the count does not fit in 64 bits.
  std::uint64_t count_words(int length) const;
  double log_count_words(int length) const;
  /// Admissible continuations of `extra` further symbols after `last`.
  std::uint64_t count_extensions(Symbol last, int extra) const;
  double log_count_extensions(Symbol last, int extra) const;
  /// log of the spectral radius of the transition matrix (ln m for full shifts).
  double log_spectral_radius() const;

  /// Upper bound on the diameter of X under the configured metric.
  double diameter() const;

 private:
  Alphabet alphabet_;
  std::optional<TransitionMatrix> sft_;
  Sidedness sidedness_;
  SequenceMetric metric_;
};

/// An eventually periodic sequence: preperiod followed by period repeated
/// forever. Two-sided points continue to the left periodically with
/// x_i = period[i mod p] for i < 0.
struct PointRep {
  Word preperiod;
  Word period;

  static PointRep periodic(Word period) { return {{}, std::move(period)}; }
  static PointRep constant(Symbol a) { return {{}, {a}}; }

  Symbol at(long i) const;
  /// Word x_from ... x_{from+len-1}.
  Word window(long from, long length) const;
  bool operator==(const PointRep&) const = default;
};

void require_admissible(const PointRep& x, const ShiftSystem& sys);
bool admissible(const PointRep& x, const ShiftSystem& sys);

/// d(T^shift x, T^shift y); exact for eventually periodic points.
Interval distance(const PointRep& x, const PointRep& y, const ShiftSystem& sys, long shift = 0);

/// d_n(x,y) = max_{0<=j<n} d(T^j x, T^j y).
Interval bowen_distance(const PointRep& x, const PointRep& y, int n, const ShiftSystem& sys);

/// Smallest j >= 0 with 2^-j < eps. First-difference balls of radius eps
/// constrain a window of k(eps) coordinates around each visited position.
int ball_depth_offset(double eps);

/// True when eps is exactly an integer power of two.
bool is_dyadic(double eps);
void require_non_dyadic(double eps);

/// Cylinder {x : x_{base+i} = word[i]}.
struct CylinderSet {
  long base = 0;
  Word word;

  int depth() const { return static_cast<int>(word.size()); }
  bool contains(const PointRep& x) const;
  bool operator==(const CylinderSet&) const = default;
};

/// Coordinate window fixed by the open Bowen ball B_n(x, eps) in the exact
/// backend: one-sided [0, n+k-2], two-sided [-k+1, n+k-2]; empty when k = 0.
struct BallWindow {
  long base = 0;
  int length = 0;
};
BallWindow ball_window(int n, double eps, Sidedness sidedness);

/// Exact-backend reduction of B_n(center, eps) to a cylinder.
CylinderSet ball_to_cylinder(const PointRep& center, int n, double eps, const ShiftSystem& sys);
/// One-sided convenience: `center` must cover the ball window.
CylinderSet ball_to_cylinder(const Word& center, int n, double eps, const ShiftSystem& sys);

struct BowenBall {
  PointRep center;
  int n = 1;
  double eps = 0.5;
  bool closed = false;
};

/// Definitional membership y in B_n(x, eps) (d_n < eps, or <= eps if closed).
Tri in_ball(const BowenBall& ball, const PointRep& y, const ShiftSystem& sys);

/// Interval bracketing d(x,y) for every x in a, y in b. Coordinates at |n| >= W
/// are treated as unknown and contribute to the tail bound.
Interval cylinder_distance(const CylinderSet& a, const CylinderSet& b, const ShiftSystem& sys);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Visits every admissible word of length L once, in lexicographic order.
void for_each_word(const ShiftSystem& sys, int length, const std::function<void(const Word&)>& visit,
                   std::uint64_t cap = kDefaultEnumerationCap);
std::vector<Word> enumerate_words(const ShiftSystem& sys, int length,
                                  std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace mmd
