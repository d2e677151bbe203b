#pragma once
// Bernoulli, Markov and empirical measures on shift spaces.

#include "mmd/rational.hpp"
#include "mmd/symbolic.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace mmd {

enum class MeasureKind { Bernoulli, Markov, Empirical };

class MeasureModel {
 public:
  static MeasureModel bernoulli(std::vector<double> p);
  static MeasureModel bernoulli(std::vector<Rational> p);
  /// `transition` is row-major m x m.
  static MeasureModel markov(std::vector<double> pi, std::vector<double> transition);
  static MeasureModel markov(std::vector<Rational> pi, std::vector<Rational> transition);
  /// Stationary vector solved from the transition matrix.
  static MeasureModel markov_stationary(std::vector<double> transition);
  /// (1/n) sum_{j<n} delta_{T^j w}; cylinder masses count windows inside w.
  static MeasureModel empirical(Word orbit, int n, int alphabet_size);

  MeasureKind kind() const { return kind_; }
  int size() const { return m_; }

  const std::vector<double>& p() const { return p_; }
  const std::vector<double>& pi() const { return pi_; }
  double transition(Symbol a, Symbol b) const { return trans_[a * m_ + b]; }
  const Word& orbit() const { return orbit_; }
  int orbit_length() const { return n_; }

  /// True when every parameter is held as an exact rational.
  bool exact() const { return exact_; }
  const std::vector<Rational>& exact_p() const { return p_exact_; }
  const std::vector<Rational>& exact_pi() const { return pi_exact_; }
  const Rational& exact_transition(Symbol a, Symbol b) const { return trans_exact_[a * m_ + b]; }

  /// Support structure: symbols with positive initial mass and
  /// transitions with positive probability.
  bool positive_symbol(Symbol a) const;
  bool positive_transition(Symbol a, Symbol b) const;

 private:
  MeasureModel() = default;
  void validate() const;

  MeasureKind kind_ = MeasureKind::Bernoulli;
  int m_ = 0;
  std::vector<double> p_;
  std::vector<double> pi_;
  std::vector<double> trans_;
  bool exact_ = false;
  std::vector<Rational> p_exact_;
  std::vector<Rational> pi_exact_;
  std::vector<Rational> trans_exact_;
  Word orbit_;
  int n_ = 0;
};

/// Throws unless the alphabets agree and every positive-mass word of the
/// measure is admissible in the system.
void require_supported(const MeasureModel& mu, const ShiftSystem& sys);

double cylinder_mass(const MeasureModel& mu, const CylinderSet& c);
double word_mass(const MeasureModel& mu, const Word& w);
/// Exact mass when the parameters are rational (always for empirical measures).
std::optional<Rational> cylinder_mass_exact(const MeasureModel& mu, const CylinderSet& c);
std::optional<Rational> word_mass_exact(const MeasureModel& mu, const Word& w);

/// Mass of the continuation `tail` given that the word ends in `last`
/// (Markov: product of transitions; Bernoulli: product of p). Not defined for
/// empirical measures.
double extension_mass(const MeasureModel& mu, Symbol last, const Word& tail);

/// h_mu(T) in nats; unsupported for empirical measures.
double entropy_rate(const MeasureModel& mu);
/// H_mu of the depth-n cylinder partition, closed form.
double block_entropy(const MeasureModel& mu, int n);

struct MarginalDistribution {
  int depth = 0;
  /// Positive-mass words in lexicographic order.
  std::vector<std::pair<Word, double>> mass;

  double at(const Word& w) const;
};

MarginalDistribution marginal(const MeasureModel& mu, int depth,
                              std::uint64_t cap = kDefaultEnumerationCap);

/// max over cylinders of depth <= depth of |mu(C) - nu(C)|.
double marginal_distance(const MeasureModel& mu, const MeasureModel& nu, int depth,
                         std::uint64_t cap = kDefaultEnumerationCap);

/// Independent per-task seed derived from a base seed and a task index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Symbol stream distributed as mu (stationary start for Markov). The first
/// n symbols equal sample_orbit(mu, n, seed).
class OrbitSampler {
 public:
  OrbitSampler(const MeasureModel& mu, std::uint64_t seed);
  Symbol next();

 private:
  const MeasureModel& mu_;
  std::mt19937_64 gen_;
  std::vector<double> rows_;
  bool started_ = false;
  Symbol last_ = 0;
};

/// Word of length n distributed as mu.
Word sample_orbit(const MeasureModel& mu, int n, std::uint64_t seed);

}  // namespace mmd
