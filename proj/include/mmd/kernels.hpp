#pragma once
// Enumeration and sampling kernels. Each kernel has a plain serial reference
// (brute force, no pruning) and an OpenMP version (pruned, parallel over word
// prefixes or samples). Both return identical results for every thread count;
// tests compare them and bench/ times them.

#include "mmd/measures.hpp"
#include "mmd/symbolic.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mmd::kernels {

/// Weak*-neighbourhood test F(ell, eta): the empirical depth-d marginals of a
/// word's first n windows are within eta of mu's, for every d <= ell.
class MarginalFilter {
 public:
  MarginalFilter(const MeasureModel& mu, int ell, double eta);

  int ell() const { return ell_; }
  double eta() const { return eta_; }
  int alphabet_size() const { return m_; }
  /// Target mass of the depth-d word with base-m code `code`.
  double target(int depth, std::uint32_t code) const { return targets_[depth][code]; }
  std::uint32_t codes(int depth) const { return static_cast<std::uint32_t>(targets_[depth].size()); }

  /// |count/n - target| <= eta (with a 1e-12 guard against rounding).
  bool within(std::uint64_t count, std::uint64_t n, double target) const;
  /// Direct evaluation on a word holding at least n + ell - 1 symbols.
  bool accepts(const Word& w, int n) const;

 private:
  int m_;
  int ell_;
  double eta_;
  std::vector<std::vector<double>> targets_;
};

/// Number of admissible words u of length n + k - 1 that extend to a word of
/// length n + max(k, ell) - 1 accepted by the filter (first n windows).
std::uint64_t filtered_prefix_count_serial(const ShiftSystem& sys, const MarginalFilter& f, int n, int k,
                                           std::uint64_t cap = kDefaultEnumerationCap);
std::uint64_t filtered_prefix_count_omp(const ShiftSystem& sys, const MarginalFilter& f, int n, int k,
                                        int threads = 0);

/// Admissible words of length L accepted by the filter for every window count
/// n in [n0, L - ell + 1], in lexicographic order.
std::vector<Word> generic_words_serial(const ShiftSystem& sys, const MarginalFilter& f, int length, int n0,
                                       std::uint64_t cap = kDefaultEnumerationCap);
std::vector<Word> generic_words_omp(const ShiftSystem& sys, const MarginalFilter& f, int length, int n0,
                                    int threads = 0, std::uint64_t cap = kDefaultEnumerationCap);

/// ln of the number of words generic_words returns, by dynamic programming
/// over symbol and pair counts (-infinity when there are none). Binary
/// alphabets with ell <= 2 and length <= 1000 only; nullopt otherwise.
std::optional<double> generic_log_count(const ShiftSystem& sys, const MarginalFilter& f, int length, int n0);

/// First return R_n of sampled orbits to their own length-(n + depth - 1)
/// window, searched for j <= horizon; 0 marks "not found". Sample i uses
/// derive_seed(seed, i).
std::vector<std::uint64_t> return_times_serial(const MeasureModel& mu, int n, int depth, int horizon,
                                               int samples, std::uint64_t seed);
std::vector<std::uint64_t> return_times_omp(const MeasureModel& mu, int n, int depth, int horizon, int samples,
                                            std::uint64_t seed, int threads = 0);

/// Local exponents -ln mu([x_0..x_{n+k-2}]) / n for sampled x, one row per
/// sample and one column per order in `orders`.
std::vector<std::vector<double>> local_exponents_serial(const MeasureModel& mu, const std::vector<int>& orders,
                                                        int k, int samples, std::uint64_t seed);
std::vector<std::vector<double>> local_exponents_omp(const MeasureModel& mu, const std::vector<int>& orders, int k,
                                                     int samples, std::uint64_t seed, int threads = 0);

namespace detail {
std::uint64_t first_return(const Word& orbit, int window);
/// Return time of a lazily sampled orbit; j ranges over [1, horizon].
std::uint64_t sampled_return(const MeasureModel& mu, int window, int horizon, std::uint64_t seed);
std::vector<double> local_exponent_row(const MeasureModel& mu, const std::vector<int>& orders, int k,
                                       std::uint64_t seed);
}  // namespace detail

}  // namespace mmd::kernels
