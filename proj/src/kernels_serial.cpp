#include "mmd/errors.hpp"
#include "mmd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>

namespace mmd::kernels {

namespace {

std::uint32_t code_of(const Word& w, std::size_t from, int depth, int m) {
  std::uint32_t c = 0;
  for (int i = 0; i < depth; ++i) c = c * static_cast<std::uint32_t>(m) + w[from + i];
  return c;
}

}  // namespace

MarginalFilter::MarginalFilter(const MeasureModel& mu, int ell, double eta) : m_(mu.size()), ell_(ell), eta_(eta) {
  if (ell < 1) fail(ErrorKind::Validation, "neighbourhood depth must be at least 1");
  if (!(eta >= 0.0)) fail(ErrorKind::Validation, "neighbourhood radius must be nonnegative");
  double codes = std::pow(static_cast<double>(m_), ell);
  if (codes > (1 << 22)) fail(ErrorKind::Resource, "neighbourhood depth too large for the alphabet");
  targets_.resize(ell + 1);
  targets_[0] = {1.0};
  for (int d = 1; d <= ell; ++d) {
    std::size_t size = 1;
    for (int i = 0; i < d; ++i) size *= static_cast<std::size_t>(m_);
    targets_[d].assign(size, 0.0);
    for (const auto& [w, p] : marginal(mu, d).mass) targets_[d][code_of(w, 0, d, m_)] = p;
  }
}

bool MarginalFilter::within(std::uint64_t count, std::uint64_t n, double target) const {
  return std::abs(static_cast<double>(count) / static_cast<double>(n) - target) <= eta_ + 1e-12;
}

bool MarginalFilter::accepts(const Word& w, int n) const {
  if (static_cast<int>(w.size()) < n + ell_ - 1) fail(ErrorKind::Validation, "word too short for the filter");
  for (int d = 1; d <= ell_; ++d) {
    std::vector<std::uint64_t> counts(targets_[d].size(), 0);
    for (int j = 0; j < n; ++j) ++counts[code_of(w, j, d, m_)];
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (!within(counts[c], n, targets_[d][c])) return false;
  }
  return true;
}

std::uint64_t filtered_prefix_count_serial(const ShiftSystem& sys, const MarginalFilter& f, int n, int k,
                                           std::uint64_t cap) {
  if (n < 1) fail(ErrorKind::Validation, "order must be at least 1");
  const int prefix = k == 0 ? 0 : n + k - 1;
  const int length = std::max(prefix, n + f.ell() - 1);
  std::set<Word> seen;
  for_each_word(
      sys, length,
      [&](const Word& w) {
        if (f.accepts(w, n)) seen.insert(Word(w.begin(), w.begin() + prefix));
      },
      cap);
  return seen.size();
}

std::vector<Word> generic_words_serial(const ShiftSystem& sys, const MarginalFilter& f, int length, int n0,
                                       std::uint64_t cap) {
  const int nmax = length - f.ell() + 1;
  if (n0 < 1 || n0 > nmax) fail(ErrorKind::Validation, "window-count range is empty");
  std::vector<Word> out;
  for_each_word(
      sys, length,
      [&](const Word& w) {
        for (int n = n0; n <= nmax; ++n)
          if (!f.accepts(w, n)) return;
        out.push_back(w);
      },
      cap);
  return out;
}

namespace {

double sum_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

double symbol_count_dp(const ShiftSystem& sys, const MarginalFilter& f, int length, int n0) {
  const int w = length + 1;
  // cnt[last * w + c1] after i symbols
  std::vector<double> cur(2 * w, 0.0), next(2 * w, 0.0);
  cur[0 * w + 0] = 1.0;
  cur[1 * w + 1] = 1.0;
  for (int i = 1;; ++i) {
    if (i >= n0) {
      for (int last = 0; last < 2; ++last)
        for (int c1 = 0; c1 <= i; ++c1)
          if (!f.within(c1, i, f.target(1, 1)) || !f.within(i - c1, i, f.target(1, 0))) cur[last * w + c1] = 0.0;
    }
    if (i == length) return sum_of(cur);
    std::fill(next.begin(), next.end(), 0.0);
    for (int last = 0; last < 2; ++last)
      for (int c1 = 0; c1 <= i; ++c1) {
        const double v = cur[last * w + c1];
        if (v == 0.0) continue;
        for (int b = 0; b < 2; ++b)
          if (sys.allowed(static_cast<Symbol>(last), static_cast<Symbol>(b))) next[b * w + c1 + b] += v;
      }
    std::swap(cur, next);
  }
}

// State after i symbols: (first, last, ones, number of 01 pairs); the other
// pair counts follow from these.
double pair_count_dp(const ShiftSystem& sys, const MarginalFilter& f, int length, int n0) {
  const int w = length + 1;
  const std::size_t plane = static_cast<std::size_t>(w) * w;
  std::vector<double> cur(4 * plane, 0.0), next(4 * plane, 0.0);
  auto at = [&](std::vector<double>& v, int first, int last, int c1, int n01) -> double& {
    return v[(first * 2 + last) * plane + static_cast<std::size_t>(c1) * w + n01];
  };
  at(cur, 0, 0, 0, 0) = 1.0;
  at(cur, 1, 1, 1, 0) = 1.0;
  int c_lo = 0, c_hi = 1, p_lo = 0, p_hi = 0;
  for (int i = 1;; ++i) {
    const int n = i - 1;
    if (n >= n0) {
      for (int first = 0; first < 2; ++first)
        for (int last = 0; last < 2; ++last)
          for (int c1 = c_lo; c1 <= c_hi; ++c1)
            for (int n01 = p_lo; n01 <= p_hi; ++n01) {
              double& v = at(cur, first, last, c1, n01);
              if (v == 0.0) continue;
              const long ones = c1 - last;
              const long n10 = n01 + first - last;
              const long n11 = ones - n10;
              const long n00 = n - n01 - n10 - n11;
              const bool ok = f.within(ones, n, f.target(1, 1)) && f.within(n - ones, n, f.target(1, 0)) &&
                              f.within(n00, n, f.target(2, 0)) && f.within(n01, n, f.target(2, 1)) &&
                              f.within(n10, n, f.target(2, 2)) && f.within(n11, n, f.target(2, 3));
              if (!ok) v = 0.0;
            }
    }
    if (i == length) {
      double acc = 0.0;
      for (int first = 0; first < 2; ++first)
        for (int last = 0; last < 2; ++last)
          for (int c1 = c_lo; c1 <= c_hi; ++c1)
            for (int n01 = p_lo; n01 <= p_hi; ++n01) acc += at(cur, first, last, c1, n01);
      return acc;
    }
    int nc_lo = w, nc_hi = -1, np_lo = w, np_hi = -1;
    for (int first = 0; first < 2; ++first)
      for (int last = 0; last < 2; ++last)
        for (int c1 = c_lo; c1 <= c_hi; ++c1)
          for (int n01 = p_lo; n01 <= p_hi; ++n01) {
            double& slot = at(cur, first, last, c1, n01);
            const double v = slot;
            if (v == 0.0) continue;
            slot = 0.0;
            for (int b = 0; b < 2; ++b) {
              if (!sys.allowed(static_cast<Symbol>(last), static_cast<Symbol>(b))) continue;
              const int c = c1 + b;
              const int p = n01 + (last == 0 && b == 1 ? 1 : 0);
              at(next, first, b, c, p) += v;
              nc_lo = std::min(nc_lo, c);
              nc_hi = std::max(nc_hi, c);
              np_lo = std::min(np_lo, p);
              np_hi = std::max(np_hi, p);
            }
          }
    std::swap(cur, next);
    if (nc_hi < 0) return 0.0;
    c_lo = nc_lo, c_hi = nc_hi, p_lo = np_lo, p_hi = np_hi;
  }
}

}  // namespace

std::optional<double> generic_log_count(const ShiftSystem& sys, const MarginalFilter& f, int length, int n0) {
  if (sys.size() != 2 || f.alphabet_size() != 2 || f.ell() > 2 || length > 1000) return std::nullopt;
  const int nmax = length - f.ell() + 1;
  if (n0 < 1 || n0 > nmax) fail(ErrorKind::Validation, "window-count range is empty");
  const double count = f.ell() == 1 ? symbol_count_dp(sys, f, length, n0) : pair_count_dp(sys, f, length, n0);
  return count > 0.0 ? std::log(count) : -std::numeric_limits<double>::infinity();
}

std::uint64_t detail::first_return(const Word& orbit, int window) {
  const std::size_t len = static_cast<std::size_t>(window);
  for (std::size_t j = 1; j + len <= orbit.size(); ++j)
    if (std::memcmp(orbit.data(), orbit.data() + j, len) == 0) return j;
  return 0;
}

std::uint64_t detail::sampled_return(const MeasureModel& mu, int window, int horizon, std::uint64_t seed) {
  OrbitSampler sampler(mu, seed);
  Word orbit;
  orbit.reserve(static_cast<std::size_t>(window) * 4);
  for (int i = 0; i < window; ++i) orbit.push_back(sampler.next());
  const std::size_t len = static_cast<std::size_t>(window);
  for (std::size_t j = 1; j <= static_cast<std::size_t>(horizon); ++j) {
    orbit.push_back(sampler.next());
    if (std::memcmp(orbit.data(), orbit.data() + j, len) == 0) return j;
  }
  return 0;
}

std::vector<std::uint64_t> return_times_serial(const MeasureModel& mu, int n, int depth, int horizon, int samples,
                                               std::uint64_t seed) {
  if (n < 1 || depth < 1) fail(ErrorKind::Validation, "return times need n >= 1 and depth >= 1");
  std::vector<std::uint64_t> out(samples, 0);
  for (int i = 0; i < samples; ++i) {
    out[i] = detail::sampled_return(mu, n + depth - 1, horizon, derive_seed(seed, i));
  }
  return out;
}

std::vector<double> detail::local_exponent_row(const MeasureModel& mu, const std::vector<int>& orders, int k,
                                               std::uint64_t seed) {
  int longest = 0;
  for (int n : orders) longest = std::max(longest, k == 0 ? 0 : n + k - 1);
  const Word x = sample_orbit(mu, longest, seed);
  // ln mu of every prefix, summed term by term so long words do not underflow.
  std::vector<double> log_mass(longest + 1, 0.0);
  for (int i = 0; i < longest; ++i) {
    const double step = i == 0 ? word_mass(mu, Word{x[0]}) : extension_mass(mu, x[i - 1], Word{x[i]});
    log_mass[i + 1] = log_mass[i] + (step > 0.0 ? std::log(step) : -std::numeric_limits<double>::infinity());
  }
  std::vector<double> row;
  row.reserve(orders.size());
  for (int n : orders) {
    const int len = k == 0 ? 0 : n + k - 1;
    row.push_back(-log_mass[len] / n);
  }
  return row;
}

std::vector<std::vector<double>> local_exponents_serial(const MeasureModel& mu, const std::vector<int>& orders,
                                                        int k, int samples, std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) out.push_back(detail::local_exponent_row(mu, orders, k, derive_seed(seed, i)));
  return out;
}

}  // namespace mmd::kernels
