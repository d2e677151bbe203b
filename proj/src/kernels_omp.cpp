#include "mmd/errors.hpp"
#include "mmd/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>

namespace mmd::kernels {

namespace {

int thread_count(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

// Incremental window counts for a word grown one symbol at a time. After the
// symbol at position t is pushed, window j = t - ell + 1 is complete at every
// depth d <= ell, so the counts always describe the first `done()` windows.
class WindowState {
 public:
  WindowState(const ShiftSystem& sys, const MarginalFilter& f, int window_limit)
      : sys_(sys), f_(f), limit_(window_limit), counts_(f.ell() + 1) {
    for (int d = 1; d <= f.ell(); ++d) counts_[d].assign(f.codes(d), 0);
  }

  const Word& word() const { return w_; }
  int size() const { return static_cast<int>(w_.size()); }
  int done() const { return std::clamp(size() - f_.ell() + 1, 0, limit_); }

  bool push(Symbol a) {
    if (!w_.empty() && !sys_.allowed(w_.back(), a)) return false;
    w_.push_back(a);
    const int j = size() - f_.ell();
    if (j >= 0 && j < limit_) {
      std::uint32_t code = 0;
      for (int d = 1; d <= f_.ell(); ++d) {
        code = code * static_cast<std::uint32_t>(f_.alphabet_size()) + w_[j + d - 1];
        ++counts_[d][code];
      }
    }
    return true;
  }

  void pop() {
    const int j = size() - f_.ell();
    if (j >= 0 && j < limit_) {
      std::uint32_t code = 0;
      for (int d = 1; d <= f_.ell(); ++d) {
        code = code * static_cast<std::uint32_t>(f_.alphabet_size()) + w_[j + d - 1];
        --counts_[d][code];
      }
    }
    w_.pop_back();
  }

  /// Can the final counts at window count n still pass, given done() windows?
  bool feasible(int n) const {
    const std::uint64_t rem = static_cast<std::uint64_t>(n - done());
    const double tol = f_.eta() + 1e-12;
    for (int d = 1; d <= f_.ell(); ++d) {
      for (std::uint32_t c = 0; c < counts_[d].size(); ++c) {
        const double target = f_.target(d, c);
        if (static_cast<double>(counts_[d][c]) / n - target > tol) return false;
        if (target - static_cast<double>(counts_[d][c] + rem) / n > tol) return false;
      }
    }
    return true;
  }

  /// Exact test of the current counts as a window count of done().
  bool passes_now() const {
    const int n = done();
    for (int d = 1; d <= f_.ell(); ++d)
      for (std::uint32_t c = 0; c < counts_[d].size(); ++c)
        if (!f_.within(counts_[d][c], n, f_.target(d, c))) return false;
    return true;
  }

 private:
  const ShiftSystem& sys_;
  const MarginalFilter& f_;
  int limit_;
  Word w_;
  std::vector<std::vector<std::uint32_t>> counts_;
};

struct PrefixCounter {
  const ShiftSystem& sys;
  int n;
  int prefix;  // length of the counted prefixes
  int filter;  // n + ell - 1

  // Any accepted completion below the current node?
  bool exists(WindowState& s) const {
    if (s.size() == filter) return true;
    for (int a = 0; a < sys.size(); ++a) {
      if (!s.push(static_cast<Symbol>(a))) continue;
      const bool ok = s.feasible(n) && exists(s);
      s.pop();
      if (ok) return true;
    }
    return false;
  }

  std::uint64_t count(WindowState& s) const {
    if (prefix <= filter && s.size() == prefix) return exists(s) ? 1 : 0;
    if (prefix > filter && s.size() == filter) return sys.count_extensions(s.word().back(), prefix - filter);
    std::uint64_t total = 0;
    for (int a = 0; a < sys.size(); ++a) {
      if (!s.push(static_cast<Symbol>(a))) continue;
      if (s.feasible(n)) total += count(s);
      s.pop();
    }
    return total;
  }
};

int split_depth(int m, int limit) {
  int depth = 0;
  std::uint64_t width = 1;
  while (depth < limit && width < 256) {
    width *= static_cast<std::uint64_t>(m);
    ++depth;
  }
  return depth;
}

}  // namespace

std::uint64_t filtered_prefix_count_omp(const ShiftSystem& sys, const MarginalFilter& f, int n, int k, int threads) {
  if (n < 1) fail(ErrorKind::Validation, "order must be at least 1");
  const PrefixCounter counter{sys, n, k == 0 ? 0 : n + k - 1, n + f.ell() - 1};
  const int split = split_depth(sys.size(), std::min(counter.prefix, counter.filter));
  const std::vector<Word> heads = enumerate_words(sys, split);
  std::vector<std::uint64_t> partial(heads.size(), 0);
  const long count = static_cast<long>(heads.size());
#pragma omp parallel for num_threads(thread_count(threads)) schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    WindowState s(sys, f, n);
    bool alive = true;
    for (Symbol a : heads[i]) {
      s.push(a);
      alive = alive && s.feasible(n);
    }
    if (alive) partial[i] = counter.count(s);
  }
  std::uint64_t total = 0;
  for (auto v : partial) total += v;
  return total;
}

namespace {

struct Budget {
  std::atomic<std::uint64_t> used{0};
  std::uint64_t cap = 0;
  bool spent() const { return used.load(std::memory_order_relaxed) > cap; }
};

void collect_generic(WindowState& s, const ShiftSystem& sys, int length, int n0, std::vector<Word>& out,
                     Budget& budget) {
  if (s.size() == length) {
    out.push_back(s.word());
    budget.used.fetch_add(1, std::memory_order_relaxed);
    return;
  }
  for (int a = 0; a < sys.size() && !budget.spent(); ++a) {
    if (!s.push(static_cast<Symbol>(a))) continue;
    if (s.done() < n0 || s.passes_now()) collect_generic(s, sys, length, n0, out, budget);
    s.pop();
  }
}

}  // namespace

std::vector<Word> generic_words_omp(const ShiftSystem& sys, const MarginalFilter& f, int length, int n0,
                                    int threads, std::uint64_t cap) {
  const int nmax = length - f.ell() + 1;
  if (n0 < 1 || n0 > nmax) fail(ErrorKind::Validation, "window-count range is empty");
  const int split = split_depth(sys.size(), length);
  const std::vector<Word> heads = enumerate_words(sys, split);
  std::vector<std::vector<Word>> partial(heads.size());
  const long count = static_cast<long>(heads.size());
  Budget budget;
  budget.cap = cap;
#pragma omp parallel for num_threads(thread_count(threads)) schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    if (budget.spent()) continue;
    WindowState s(sys, f, nmax);
    bool alive = true;
    for (Symbol a : heads[i]) {
      s.push(a);
      alive = alive && (s.done() < n0 || s.passes_now());
    }
    if (alive) collect_generic(s, sys, length, n0, partial[i], budget);
  }
  if (budget.spent())
    fail(ErrorKind::Resource, "generic leaf set of length " + std::to_string(length) + " exceeds the enumeration cap " +
                                  std::to_string(cap));
  std::vector<Word> out;
  for (auto& part : partial)
    for (auto& w : part) out.push_back(std::move(w));
  return out;
}

std::vector<std::uint64_t> return_times_omp(const MeasureModel& mu, int n, int depth, int horizon, int samples,
                                            std::uint64_t seed, int threads) {
  if (n < 1 || depth < 1) fail(ErrorKind::Validation, "return times need n >= 1 and depth >= 1");
  OrbitSampler probe(mu, seed);  // rejects unsupported measures outside the parallel region
  std::vector<std::uint64_t> out(samples, 0);
#pragma omp parallel for num_threads(thread_count(threads)) schedule(dynamic)
  for (int i = 0; i < samples; ++i) {
    out[i] = detail::sampled_return(mu, n + depth - 1, horizon, derive_seed(seed, i));
  }
  return out;
}

std::vector<std::vector<double>> local_exponents_omp(const MeasureModel& mu, const std::vector<int>& orders, int k,
                                                     int samples, std::uint64_t seed, int threads) {
  std::vector<std::vector<double>> out(samples);
#pragma omp parallel for num_threads(thread_count(threads)) schedule(dynamic)
  for (int i = 0; i < samples; ++i) out[i] = detail::local_exponent_row(mu, orders, k, derive_seed(seed, i));
  return out;
}

}  // namespace mmd::kernels
