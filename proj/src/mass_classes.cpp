#include "mmd/mass_classes.hpp"

#include "mmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace mmd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binomial(long n, long k) {
  if (k < 0 || k > n) return kNegInf;
  return static_cast<double>(std::lgamma(static_cast<long double>(n + 1)) -
                             std::lgamma(static_cast<long double>(k + 1)) -
                             std::lgamma(static_cast<long double>(n - k + 1)));
}

BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

struct Builder {
  MassClasses out;
  bool exact;

  void add(double log_mass, double log_count, Rational mass = 0, BigInt count = 0) {
    if (log_mass == kNegInf || log_count == kNegInf) return;
    out.log_mass.push_back(log_mass);
    out.log_count.push_back(log_count);
    if (exact) {
      out.mass.push_back(std::move(mass));
      out.count.push_back(std::move(count));
    }
  }

  MassClasses finish() {
    out.exact = exact;
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    if (exact) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return out.mass[a] > out.mass[b]; });
    } else {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return out.log_mass[a] > out.log_mass[b]; });
    }
    MassClasses sorted;
    sorted.length = out.length;
    sorted.exact = exact;
    for (std::size_t i : order) {
      sorted.log_mass.push_back(out.log_mass[i]);
      sorted.log_count.push_back(out.log_count[i]);
      if (exact) {
        sorted.mass.push_back(std::move(out.mass[i]));
        sorted.count.push_back(std::move(out.count[i]));
      }
    }
    return sorted;
  }
};

void bernoulli_classes(const MeasureModel& mu, int length, Builder& b) {
  std::vector<int> support;
  for (int a = 0; a < mu.size(); ++a)
    if (mu.p()[a] > 0.0) support.push_back(a);
  const int r = static_cast<int>(support.size());
  std::vector<int> parts(r, 0);
  // enumerate compositions of `length` into r nonnegative parts
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == r - 1) {
      parts[idx] = left;
      double lm = 0.0;
      double lc = static_cast<double>(std::lgamma(static_cast<long double>(length + 1)));
      for (int i = 0; i < r; ++i) {
        lm += parts[i] * std::log(mu.p()[support[i]]);
        lc -= static_cast<double>(std::lgamma(static_cast<long double>(parts[i] + 1)));
      }
      if (b.exact) {
        Rational mass = 1;
        BigInt count = 1;
        int used = 0;
        for (int i = 0; i < r; ++i) {
          mass *= pow(mu.exact_p()[support[i]], static_cast<unsigned>(parts[i]));
          used += parts[i];
          count *= binomial(used, parts[i]);
        }
        b.add(lm, lc, std::move(mass), std::move(count));
      } else {
        b.add(lm, lc);
      }
      return;
    }
    for (int c = left; c >= 0; --c) {
      parts[idx] = c;
      rec(idx + 1, left - c);
    }
  };
  rec(0, length);
}

// Two-symbol Markov words grouped by first symbol, symbol counts and run counts.
void markov2_classes(const MeasureModel& mu, int length, Builder& b) {
  const long L = length;
  for (int f = 0; f < 2; ++f) {
    if (mu.pi()[f] <= 0.0) continue;
    for (long z = 0; z <= L; ++z) {
      const long o = L - z;
      if (f == 0 && z == 0) continue;
      if (f == 1 && o == 0) continue;
      for (long r0 = (z > 0 ? 1 : 0); r0 <= z; ++r0) {
        for (long r1 = (o > 0 ? 1 : 0); r1 <= o; ++r1) {
          // runs alternate starting with f
          const bool ok = f == 0 ? (r0 == r1 || r0 == r1 + 1) : (r1 == r0 || r1 == r0 + 1);
          if (!ok) continue;
          const long n01 = f == 0 ? r1 : r1 - 1;
          const long n10 = f == 0 ? r0 - 1 : r0;
          const long n00 = z - r0;
          const long n11 = o - r1;
          if (n01 < 0 || n10 < 0) continue;
          const double p00 = mu.transition(0, 0), p01 = mu.transition(0, 1);
          const double p10 = mu.transition(1, 0), p11 = mu.transition(1, 1);
          auto term = [](long k, double p) { return k == 0 ? 0.0 : k * safe_log(p); };
          const double lm = safe_log(mu.pi()[f]) + term(n00, p00) + term(n01, p01) + term(n10, p10) + term(n11, p11);
          const double lc = (z > 0 ? log_binomial(z - 1, r0 - 1) : 0.0) + (o > 0 ? log_binomial(o - 1, r1 - 1) : 0.0);
          if (b.exact) {
            Rational mass = mu.exact_pi()[f] * pow(mu.exact_transition(0, 0), n00) * pow(mu.exact_transition(0, 1), n01) *
                            pow(mu.exact_transition(1, 0), n10) * pow(mu.exact_transition(1, 1), n11);
            BigInt count = (z > 0 ? binomial(z - 1, r0 - 1) : BigInt(1)) * (o > 0 ? binomial(o - 1, r1 - 1) : BigInt(1));
            b.add(lm, lc, std::move(mass), std::move(count));
          } else {
            b.add(lm, lc);
          }
        }
      }
    }
  }
}

void enumerated_classes(const MeasureModel& mu, int length, std::uint64_t cap, Builder& b) {
  const auto marg = marginal(mu, length, cap);
  if (b.exact) {
    std::map<Rational, std::uint64_t> groups;
    for (const auto& [w, p] : marg.mass) ++groups[*word_mass_exact(mu, w)];
    for (const auto& [mass, c] : groups)
      b.add(std::log(to_double(mass)), std::log(static_cast<double>(c)), mass, BigInt(c));
  } else {
    std::map<double, std::uint64_t> groups;
    for (const auto& [w, p] : marg.mass) ++groups[p];
    for (const auto& [mass, c] : groups) b.add(std::log(mass), std::log(static_cast<double>(c)));
  }
}

}  // namespace

MassClasses mass_classes(const MeasureModel& mu, const ShiftSystem& sys, int length, const MassClassOptions& options) {
  if (length < 0) fail(ErrorKind::Validation, "negative word length");
  require_supported(mu, sys);
  Builder b;
  b.out.length = length;
  b.exact = mu.exact() && length <= options.exact_depth;
  if (length == 0) {
    b.add(0.0, 0.0, 1, 1);
    return b.finish();
  }
  if (mu.kind() == MeasureKind::Bernoulli) {
    bernoulli_classes(mu, length, b);
  } else if (mu.kind() == MeasureKind::Markov && mu.size() == 2) {
    markov2_classes(mu, length, b);
  } else {
    enumerated_classes(mu, length, options.cap, b);
  }
  return b.finish();
}

namespace {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

BigInt floor_div(const Rational& q) {
  return boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q);
}

}  // namespace

GreedyCount greedy_count(const MassClasses& classes, const Threshold& threshold) {
  const bool exact = classes.exact && threshold.exact.has_value();
  if (exact) {
    const Rational& thr = *threshold.exact;
    Rational cum = 0;
    BigInt total = 0;
    auto reached = [&](const Rational& c) { return threshold.strict ? c > thr : c >= thr; };
    if (reached(cum)) return {kNegInf, BigInt(0)};
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const Rational& mass = classes.mass[i];
      const Rational block = mass * classes.count[i];
      if (reached(cum + block)) {
        const Rational q = (thr - cum) / mass;
        BigInt need = floor_div(q);
        if (threshold.strict || Rational(need) != q) need += 1;
        total += need;
        return {std::log(to_double(Rational(total))), total};
      }
      cum += block;
      total += classes.count[i];
    }
    fail(ErrorKind::Validation, "mass threshold " + to_string(thr) + " cannot be reached");
  }

  // Sums that agree with the threshold to rounding count as equal, so decimal
  // inputs such as 0.64 + 0.16 against 0.8 behave as their exact values do.
  const long double thr = threshold.value;
  const long double slack = 1e-12L * std::max(1.0L, std::fabs(thr));
  long double cum = 0.0L;
  double log_total = kNegInf;
  auto reached = [&](long double c) { return threshold.strict ? c > thr + slack : c >= thr - slack; };
  if (reached(cum)) return {kNegInf, BigInt(0)};
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const long double block = std::exp(static_cast<long double>(classes.log_mass[i]) + classes.log_count[i]);
    if (reached(cum + block)) {
      const long double remaining = thr - cum;
      const double log_need = static_cast<double>(std::log(remaining) - classes.log_mass[i]);
      double log_step;
      if (log_need < 50.0) {
        const long double q = remaining / std::exp(static_cast<long double>(classes.log_mass[i]));
        const long double nearest = std::round(q);
        const bool integral = std::fabs(q - nearest) <= 1e-9L * std::max(1.0L, nearest);
        long double need = std::max(1.0L, integral ? nearest : std::floor(q));
        if (threshold.strict || !integral) need += 1.0L;
        need = std::min(need, std::exp(static_cast<long double>(classes.log_count[i])));
        log_step = static_cast<double>(std::log(need));
      } else {
        log_step = log_need;
      }
      return {log_add(log_total, log_step), std::nullopt};
    }
    cum += block;
    log_total = log_add(log_total, classes.log_count[i]);
  }
  // Rounding left the target a hair out of reach; every atom is needed.
  return {log_total, std::nullopt};
}

}  // namespace mmd
