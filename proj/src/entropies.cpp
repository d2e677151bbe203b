#include "mmd/entropies.hpp"

#include "mmd/errors.hpp"
#include "mmd/extrapolate.hpp"
#include "mmd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace mmd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_schedule(const std::vector<int>& schedule) {
  if (schedule.empty()) fail(ErrorKind::Validation, "n schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1) fail(ErrorKind::Validation, "n schedule entries must be positive");
    if (i > 0 && schedule[i] <= schedule[i - 1]) fail(ErrorKind::Validation, "n schedule must be increasing");
  }
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::Validation, "delta must lie in (0,1)");
}

void require_exact_backend(const ShiftSystem& sys, const char* what) {
  if (!sys.exact_backend())
    fail(ErrorKind::UnsupportedBackend, std::string(what) + " needs the first-difference metric");
}

void require_stationary(const MeasureModel& mu, const char* what) {
  if (mu.kind() == MeasureKind::Empirical)
    fail(ErrorKind::Unsupported, std::string(what) + " is defined for Bernoulli and Markov measures");
}

std::string schedule_text(const std::vector<int>& schedule) {
  std::ostringstream os;
  os << "n=";
  for (std::size_t i = 0; i < schedule.size(); ++i) os << (i ? "," : "") << schedule[i];
  return os.str();
}

// Sup of d(x, y) over pairs agreeing on coordinates |i| < D (one-sided i < D).
double tail_bound(const ShiftSystem& sys, int depth) {
  const double rho = sys.alphabet().max_rho();
  return std::ldexp(rho, (sys.two_sided() ? 2 : 1) - depth);
}

// Smallest D >= 0 whose agreement tail is <= eps (or < eps when strict).
int certified_depth(const ShiftSystem& sys, double eps, bool strict) {
  for (int d = 0; d < 1100; ++d) {
    const double t = tail_bound(sys, d);
    if (strict ? t < eps : t <= eps) return d;
  }
  fail(ErrorKind::Validation, "radius too small");
}

// Length of the window of coordinates fixed by a depth-D agreement at every
// j < n: one-sided [0, n+D-2], two-sided [-D+1, n+D-2].
int window_length(const ShiftSystem& sys, int n, int depth) {
  if (depth == 0) return 0;
  return sys.two_sided() ? n + 2 * depth - 2 : n + depth - 1;
}

int exact_ball_length(const ShiftSystem& sys, int n, double eps) {
  require_non_dyadic(eps);
  return ball_window(n, eps, sys.sidedness()).length;
}

Rational exact_delta(double delta) { return rational_from_double(delta); }

}  // namespace

// --- separated sets -------------------------------------------------------

namespace {

std::uint64_t distinct_point_windows(const LeafSet& z, long base, int length) {
  std::set<Word> seen;
  for (const auto& p : z.point_list()) seen.insert(p.window(base, length));
  return seen.size();
}

CountBounds certified_separated(const ShiftSystem& sys, const LeafSet& z, int n, double eps, std::uint64_t cap) {
  if (z.empty()) return {0, 0};
  if (eps >= sys.diameter()) return {1, 1};
  std::vector<PointRep> candidates;
  std::uint64_t hi = 0;
  if (z.kind() == LeafSet::Kind::Points) {
    candidates = z.point_list();
    hi = candidates.size();
  } else if (z.kind() == LeafSet::Kind::Whole) {
    const int d = certified_depth(sys, eps, false);
    const int len = window_length(sys, n, d);
    hi = sys.count_words(len);
    // representatives: one point per depth-d cylinder, continued periodically
    int rep_depth = d;
    while (rep_depth > 0 && sys.count_words(window_length(sys, n, rep_depth)) > std::min<std::uint64_t>(cap, 4096))
      --rep_depth;
    const int rep_len = window_length(sys, n, rep_depth);
    const long base = sys.two_sided() && rep_depth > 0 ? -(rep_depth - 1) : 0;
    for (const Word& w : enumerate_words(sys, rep_len, cap)) {
      Word rotated(w.size());
      // place w on [base, base + len) of a periodic point
      PointRep p;
      if (base == 0) {
        p.preperiod = w;
        p.period = {w.empty() ? Symbol{0} : w.back()};
        if (!admissible(p, sys)) p.period = w;
      } else {
        const long len = static_cast<long>(w.size());
        for (long i = 0; i < len; ++i) rotated[((i + base) % len + len) % len] = w[i];
        p = PointRep::periodic(rotated);
      }
      if (!p.period.empty() && admissible(p, sys)) candidates.push_back(std::move(p));
    }
  } else {
    fail(ErrorKind::Unsupported, "certified separated counts take the whole space or explicit points");
  }
  std::vector<const PointRep*> kept;
  for (const auto& c : candidates) {
    bool separated = true;
    for (const PointRep* k : kept) {
      if (!(bowen_distance(c, *k, n, sys).lo > eps)) {
        separated = false;
        break;
      }
    }
    if (separated) kept.push_back(&c);
  }
  const std::uint64_t lo = kept.size();
  return {lo, std::max(lo, hi)};
}

}  // namespace

CountBounds separated_count(const ShiftSystem& sys, const LeafSet& z, int n, double eps, std::uint64_t cap) {
  if (n < 1) fail(ErrorKind::Validation, "order must be at least 1");
  if (!sys.exact_backend()) return certified_separated(sys, z, n, eps, cap);
  require_non_dyadic(eps);
  if (z.empty()) return {0, 0};
  const BallWindow w = ball_window(n, eps, sys.sidedness());
  if (w.length == 0) return {1, 1};
  std::uint64_t c = 0;
  if (!sys.two_sided()) {
    c = z.count_prefixes(sys, w.length);
  } else if (z.kind() == LeafSet::Kind::Whole) {
    c = sys.count_words(w.length);
  } else if (z.kind() == LeafSet::Kind::Points) {
    c = distinct_point_windows(z, w.base, w.length);
  } else {
    fail(ErrorKind::Unsupported, "two-sided separated counts take the whole space or explicit points");
  }
  return {c, c};
}

double log_separated_count(const ShiftSystem& sys, const LeafSet& z, int n, double eps) {
  require_exact_backend(sys, "log_separated_count");
  require_non_dyadic(eps);
  if (z.empty()) return kNegInf;
  const BallWindow w = ball_window(n, eps, sys.sidedness());
  if (w.length == 0) return 0.0;
  if (z.kind() == LeafSet::Kind::Whole) return sys.log_count_words(w.length);
  if (z.kind() == LeafSet::Kind::Cylinders && !sys.two_sided() && w.length > z.depth()) {
    if (z.depth() == 0) return sys.log_count_words(w.length);
    double total = kNegInf;
    for (const auto& word : z.words()) total = log_add(total, sys.log_count_extensions(word.back(), w.length - z.depth()));
    return total;
  }
  return std::log(static_cast<double>(separated_count(sys, z, n, eps).lo));
}

EntropyEstimate eps_topological_entropy(const ShiftSystem& sys, const LeafSet& z, double eps,
                                        const std::vector<int>& n_schedule) {
  check_schedule(n_schedule);
  EntropyEstimate est;
  est.quantity = QuantityId::SEP_COUNT_RATE;
  est.eps = eps;
  est.family = schedule_text(n_schedule);
  if (z.empty()) fail(ErrorKind::Validation, "separated counts of the empty set have no growth rate");

  if (sys.exact_backend()) {
    require_non_dyadic(eps);
    for (int n : n_schedule) est.trace.push_back({double(n), log_separated_count(sys, z, n, eps) / n});
    if (sys.is_full() && z.kind() == LeafSet::Kind::Whole) {
      est.value = ball_depth_offset(eps) == 0 ? 0.0 : std::log(static_cast<double>(sys.size()));
      est.mode = EstimateMode::Exact;
      return est;
    }
    const TailSummary s = summarize_tail(est.trace, FiniteSizeBasis::Affine, 4);
    est.value = s.extrapolated;
    est.mode = EstimateMode::Certified;
    return est;
  }

  Trace lo, hi;
  for (int n : n_schedule) {
    const CountBounds b = separated_count(sys, z, n, eps);
    lo.push_back({double(n), std::log(static_cast<double>(b.lo)) / n});
    hi.push_back({double(n), std::log(static_cast<double>(b.hi)) / n});
    est.trace.push_back({double(n), 0.5 * (lo.back().second + hi.back().second)});
  }
  const double a = summarize_tail(lo, FiniteSizeBasis::Affine, 4).extrapolated;
  const double b = summarize_tail(hi, FiniteSizeBasis::Affine, 4).extrapolated;
  est.bounds = Interval{std::min(a, b), std::max(a, b)};
  est.value = 0.5 * (a + b);
  est.mode = EstimateMode::Certified;
  return est;
}

// --- partitions and covers ------------------------------------------------

EntropyEstimate ks_eps_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps, int max_depth,
                               const std::vector<int>& n_schedule) {
  check_schedule(n_schedule);
  require_supported(mu, sys);
  int depth;
  if (sys.exact_backend()) {
    require_non_dyadic(eps);
    depth = ball_depth_offset(eps);
  } else {
    depth = certified_depth(sys, eps, false);
  }
  if (depth > max_depth)
    fail(ErrorKind::Resource, "no cylinder partition of depth <= " + std::to_string(max_depth) + " has diameter <= eps");
  EntropyEstimate est;
  est.quantity = QuantityId::KS_EPS;
  est.eps = eps;
  est.mode = EstimateMode::Exact;
  est.params.depth = depth;
  std::ostringstream fam;
  fam << "cylinder partitions, depth " << depth << ".." << max_depth;
  est.family = fam.str();
  if (depth == 0) {
    for (int n : n_schedule) est.trace.push_back({double(n), 0.0});
    est.value = 0.0;
    return est;
  }
  require_stationary(mu, "KS entropy");
  // h_mu(T, P_D) = h_mu(T) for every depth D >= 1, so the minimum sits at any D
  for (int n : n_schedule) est.trace.push_back({double(n), block_entropy(mu, n + depth - 1) / n});
  est.value = entropy_rate(mu);
  return est;
}

namespace {

void check_cover(const ShiftSystem& sys, const std::vector<Word>& cover, std::uint64_t cap) {
  if (cover.empty()) fail(ErrorKind::Validation, "cover is empty");
  std::size_t deepest = 0;
  for (const auto& w : cover) {
    sys.require_admissible(w);
    deepest = std::max(deepest, w.size());
  }
  std::set<Word> members(cover.begin(), cover.end());
  for_each_word(
      sys, static_cast<int>(deepest),
      [&](const Word& w) {
        for (std::size_t l = 0; l <= w.size(); ++l)
          if (members.count(Word(w.begin(), w.begin() + l))) return;
        fail(ErrorKind::Validation, "cylinder family does not cover the space (misses " + to_string(w) + ")");
      },
      cap);
}

// Members of the n-fold join of the cover, as the words they fix. Every
// member has depth >= 1, so member j pins coordinate j and the constrained
// coordinates form a contiguous window.
std::set<Word> join_words(const ShiftSystem& sys, const std::vector<Word>& cover, int n, std::uint64_t cap) {
  std::set<Word> out;
  Word current;
  std::function<void(int)> rec = [&](int j) {
    if (j == n) {
      out.insert(current);
      if (out.size() > cap) fail(ErrorKind::Resource, "enumeration cap " + std::to_string(cap) + " exceeded");
      return;
    }
    for (const Word& a : cover) {
      const std::size_t old = current.size();
      bool ok = true;
      for (std::size_t i = 0; i < a.size() && ok; ++i) {
        const std::size_t pos = j + i;
        if (pos < current.size()) {
          ok = current[pos] == a[i];
        } else {
          if (!current.empty() && !sys.allowed(current.back(), a[i])) ok = false;
          else current.push_back(a[i]);
        }
      }
      if (ok) rec(j + 1);
      current.resize(old);
    }
  };
  rec(0);
  return out;
}

}  // namespace

GreedyCount shapira_count(const MeasureModel& mu, const ShiftSystem& sys, const std::vector<Word>& cover, int n,
                          double delta, std::uint64_t cap) {
  if (n < 1) fail(ErrorKind::Validation, "order must be at least 1");
  check_delta(delta);
  require_supported(mu, sys);
  check_cover(sys, cover, cap);
  // The empty word (whole space) makes every join trivial.
  for (const auto& w : cover)
    if (w.empty()) return {0.0, BigInt(1)};
  const std::set<Word> joined = join_words(sys, cover, n, cap);
  // keep maximal cylinders: drop words that extend another member
  std::vector<Word> antichain;
  for (const Word& w : joined) {
    if (!antichain.empty()) {
      const Word& prev = antichain.back();
      if (prev.size() <= w.size() && std::equal(prev.begin(), prev.end(), w.begin())) continue;
    }
    antichain.push_back(w);
  }
  MassClasses classes;
  classes.exact = mu.exact();
  for (const Word& w : antichain) {
    const double m = word_mass(mu, w);
    if (m <= 0.0) continue;
    classes.log_mass.push_back(std::log(m));
    classes.log_count.push_back(0.0);
    if (classes.exact) {
      classes.mass.push_back(*word_mass_exact(mu, w));
      classes.count.push_back(1);
    }
  }
  std::vector<std::size_t> order(classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return classes.exact ? classes.mass[a] > classes.mass[b] : classes.log_mass[a] > classes.log_mass[b];
  });
  MassClasses sorted;
  sorted.exact = classes.exact;
  for (std::size_t i : order) {
    sorted.log_mass.push_back(classes.log_mass[i]);
    sorted.log_count.push_back(0.0);
    if (sorted.exact) {
      sorted.mass.push_back(classes.mass[i]);
      sorted.count.push_back(1);
    }
  }
  return greedy_count(sorted, Threshold{delta, exact_delta(delta), false});
}

GreedyCount shapira_count_depth(const MeasureModel& mu, const ShiftSystem& sys, int depth, int n, double delta) {
  if (n < 1 || depth < 0) fail(ErrorKind::Validation, "order must be at least 1 and depth nonnegative");
  check_delta(delta);
  const int length = depth == 0 ? 0 : n + depth - 1;
  const MassClasses classes = mass_classes(mu, sys, length);
  return greedy_count(classes, Threshold{delta, exact_delta(delta), false});
}

EntropyEstimate shapira_eps(const MeasureModel& mu, const ShiftSystem& sys, double eps, double delta,
                            const std::vector<int>& n_schedule, int extra_depths) {
  require_exact_backend(sys, "shapira_eps");
  check_schedule(n_schedule);
  check_delta(delta);
  require_non_dyadic(eps);
  const int k = ball_depth_offset(eps);
  EntropyEstimate best;
  bool have = false;
  for (int depth = k; depth <= k + std::max(0, extra_depths); ++depth) {
    EntropyEstimate est;
    est.quantity = QuantityId::SHAPIRA_EPS;
    est.eps = eps;
    est.params.delta = delta;
    est.params.depth = depth;
    est.mode = EstimateMode::Certified;
    for (int n : n_schedule)
      est.trace.push_back({double(n), shapira_count_depth(mu, sys, depth, n, delta).log_count / n});
    est.value = depth == 0 ? 0.0
                           : summarize_tail(est.trace, FiniteSizeBasis::SqrtAffine,
                                            static_cast<int>(est.trace.size())).extrapolated;
    if (!have || est.value < best.value) {
      best = std::move(est);
      have = true;
    }
    if (depth == 0) break;
  }
  std::ostringstream fam;
  fam << "cylinder covers, depth " << k << ".." << k + std::max(0, extra_depths) << "; " << schedule_text(n_schedule);
  best.family = fam.str();
  return best;
}

// --- Brin-Katok -----------------------------------------------------------

namespace {

// Mass bracket of B_n(x, eps) where x_i = w[i + offset] on the needed window.
Interval ball_mass_word(const MeasureModel& mu, const ShiftSystem& sys, const Word& w, int offset, int n,
                        double eps) {
  auto coord = [&](long i) { return w[static_cast<std::size_t>(i + offset)]; };
  if (sys.exact_backend()) {
    const BallWindow bw = ball_window(n, eps, sys.sidedness());
    Word cyl(bw.length);
    for (int i = 0; i < bw.length; ++i) cyl[i] = coord(bw.base + i);
    const double m = cylinder_mass(mu, {0, cyl});
    return {m, m};
  }
  // inner cylinder: agreement on a window whose tail stays below eps
  const int d = certified_depth(sys, eps, true);
  const int len = window_length(sys, n, d);
  const long base = sys.two_sided() && d > 0 ? -(d - 1) : 0;
  Word cyl(len);
  for (int i = 0; i < len; ++i) cyl[i] = coord(base + i);
  const double lower = cylinder_mass(mu, {0, cyl});
  // outer set: rho(x_j, y_j) < eps at every j < n
  const Alphabet& alpha = sys.alphabet();
  const int m = mu.size();
  double upper = 0.0;
  if (mu.kind() == MeasureKind::Bernoulli) {
    upper = 1.0;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < m; ++a)
        if (alpha.rho(coord(j), a) < eps) s += mu.p()[a];
      upper *= s;
    }
  } else {
    std::vector<double> f(m, 0.0);
    for (int a = 0; a < m; ++a)
      if (alpha.rho(coord(0), a) < eps) f[a] = mu.pi()[a];
    for (int j = 1; j < n; ++j) {
      std::vector<double> g(m, 0.0);
      for (int b = 0; b < m; ++b) {
        if (!(alpha.rho(coord(j), b) < eps)) continue;
        for (int a = 0; a < m; ++a) g[b] += f[a] * mu.transition(a, b);
      }
      f = std::move(g);
    }
    for (double v : f) upper += v;
  }
  return {lower, std::max(lower, upper)};
}

Interval exponent_of(const Interval& mass, int n) {
  auto ex = [n](double m) { return m > 0.0 ? -std::log(m) / n : kInf; };
  return {ex(mass.hi), ex(mass.lo)};
}

int sampling_offset(const ShiftSystem& sys, double eps) {
  if (!sys.two_sided()) return 0;
  const int d = sys.exact_backend() ? ball_depth_offset(eps) : certified_depth(sys, eps, true);
  return d > 0 ? d - 1 : 0;
}

}  // namespace

Interval ball_mass(const MeasureModel& mu, const ShiftSystem& sys, const PointRep& x, int n, double eps) {
  if (n < 1) fail(ErrorKind::Validation, "order must be at least 1");
  require_admissible(x, sys);
  require_supported(mu, sys);
  if (sys.exact_backend()) {
    const CylinderSet c = ball_to_cylinder(x, n, eps, sys);
    if (mu.kind() != MeasureKind::Empirical) {
      const double m = cylinder_mass(mu, {0, c.word});
      return {m, m};
    }
    const double m = cylinder_mass(mu, c);
    return {m, m};
  }
  require_stationary(mu, "certified ball masses");
  const int off = sampling_offset(sys, eps);
  const int d = certified_depth(sys, eps, true);
  const Word w = x.window(-off, window_length(sys, n, std::max(d, 1)) + off + n);
  return ball_mass_word(mu, sys, w, off, n, eps);
}

Interval bk_local_exponent(const MeasureModel& mu, const ShiftSystem& sys, const PointRep& x, int n, double eps) {
  return exponent_of(ball_mass(mu, sys, x, n, eps), n);
}

EntropyEstimate bk_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps, Bound bound,
                           const std::vector<int>& n_schedule, std::optional<SamplingSpec> sampling) {
  check_schedule(n_schedule);
  require_supported(mu, sys);
  require_stationary(mu, "Brin-Katok entropy");
  EntropyEstimate est;
  est.quantity = bound == Bound::Upper ? QuantityId::BK_UPPER : QuantityId::BK_LOWER;
  est.eps = eps;
  est.family = schedule_text(n_schedule);

  if (sys.exact_backend() && !sampling) {
    const int k = ball_depth_offset(eps);
    for (int n : n_schedule) {
      const int len = exact_ball_length(sys, n, eps);
      est.trace.push_back({double(n), block_entropy(mu, len) / n});
    }
    est.value = k == 0 ? 0.0 : entropy_rate(mu);
    est.mode = EstimateMode::Exact;
    return est;
  }
  if (!sampling) fail(ErrorKind::Validation, "Brin-Katok entropy in the weighted-sum metric needs a sampling spec");
  if (sampling->samples < 1) fail(ErrorKind::Validation, "sample count must be positive");
  est.mode = EstimateMode::MonteCarlo;
  est.params.samples = sampling->samples;
  est.params.seed = sampling->seed;
  const int tail = std::min<int>(4, static_cast<int>(n_schedule.size()));
  const int count = static_cast<int>(n_schedule.size());

  if (sys.exact_backend()) {
    const int k = ball_depth_offset(eps);
    require_non_dyadic(eps);
    const int k_eff = k == 0 ? 0 : (sys.two_sided() ? 2 * k - 1 : k);
    const auto rows = kernels::local_exponents_omp(mu, n_schedule, k_eff, sampling->samples, sampling->seed,
                                                   sampling->threads);
    std::vector<double> mean(count, 0.0);
    for (const auto& row : rows)
      for (int i = 0; i < count; ++i) mean[i] += row[i];
    for (int i = 0; i < count; ++i) est.trace.push_back({double(n_schedule[i]), mean[i] / rows.size()});
    // per-sample tail extremes after removing the finite-size term of the mean
    const TailSummary fit = summarize_tail(est.trace, FiniteSizeBasis::Affine, count);
    double acc = 0.0;
    for (const auto& row : rows) {
      double v = bound == Bound::Upper ? -kInf : kInf;
      for (int i = count - tail; i < count; ++i) {
        const double corrected = row[i] - fit.finite_size(n_schedule[i]);
        v = bound == Bound::Upper ? std::max(v, corrected) : std::min(v, corrected);
      }
      acc += v;
    }
    est.value = acc / rows.size();
    return est;
  }

  // weighted-sum metric: per-sample exponent brackets
  const int off = sampling_offset(sys, eps);
  const int d = certified_depth(sys, eps, true);
  const int longest = window_length(sys, n_schedule.back(), std::max(d, 1)) + off + n_schedule.back();
  std::vector<std::vector<Interval>> rows(sampling->samples, std::vector<Interval>(count));
  Trace mean_lo, mean_hi;
  for (int i = 0; i < count; ++i) {
    mean_lo.push_back({double(n_schedule[i]), 0.0});
    mean_hi.push_back({double(n_schedule[i]), 0.0});
  }
  for (int s = 0; s < sampling->samples; ++s) {
    const Word w = sample_orbit(mu, longest, derive_seed(sampling->seed, s));
    for (int i = 0; i < count; ++i) {
      rows[s][i] = exponent_of(ball_mass_word(mu, sys, w, off, n_schedule[i], eps), n_schedule[i]);
      mean_lo[i].second += rows[s][i].lo / sampling->samples;
      mean_hi[i].second += rows[s][i].hi / sampling->samples;
    }
  }
  for (int i = 0; i < count; ++i)
    est.trace.push_back({double(n_schedule[i]), 0.5 * (mean_lo[i].second + mean_hi[i].second)});
  const TailSummary fit_lo = summarize_tail(mean_lo, FiniteSizeBasis::Affine, count);
  const TailSummary fit_hi = summarize_tail(mean_hi, FiniteSizeBasis::Affine, count);
  double acc_lo = 0.0, acc_hi = 0.0;
  for (const auto& row : rows) {
    double lo = bound == Bound::Upper ? -kInf : kInf;
    double hi = lo;
    for (int i = count - tail; i < count; ++i) {
      const double a = row[i].lo - fit_lo.finite_size(n_schedule[i]);
      const double b = row[i].hi - fit_hi.finite_size(n_schedule[i]);
      lo = bound == Bound::Upper ? std::max(lo, a) : std::min(lo, a);
      hi = bound == Bound::Upper ? std::max(hi, b) : std::min(hi, b);
    }
    acc_lo += lo;
    acc_hi += hi;
  }
  est.bounds = Interval{std::min(acc_lo, acc_hi) / sampling->samples, std::max(acc_lo, acc_hi) / sampling->samples};
  est.value = 0.5 * (est.bounds->lo + est.bounds->hi);
  return est;
}

// --- Katok ----------------------------------------------------------------

GreedyCount katok_count(const MeasureModel& mu, const ShiftSystem& sys, int n, double eps, double delta) {
  require_exact_backend(sys, "katok_count");
  if (n < 1) fail(ErrorKind::Validation, "order must be at least 1");
  check_delta(delta);
  const int length = exact_ball_length(sys, n, eps);
  const MassClasses classes = mass_classes(mu, sys, length);
  return greedy_count(classes, Threshold{1.0 - delta, Rational(1) - exact_delta(delta), true});
}

namespace {

// ln R_n / n for each delta (rows) and n (columns), sharing mass classes per n.
std::vector<Trace> katok_traces(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                const std::vector<double>& deltas, const std::vector<int>& n_schedule) {
  require_exact_backend(sys, "Katok entropy");
  check_schedule(n_schedule);
  for (double d : deltas) check_delta(d);
  std::vector<Trace> out(deltas.size());
  for (int n : n_schedule) {
    const MassClasses classes = mass_classes(mu, sys, exact_ball_length(sys, n, eps));
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const GreedyCount g =
          greedy_count(classes, Threshold{1.0 - deltas[i], Rational(1) - exact_delta(deltas[i]), true});
      out[i].push_back({double(n), g.log_count / n});
    }
  }
  return out;
}

EntropyEstimate katok_from_trace(Trace trace, double eps, double delta, Bound bound) {
  EntropyEstimate est;
  est.eps = eps;
  est.params.delta = delta;
  est.mode = EstimateMode::Certified;
  const TailSummary s = summarize_tail(trace, FiniteSizeBasis::SqrtAffine, static_cast<int>(trace.size()));
  est.value = bound == Bound::Upper ? s.upper : s.lower;
  est.trace = std::move(trace);
  return est;
}

}  // namespace

EntropyEstimate katok_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps, double delta, Bound bound,
                              const std::vector<int>& n_schedule) {
  auto traces = katok_traces(mu, sys, eps, {delta}, n_schedule);
  EntropyEstimate est = katok_from_trace(std::move(traces[0]), eps, delta, bound);
  est.quantity = bound == Bound::Upper ? QuantityId::KATOK_UPPER : QuantityId::KATOK_LOWER;
  est.family = schedule_text(n_schedule);
  return est;
}

KatokLimit katok_entropy_lim(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                             const std::vector<double>& delta_grid, Bound bound, const std::vector<int>& n_schedule) {
  if (delta_grid.empty()) fail(ErrorKind::Validation, "delta grid is empty");
  std::vector<double> deltas = delta_grid;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  auto traces = katok_traces(mu, sys, eps, deltas, n_schedule);

  KatokLimit out;
  // finite-n counts must not decrease as delta decreases
  for (std::size_t i = 1; i < traces.size(); ++i)
    for (std::size_t j = 0; j < traces[i].size(); ++j)
      if (traces[i][j].second < traces[i - 1][j].second) out.monotone = false;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    out.sweep.push_back({deltas[i], katok_from_trace(traces[i], eps, deltas[i], bound).value});
  out.estimate = katok_from_trace(std::move(traces.back()), eps, deltas.back(), bound);
  out.estimate.quantity = bound == Bound::Upper ? QuantityId::KATOK_UPPER_LIM : QuantityId::KATOK_LOWER_LIM;
  std::ostringstream fam;
  fam << "delta=";
  for (std::size_t i = 0; i < deltas.size(); ++i) fam << (i ? "," : "") << deltas[i];
  fam << "; " << schedule_text(n_schedule);
  out.estimate.family = fam.str();
  return out;
}

// --- Pfister-Sullivan -----------------------------------------------------

namespace {

double log_binom(long n, long k) {
  if (k < 0 || k > n) return kNegInf;
  return static_cast<double>(std::lgamma(static_cast<long double>(n + 1)) - std::lgamma(static_cast<long double>(k + 1)) -
                             std::lgamma(static_cast<long double>(n - k + 1)));
}

// ln of the number of admissible words of length `prefix` whose first n
// windows pass the filter, counted by type classes instead of enumeration.
// Applies when ell <= 2 and the filtered window fits inside the prefix; for
// three or more symbols only ell = 1 on a full shift with m <= 3.
std::optional<double> ps_log_count_by_types(const ShiftSystem& sys, const kernels::MarginalFilter& f, int n,
                                            int prefix) {
  const int ell = f.ell();
  const int m = sys.size();
  const int filtered = n + ell - 1;
  if (ell > 2 || prefix < filtered) return std::nullopt;
  double total = kNegInf;
  if (m == 2) {
    // binary words of length `filtered` grouped by first symbol, symbol and run counts
    const long L = filtered;
    for (int first = 0; first < 2; ++first) {
      for (long z = 0; z <= L; ++z) {
        const long o = L - z;
        if ((first == 0 && z == 0) || (first == 1 && o == 0)) continue;
        for (long r0 = (z > 0 ? 1 : 0); r0 <= z; ++r0) {
          for (long r1 = std::max(o > 0 ? 1L : 0L, r0 - 1); r1 <= std::min(o, r0 + 1); ++r1) {
            const bool ok = first == 0 ? (r0 == r1 || r0 == r1 + 1) : (r1 == r0 || r1 == r0 + 1);
            if (!ok) continue;
            const long n01 = first == 0 ? r1 : r1 - 1;
            const long n10 = first == 0 ? r0 - 1 : r0;
            const long n00 = z - r0, n11 = o - r1;
            if (n01 < 0 || n10 < 0) continue;
            if ((n00 > 0 && !sys.allowed(0, 0)) || (n01 > 0 && !sys.allowed(0, 1)) ||
                (n10 > 0 && !sys.allowed(1, 0)) || (n11 > 0 && !sys.allowed(1, 1)))
              continue;
            const Symbol last = static_cast<Symbol>(first == 0 ? (r0 == r1 ? 1 : 0) : (r1 == r0 ? 0 : 1));
            // symbol counts over the first n windows
            long c0 = z, c1 = o;
            if (ell == 2) (last == 0 ? c0 : c1) -= 1;
            if (!f.within(c0, n, f.target(1, 0)) || !f.within(c1, n, f.target(1, 1))) continue;
            if (ell == 2 && (!f.within(n00, n, f.target(2, 0)) || !f.within(n01, n, f.target(2, 1)) ||
                             !f.within(n10, n, f.target(2, 2)) || !f.within(n11, n, f.target(2, 3))))
              continue;
            const double words = (z > 0 ? log_binom(z - 1, r0 - 1) : 0.0) + (o > 0 ? log_binom(o - 1, r1 - 1) : 0.0);
            total = log_add(total, words + sys.log_count_extensions(last, prefix - filtered));
          }
        }
      }
    }
    return total;
  }
  if (ell != 1 || !sys.is_full() || m > 3) return std::nullopt;
  std::vector<long> parts(m, 0);
  std::function<void(int, long)> rec = [&](int idx, long left) {
    if (idx == m - 1) {
      parts[idx] = left;
      double lc = static_cast<double>(std::lgamma(static_cast<long double>(n + 1)));
      for (int a = 0; a < m; ++a) {
        if (!f.within(parts[a], n, f.target(1, a))) return;
        lc -= static_cast<double>(std::lgamma(static_cast<long double>(parts[a] + 1)));
      }
      total = log_add(total, lc);
      return;
    }
    for (long c = 0; c <= left; ++c) {
      parts[idx] = c;
      rec(idx + 1, left - c);
    }
  };
  rec(0, n);
  if (total == kNegInf) return total;
  return total + (prefix - n) * std::log(static_cast<double>(m));
}

}  // namespace

EntropyEstimate ps_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps, const NeighbourhoodGrid& grid,
                           const std::vector<int>& n_schedule, int threads) {
  require_exact_backend(sys, "ps_entropy");
  check_schedule(n_schedule);
  require_supported(mu, sys);
  require_non_dyadic(eps);
  if (grid.ells.empty() || grid.etas.empty()) fail(ErrorKind::Validation, "neighbourhood grid is empty");
  const int k = ball_depth_offset(eps);
  const int k_eff = k == 0 ? 0 : (sys.two_sided() ? 2 * k - 1 : k);

  EntropyEstimate best;
  bool have = false;
  std::ostringstream fam;
  fam << "grid ell=";
  for (std::size_t i = 0; i < grid.ells.size(); ++i) fam << (i ? "," : "") << grid.ells[i];
  fam << " eta=";
  for (std::size_t i = 0; i < grid.etas.size(); ++i) fam << (i ? "," : "") << grid.etas[i];
  int empty_cells = 0;
  for (int ell : grid.ells) {
    for (double eta : grid.etas) {
      const kernels::MarginalFilter filter(mu, ell, eta);
      Trace trace;
      bool empty = false;
      for (int n : n_schedule) {
        const int prefix = k_eff == 0 ? 0 : n + k_eff - 1;
        std::optional<double> log_count = ps_log_count_by_types(sys, filter, n, prefix);
        if (!log_count) {
          const int length = std::max(prefix, n + ell - 1);
          if (sys.log_count_words(length) > std::log(static_cast<double>(kDefaultEnumerationCap)))
            fail(ErrorKind::Resource, "word filter at n=" + std::to_string(n) + " exceeds the enumeration cap");
          const std::uint64_t c = kernels::filtered_prefix_count_omp(sys, filter, n, k_eff, threads);
          log_count = c == 0 ? kNegInf : std::log(static_cast<double>(c));
        }
        if (*log_count == kNegInf) {
          empty = true;
          break;
        }
        trace.push_back({double(n), *log_count / n});
      }
      if (empty) {
        ++empty_cells;
        continue;
      }
      const double value =
          summarize_tail(trace, FiniteSizeBasis::SqrtAffine, static_cast<int>(trace.size())).upper;
      if (!have || value < best.value) {
        best.trace = std::move(trace);
        best.value = value;
        best.params.ell = ell;
        best.params.eta = eta;
        have = true;
      }
    }
  }
  if (!have) fail(ErrorKind::EmptyApproximation, "every neighbourhood cell is empty at the scheduled orders");
  best.quantity = QuantityId::PS;
  best.eps = eps;
  best.mode = EstimateMode::Certified;
  fam << "; " << schedule_text(n_schedule);
  if (empty_cells > 0) fam << "; empty cells skipped=" << empty_cells;
  best.family = fam.str();
  return best;
}

// --- return times ---------------------------------------------------------

std::optional<std::uint64_t> return_time(const Word& x, int n, int depth) {
  if (n < 1 || depth < 1) fail(ErrorKind::Validation, "return times need n >= 1 and depth >= 1");
  const std::uint64_t r = kernels::detail::first_return(x, n + depth - 1);
  if (r == 0) return std::nullopt;
  return r;
}

EntropyEstimate ow_return_entropy(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                  const std::vector<int>& n_schedule, const ReturnTimeSpec& spec) {
  check_schedule(n_schedule);
  require_supported(mu, sys);
  require_stationary(mu, "return-time entropy");
  if (spec.samples < 1) fail(ErrorKind::Validation, "sample count must be positive");
  int depth;
  if (sys.exact_backend()) {
    require_non_dyadic(eps);
    depth = std::max(1, ball_depth_offset(eps));
  } else {
    depth = std::max(1, certified_depth(sys, eps, true));
  }
  EntropyEstimate est;
  est.quantity = QuantityId::OW_RETURN;
  est.eps = eps;
  est.mode = EstimateMode::MonteCarlo;
  est.params.samples = spec.samples;
  est.params.seed = spec.seed;
  est.params.depth = depth;
  long missing = 0;
  for (int n : n_schedule) {
    const auto times = kernels::return_times_omp(mu, n, depth, spec.horizon, spec.samples, spec.seed, spec.threads);
    double acc = 0.0;
    long found = 0;
    for (auto r : times) {
      if (r == 0) {
        ++missing;
        continue;
      }
      acc += std::log(static_cast<double>(r));
      ++found;
    }
    if (found == 0) fail(ErrorKind::Resource, "no sampled orbit returned within the horizon");
    est.trace.push_back({double(n), acc / found / n});
  }
  est.value = summarize_tail(est.trace, FiniteSizeBasis::Affine, static_cast<int>(est.trace.size())).extrapolated;
  std::ostringstream fam;
  fam << "cylinder partition depth " << depth << "; " << schedule_text(n_schedule);
  if (missing > 0) fam << "; returns not found=" << missing;
  est.family = fam.str();
  return est;
}

}  // namespace mmd
