#include "mmd/symbolic.hpp"

#include "mmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mmd {

std::string to_string(const Word& w) {
  const bool compact = std::all_of(w.begin(), w.end(), [](Symbol a) { return a < 10; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += '.';
    out += std::to_string(static_cast<int>(w[i]));
  }
  return out;
}

Word parse_word(const std::string& digits) {
  Word w;
  if (digits.find('.') != std::string::npos) {
    std::stringstream ss(digits);
    std::string part;
    while (std::getline(ss, part, '.')) {
      const int v = std::stoi(part);
      if (v < 0 || v > 255) fail(ErrorKind::Validation, "symbol out of range in '" + digits + "'");
      w.push_back(static_cast<Symbol>(v));
    }
    return w;
  }
  for (char c : digits) {
    if (c < '0' || c > '9') fail(ErrorKind::Validation, "malformed word '" + digits + "'");
    w.push_back(static_cast<Symbol>(c - '0'));
  }
  return w;
}

// --- Alphabet -------------------------------------------------------------

Alphabet::Alphabet(std::vector<double> values, SymbolMetric metric)
    : values_(std::move(values)), metric_(metric) {
  if (values_.empty()) fail(ErrorKind::Validation, "alphabet must have at least one symbol");
  if (values_.size() > 256) fail(ErrorKind::Validation, "alphabet larger than 256 symbols");
  if (values_.front() < 0.0 || values_.back() > 1.0)
    fail(ErrorKind::Validation, "alphabet values must lie in [0,1]");
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (!(values_[i - 1] < values_[i]))
      fail(ErrorKind::Validation, "alphabet values must be strictly increasing");
}

Alphabet Alphabet::uniform_grid(int m, SymbolMetric metric) {
  if (m < 1) fail(ErrorKind::Validation, "alphabet size must be positive");
  std::vector<double> v(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) v[i] = m == 1 ? 0.0 : static_cast<double>(i) / (m - 1);
  return Alphabet(std::move(v), metric);
}

double Alphabet::rho(Symbol a, Symbol b) const {
  if (metric_ == SymbolMetric::Discrete) return a == b ? 0.0 : 1.0;
  return std::abs(values_[a] - values_[b]);
}

double Alphabet::max_rho() const {
  if (size() == 1) return 0.0;
  return metric_ == SymbolMetric::Discrete ? 1.0 : values_.back() - values_.front();
}

// --- TransitionMatrix -----------------------------------------------------

TransitionMatrix::TransitionMatrix(int m, std::vector<std::uint8_t> entries)
    : m_(m), entries_(std::move(entries)) {
  if (m < 1 || entries_.size() != static_cast<std::size_t>(m) * m)
    fail(ErrorKind::Validation, "transition matrix must be m x m");
  for (auto& e : entries_) {
    if (e > 1) fail(ErrorKind::Validation, "transition matrix entries must be 0 or 1");
  }
  for (int a = 0; a < m; ++a) {
    bool row = false;
    bool col = false;
    for (int b = 0; b < m; ++b) {
      row = row || entries_[a * m + b];
      col = col || entries_[b * m + a];
    }
    if (!row || !col)
      fail(ErrorKind::Validation,
           "transition matrix needs a 1 in every row and column (symbol " + std::to_string(a) + ")");
  }
}

TransitionMatrix TransitionMatrix::golden_mean() { return TransitionMatrix(2, {1, 1, 1, 0}); }

// --- ShiftSystem ----------------------------------------------------------

ShiftSystem::ShiftSystem(Alphabet alphabet, std::optional<TransitionMatrix> sft, Sidedness sidedness,
                         SequenceMetric metric)
    : alphabet_(std::move(alphabet)), sft_(std::move(sft)), sidedness_(sidedness), metric_(metric) {
  if (sft_ && sft_->size() != alphabet_.size())
    fail(ErrorKind::Validation, "transition matrix size differs from alphabet size");
  if (metric_.window < 1) fail(ErrorKind::Validation, "truncation window must be positive");
}

ShiftSystem ShiftSystem::full(int m, Sidedness sidedness, SequenceMetric metric) {
  return ShiftSystem(Alphabet::uniform_grid(m, SymbolMetric::Discrete), std::nullopt, sidedness, metric);
}

ShiftSystem ShiftSystem::golden_mean(Sidedness sidedness) {
  return ShiftSystem(Alphabet::uniform_grid(2, SymbolMetric::Discrete), TransitionMatrix::golden_mean(),
                     sidedness, {});
}

bool ShiftSystem::admissible(const Word& w) const {
  for (Symbol a : w)
    if (a >= size()) return false;
  if (!sft_) return true;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!sft_->allowed(w[i - 1], w[i])) return false;
  return true;
}

void ShiftSystem::require_admissible(const Word& w) const {
  if (!admissible(w)) fail(ErrorKind::Admissibility, "word '" + to_string(w) + "' is not admissible");
}

namespace {

// Counts per terminal symbol after `steps` further symbols.
template <typename T>
std::vector<T> step_counts(const ShiftSystem& sys, std::vector<T> counts, int steps, bool check_overflow) {
  const int m = sys.size();
  for (int s = 0; s < steps; ++s) {
    std::vector<T> next(m, T{0});
    for (int a = 0; a < m; ++a) {
      if (counts[a] == T{0}) continue;
      for (int b = 0; b < m; ++b) {
        if (!sys.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b))) continue;
        if constexpr (std::is_integral_v<T>) {
          if (check_overflow && next[b] > std::numeric_limits<T>::max() - counts[a])
            fail(ErrorKind::Resource, "word count exceeds 64-bit range");
        }
        next[b] += counts[a];
      }
    }
    counts = std::move(next);
  }
  return counts;
}

std::uint64_t sum_checked(const std::vector<std::uint64_t>& v) {
  std::uint64_t total = 0;
  for (auto x : v) {
    if (total > std::numeric_limits<std::uint64_t>::max() - x)
      fail(ErrorKind::Resource, "word count exceeds 64-bit range");
    total += x;
  }
  return total;
}

// log-domain counting with periodic renormalisation
double log_steps(const ShiftSystem& sys, std::vector<long double> counts, int steps) {
  long double log_scale = 0.0L;
  const int m = sys.size();
  for (int s = 0; s < steps; ++s) {
    std::vector<long double> next(m, 0.0L);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        if (sys.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b))) next[b] += counts[a];
    const long double mx = *std::max_element(next.begin(), next.end());
    if (mx <= 0.0L) return -std::numeric_limits<double>::infinity();
    for (auto& x : next) x /= mx;
    log_scale += std::log(mx);
    counts = std::move(next);
  }
  long double total = 0.0L;
  for (auto x : counts) total += x;
  return static_cast<double>(log_scale + std::log(total));
}

}  // namespace

std::uint64_t ShiftSystem::count_words(int length) const {
  if (length < 0) fail(ErrorKind::Validation, "negative word length");
  if (length == 0) return 1;
  std::vector<std::uint64_t> counts(size(), 1);
  return sum_checked(step_counts(*this, std::move(counts), length - 1, true));
}

double ShiftSystem::log_count_words(int length) const {
  if (length < 0) fail(ErrorKind::Validation, "negative word length");
  if (length == 0) return 0.0;
  if (is_full()) return length * std::log(static_cast<double>(size()));
  return log_steps(*this, std::vector<long double>(size(), 1.0L), length - 1);
}

std::uint64_t ShiftSystem::count_extensions(Symbol last, int extra) const {
  if (extra <= 0) return 1;
  std::vector<std::uint64_t> counts(size(), 0);
  counts[last] = 1;
  return sum_checked(step_counts(*this, std::move(counts), extra, true));
}

double ShiftSystem::log_count_extensions(Symbol last, int extra) const {
  if (extra <= 0) return 0.0;
  if (is_full()) return extra * std::log(static_cast<double>(size()));
  std::vector<long double> counts(size(), 0.0L);
  counts[last] = 1.0L;
  return log_steps(*this, std::move(counts), extra);
}

double ShiftSystem::log_spectral_radius() const {
  if (is_full()) return std::log(static_cast<double>(size()));
  constexpr int kShort = 2000;
  constexpr int kLong = 4000;
  return (log_count_words(kLong) - log_count_words(kShort)) / (kLong - kShort);
}

double ShiftSystem::diameter() const {
  if (size() == 1) return 0.0;
  if (exact_backend()) return 1.0;
  return alphabet_.max_rho() * (two_sided() ? 3.0 : 2.0);
}

// --- PointRep -------------------------------------------------------------

Symbol PointRep::at(long i) const {
  const long p = static_cast<long>(period.size());
  if (i < 0) return period[static_cast<std::size_t>(((i % p) + p) % p)];
  const long a = static_cast<long>(preperiod.size());
  if (i < a) return preperiod[static_cast<std::size_t>(i)];
  return period[static_cast<std::size_t>((i - a) % p)];
}

Word PointRep::window(long from, long length) const {
  Word w(static_cast<std::size_t>(std::max(0L, length)));
  for (long i = 0; i < length; ++i) w[static_cast<std::size_t>(i)] = at(from + i);
  return w;
}

bool admissible(const PointRep& x, const ShiftSystem& sys) {
  if (x.period.empty()) return false;
  if (!sys.admissible(x.preperiod) || !sys.admissible(x.period)) return false;
  if (!x.preperiod.empty() && !sys.allowed(x.preperiod.back(), x.period.front())) return false;
  if (!sys.allowed(x.period.back(), x.period.front())) return false;
  if (sys.two_sided() && !x.preperiod.empty() && !sys.allowed(x.period.back(), x.preperiod.front()))
    return false;
  return true;
}

void require_admissible(const PointRep& x, const ShiftSystem& sys) {
  if (x.period.empty()) fail(ErrorKind::Admissibility, "point has an empty period");
  if (!admissible(x, sys))
    fail(ErrorKind::Admissibility,
         "point " + to_string(x.preperiod) + "(" + to_string(x.period) + ") is not admissible");
}

// --- distances ------------------------------------------------------------

namespace {

constexpr long kMaxScan = 1L << 24;
// 2^-1100 underflows to zero in double; weighted sums need no more terms.
constexpr long kWeightedTerms = 1100;

// g(t) for t >= 0 is irregular on [0, irregular) and L-periodic afterwards.
struct Series {
  long irregular;
  long period;
};

long first_nonzero(const Series& s, const std::function<double(long)>& g) {
  const long span = s.irregular + s.period;
  if (span > kMaxScan) fail(ErrorKind::Resource, "period combination too long to compare exactly");
  for (long t = 0; t < span; ++t)
    if (g(t) != 0.0) return t;
  return -1;
}

double weighted_sum(const Series& s, const std::function<double(long)>& g) {
  double head = 0.0;
  double w = 1.0;
  const long a = std::min(s.irregular, kWeightedTerms);
  for (long t = 0; t < a; ++t, w *= 0.5) head += w * g(t);
  if (s.irregular >= kWeightedTerms) return head;
  double cycle = 0.0;
  double wc = 1.0;
  const long l = std::min(s.period, kWeightedTerms);
  for (long u = 0; u < l; ++u, wc *= 0.5) cycle += wc * g(s.irregular + u);
  const double geometric = s.period >= kWeightedTerms ? 1.0 : 1.0 / (1.0 - std::ldexp(1.0, -static_cast<int>(s.period)));
  return head + std::ldexp(1.0, -static_cast<int>(a)) * cycle * geometric;
}

}  // namespace

Interval distance(const PointRep& x, const PointRep& y, const ShiftSystem& sys, long shift) {
  const Alphabet& alpha = sys.alphabet();
  const long px = static_cast<long>(x.period.size());
  const long py = static_cast<long>(y.period.size());
  if (px == 0 || py == 0) fail(ErrorKind::Admissibility, "point has an empty period");
  const long lcm = std::lcm(px, py);
  const long pre = static_cast<long>(std::max(x.preperiod.size(), y.preperiod.size()));

  auto right = [&](long t) { return alpha.rho(x.at(shift + t), y.at(shift + t)); };
  auto left = [&](long t) { return alpha.rho(x.at(shift - 1 - t), y.at(shift - 1 - t)); };
  const Series rs{std::max(0L, pre - shift), lcm};
  const Series ls{std::max(0L, shift), lcm};

  if (sys.exact_backend()) {
    long d = first_nonzero(rs, right);
    if (sys.two_sided()) {
      const long dl = first_nonzero(ls, left);
      if (dl >= 0 && (d < 0 || dl + 1 < d)) d = dl + 1;
    }
    const double v = d < 0 ? 0.0 : std::ldexp(1.0, -static_cast<int>(std::min(d, 1100L)));
    return {v, v};
  }
  double v = weighted_sum(rs, right);
  if (sys.two_sided()) v += 0.5 * weighted_sum(ls, left);
  return {v, v};
}

Interval bowen_distance(const PointRep& x, const PointRep& y, int n, const ShiftSystem& sys) {
  if (n < 1) fail(ErrorKind::Validation, "Bowen order must be at least 1");
  require_admissible(x, sys);
  require_admissible(y, sys);
  Interval out{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const Interval d = distance(x, y, sys, j);
    out.lo = std::max(out.lo, d.lo);
    out.hi = std::max(out.hi, d.hi);
  }
  return out;
}

// --- radii and balls ------------------------------------------------------

int ball_depth_offset(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorKind::Validation, "radius must be positive and finite");
  int k = 0;
  while (std::ldexp(1.0, -k) >= eps) {
    ++k;
    if (k > 1100) fail(ErrorKind::Validation, "radius too small");
  }
  return k;
}

bool is_dyadic(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) return false;
  int e = 0;
  return std::frexp(eps, &e) == 0.5;
}

void require_non_dyadic(double eps) {
  if (is_dyadic(eps)) {
    std::ostringstream os;
    os << "radius " << eps << " is an exact power of two; perturb it";
    fail(ErrorKind::RejectedRadius, os.str());
  }
}

BallWindow ball_window(int n, double eps, Sidedness sidedness) {
  if (n < 1) fail(ErrorKind::Validation, "Bowen order must be at least 1");
  const int k = ball_depth_offset(eps);
  if (k == 0) return {0, 0};
  if (sidedness == Sidedness::OneSided) return {0, n + k - 1};
  return {-(k - 1), n + 2 * k - 2};
}

bool CylinderSet::contains(const PointRep& x) const {
  for (std::size_t i = 0; i < word.size(); ++i)
    if (x.at(base + static_cast<long>(i)) != word[i]) return false;
  return true;
}

CylinderSet ball_to_cylinder(const PointRep& center, int n, double eps, const ShiftSystem& sys) {
  if (!sys.exact_backend())
    fail(ErrorKind::UnsupportedBackend, "balls are cylinders only under the first-difference metric");
  require_non_dyadic(eps);
  require_admissible(center, sys);
  const BallWindow w = ball_window(n, eps, sys.sidedness());
  return {w.base, center.window(w.base, w.length)};
}

CylinderSet ball_to_cylinder(const Word& center, int n, double eps, const ShiftSystem& sys) {
  if (!sys.exact_backend())
    fail(ErrorKind::UnsupportedBackend, "balls are cylinders only under the first-difference metric");
  if (sys.two_sided()) fail(ErrorKind::Validation, "two-sided balls need a point center");
  require_non_dyadic(eps);
  sys.require_admissible(center);
  const BallWindow w = ball_window(n, eps, sys.sidedness());
  if (static_cast<int>(center.size()) < w.length)
    fail(ErrorKind::Validation, "center word shorter than the ball window");
  return {0, Word(center.begin(), center.begin() + w.length)};
}

Tri in_ball(const BowenBall& ball, const PointRep& y, const ShiftSystem& sys) {
  const Interval d = bowen_distance(ball.center, y, ball.n, sys);
  if (ball.closed) {
    if (d.hi <= ball.eps) return Tri::Yes;
    if (d.lo > ball.eps) return Tri::No;
  } else {
    if (d.hi < ball.eps) return Tri::Yes;
    if (d.lo >= ball.eps) return Tri::No;
  }
  return Tri::Unknown;
}

Interval cylinder_distance(const CylinderSet& a, const CylinderSet& b, const ShiftSystem& sys) {
  const Alphabet& alpha = sys.alphabet();
  const long w = sys.metric().window;
  const long lo_index = sys.two_sided() ? -w : 0;
  const long hi_index = sys.two_sided() ? w : w - 1;
  auto fixed = [](const CylinderSet& c, long i) -> std::optional<Symbol> {
    if (i < c.base || i >= c.base + c.depth()) return std::nullopt;
    return c.word[static_cast<std::size_t>(i - c.base)];
  };

  if (sys.exact_backend()) {
    long first_diff = -1;
    long first_open = -1;
    for (long r = 0; r <= std::max(hi_index, -lo_index); ++r) {
      for (long i : {r, -r}) {
        if (i < lo_index || i > hi_index || (i == -r && r == 0)) continue;
        const auto fa = fixed(a, i);
        const auto fb = fixed(b, i);
        if (fa && fb) {
          if (*fa != *fb && first_diff < 0) first_diff = r;
        } else if (first_open < 0) {
          first_open = r;
        }
      }
      if (first_diff >= 0) break;
    }
    const long open = first_open < 0 ? std::max(hi_index, -lo_index) + 1 : first_open;
    const double lo = first_diff >= 0 ? std::ldexp(1.0, -static_cast<int>(first_diff)) : 0.0;
    const long hi_pos = first_diff >= 0 ? std::min(first_diff, open) : open;
    return {lo, std::ldexp(1.0, -static_cast<int>(hi_pos))};
  }

  double lo = 0.0;
  double hi = 0.0;
  for (long i = lo_index; i <= hi_index; ++i) {
    const double weight = std::ldexp(1.0, -static_cast<int>(std::abs(i)));
    const auto fa = fixed(a, i);
    const auto fb = fixed(b, i);
    if (fa && fb) {
      const double r = alpha.rho(*fa, *fb);
      lo += weight * r;
      hi += weight * r;
    } else {
      hi += weight * alpha.max_rho();
    }
  }
  // unknown tail beyond the window
  const double tail = std::ldexp(1.0, -static_cast<int>(w)) * alpha.max_rho();
  hi += 2.0 * tail;
  return {lo, hi};
}

// --- enumeration ----------------------------------------------------------

void for_each_word(const ShiftSystem& sys, int length, const std::function<void(const Word&)>& visit,
                   std::uint64_t cap) {
  if (length < 0) fail(ErrorKind::Validation, "negative word length");
  std::uint64_t total = 0;
  try {
    total = sys.count_words(length);
  } catch (const Error&) {
    fail(ErrorKind::Resource, "enumeration cap " + std::to_string(cap) + " exceeded");
  }
  if (total > cap) fail(ErrorKind::Resource, "enumeration cap " + std::to_string(cap) + " exceeded");
  Word w(static_cast<std::size_t>(length), 0);
  if (length == 0) {
    visit(w);
    return;
  }
  const int m = sys.size();
  // iterative DFS over positions
  std::vector<int> next(static_cast<std::size_t>(length), 0);
  int pos = 0;
  while (pos >= 0) {
    if (next[pos] >= m) {
      next[pos] = 0;
      --pos;
      continue;
    }
    const Symbol a = static_cast<Symbol>(next[pos]++);
    if (pos > 0 && !sys.allowed(w[pos - 1], a)) continue;
    w[pos] = a;
    if (pos + 1 == length) {
      visit(w);
    } else {
      ++pos;
    }
  }
}

std::vector<Word> enumerate_words(const ShiftSystem& sys, int length, std::uint64_t cap) {
  std::vector<Word> out;
  for_each_word(sys, length, [&](const Word& w) { out.push_back(w); }, cap);
  return out;
}

}  // namespace mmd
