#include "mmd/caratheodory.hpp"

#include "mmd/errors.hpp"
#include "mmd/kernels.hpp"
#include "mmd/mass_classes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace mmd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Mode { Cover, Pack };

struct Geometry {
  int k = 0;
  int c = 0;  // ball length minus order
  int length(int n) const { return n + c; }
};

Geometry cp_geometry(const ShiftSystem& sys, double eps) {
  if (!sys.exact_backend()) fail(ErrorKind::UnsupportedBackend, "Caratheodory weights need the first-difference metric");
  if (sys.two_sided()) fail(ErrorKind::Unsupported, "Caratheodory weights are implemented for one-sided shifts");
  require_non_dyadic(eps);
  Geometry g;
  g.k = ball_depth_offset(eps);
  g.c = g.k > 0 ? g.k - 1 : 0;
  return g;
}

void require_orders(int n, int n_max, double s) {
  if (n < 1 || n_max < n) fail(ErrorKind::Validation, "order window must satisfy 1 <= N <= N_max");
  if (!(s >= 0.0)) fail(ErrorKind::Validation, "weight exponent s must be nonnegative");
}

// Optimal value of the subtree below any cylinder fully inside Z, by length
// and last symbol (column 0 is the empty word).
class WeightTable {
 public:
  WeightTable(const ShiftSystem& sys, const Geometry& g, Mode mode, double s, int n, int n_max)
      : m_(sys.size()), c_(g.c), s_(s), lmin_(g.length(n)), lmax_(g.length(n_max)), mode_(mode) {
    table_.assign(static_cast<std::size_t>(lmax_ + 1) * (m_ + 1), kNegInf);
    for (int last = 0; last <= m_; ++last) at(lmax_, last) = log_ball(lmax_);
    for (int len = lmax_ - 1; len >= 0; --len) {
      for (int last = 0; last <= m_; ++last) {
        if (len == 0 && last != 0) continue;
        if (len > 0 && last == 0) continue;
        double acc = kNegInf;
        for (int a = 0; a < m_; ++a) {
          if (len > 0 && !sys.allowed(static_cast<Symbol>(last - 1), static_cast<Symbol>(a))) continue;
          acc = log_add(acc, at(len + 1, a + 1));
        }
        at(len, last) = choose(len, acc);
      }
    }
  }

  double log_ball(int len) const { return -static_cast<double>(len - c_) * s_; }
  int lmin() const { return lmin_; }
  int lmax() const { return lmax_; }
  Mode mode() const { return mode_; }

  /// Option of using the node's own ball versus the best value of its children.
  double choose(int len, double children) const {
    if (len < lmin_) return children;
    const double own = log_ball(len);
    if (mode_ == Mode::Cover) return children == kNegInf ? own : std::min(own, children);
    return std::max(own, children);
  }

  /// Full subtree below a word of length len ending in last (-1 for the root).
  double full(int len, int last) const { return table_[static_cast<std::size_t>(len) * (m_ + 1) + last + 1]; }

  /// A single infinite path from depth len: the deepest ball for covers, the
  /// shallowest for packings.
  double chain(int len) const {
    if (mode_ == Mode::Cover) return log_ball(lmax_);
    return log_ball(std::max(len, lmin_));
  }

 private:
  double& at(int len, int last) { return table_[static_cast<std::size_t>(len) * (m_ + 1) + last]; }

  int m_;
  int c_;
  double s_;
  int lmin_;
  int lmax_;
  Mode mode_;
  std::vector<double> table_;
};

bool same_sequence(const PointRep& x, const PointRep& y) {
  const long pre = static_cast<long>(std::max(x.preperiod.size(), y.preperiod.size()));
  const long px = static_cast<long>(x.period.size()), py = static_cast<long>(y.period.size());
  return x.window(0, pre + std::lcm(px, py)) == y.window(0, pre + std::lcm(px, py));
}

double eval_cylinders(const WeightTable& t, const std::vector<Word>& words, int depth, std::size_t lo,
                      std::size_t hi, int len) {
  if (len == depth) return t.full(len, words[lo].back());
  if (len == t.lmax()) return t.log_ball(len);
  double acc = kNegInf;
  std::size_t i = lo;
  while (i < hi) {
    std::size_t j = i;
    while (j < hi && words[j][len] == words[i][len]) ++j;
    acc = log_add(acc, eval_cylinders(t, words, depth, i, j, len + 1));
    i = j;
  }
  return t.choose(len, acc);
}

double eval_points(const WeightTable& t, const std::vector<PointRep>& pts, std::vector<std::size_t> idx, int len) {
  if (idx.size() == 1) return t.chain(len);
  if (len == t.lmax()) return t.log_ball(len);
  std::map<Symbol, std::vector<std::size_t>> split;
  for (std::size_t i : idx) split[pts[i].at(len)].push_back(i);
  double acc = kNegInf;
  for (auto& [a, sub] : split) acc = log_add(acc, eval_points(t, pts, std::move(sub), len + 1));
  return t.choose(len, acc);
}

double evaluate(const WeightTable& t, const LeafSet& z) {
  if (z.empty()) return kNegInf;
  switch (z.kind()) {
    case LeafSet::Kind::Whole:
      return t.full(0, -1);
    case LeafSet::Kind::Cylinders: {
      const auto& words = z.words();
      const int depth = z.depth();
      if (depth == 0) return t.full(0, -1);
      if (depth <= t.lmin() && depth <= t.lmax()) {
        // No ball is shallow enough to use a partial node: sum the leaves.
        double acc = kNegInf;
        for (const Word& w : words) acc = log_add(acc, t.full(depth, w.back()));
        return acc;
      }
      return eval_cylinders(t, words, depth, 0, words.size(), 0);
    }
    case LeafSet::Kind::Points: {
      std::vector<PointRep> pts = z.point_list();
      std::sort(pts.begin(), pts.end(), [](const PointRep& a, const PointRep& b) {
        return std::tie(a.preperiod, a.period) < std::tie(b.preperiod, b.period);
      });
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      // Distinct representations may still describe the same sequence.
      std::vector<PointRep> distinct;
      for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : distinct) seen = seen || same_sequence(p, q);
        if (!seen) distinct.push_back(p);
      }
      std::vector<std::size_t> idx(distinct.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      return eval_points(t, distinct, std::move(idx), 0);
    }
  }
  return kNegInf;
}

double log_weight(Mode mode, const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps) {
  const Geometry g = cp_geometry(sys, eps);
  require_orders(n, n_max, s);
  if (z.empty()) return kNegInf;
  if (g.k == 0) return -static_cast<double>(mode == Mode::Cover ? n_max : n) * s;  // every ball is X
  const WeightTable t(sys, g, mode, s, n, n_max);
  return evaluate(t, z);
}

// --- critical values ------------------------------------------------------

using LogWeight = std::function<double(double s, int n)>;

// inf{s >= 0 : f(s) < level} for f nonincreasing in s.
double solve(const std::function<double(double)>& f, double level, double tol) {
  if (f(0.0) < level) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (!(f(hi) < level)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1024.0) fail(ErrorKind::Bracket, "weight does not fall below the jump threshold on the scanned s-range");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < level ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

CriticalValue critical(const LogWeight& w, const CriticalSpec& spec, FiniteSizeBasis basis, std::string family) {
  if (spec.n_schedule.empty()) fail(ErrorKind::Validation, "empty N schedule");
  if (!(spec.theta_low > 0.0 && spec.theta_low < spec.theta_high)) fail(ErrorKind::Validation, "need 0 < theta_low < theta_high");
  if (!(spec.tol > 0.0)) fail(ErrorKind::Validation, "bisection tolerance must be positive");
  std::vector<int> schedule = spec.n_schedule;
  std::sort(schedule.begin(), schedule.end());
  const double mid_level = 0.5 * (std::log(spec.theta_low) + std::log(spec.theta_high));

  CriticalValue out;
  out.n_schedule = schedule;
  out.family = std::move(family);
  for (int n : schedule) {
    auto f = [&](double s) { return w(s, n); };
    out.trace.push_back({double(n), solve(f, mid_level, spec.tol)});
  }
  const int nmax = schedule.back();
  auto f = [&](double s) { return w(s, nmax); };
  out.bracket.lo = solve(f, std::log(spec.theta_high), spec.tol);
  out.bracket.hi = solve(f, std::log(spec.theta_low), spec.tol);
  if (out.bracket.lo > out.bracket.hi) out.bracket.lo = out.bracket.hi;

  const int points = static_cast<int>(out.trace.size());
  const int needed = basis == FiniteSizeBasis::Affine ? 2 : 3;
  double s_star = out.trace.back().second;
  if (points >= needed) s_star = summarize_tail(out.trace, basis, points).extrapolated;
  out.s_star = std::clamp(s_star, out.bracket.lo, out.bracket.hi);
  return out;
}

std::string orders_family(const CriticalSpec& spec) {
  std::ostringstream os;
  os << "orders [N, N+" << spec.span << "], N in {";
  for (std::size_t i = 0; i < spec.n_schedule.size(); ++i) os << (i ? "," : "") << spec.n_schedule[i];
  os << "}";
  return os.str();
}

// --- measure-constrained covers -------------------------------------------

template <class M>
struct FrontierPoint {
  M mass;
  double weight;
};

template <class M>
using Frontier = std::vector<FrontierPoint<M>>;

struct FrontierOverflow {};

template <class M>
void prune(Frontier<M>& f, std::size_t cap) {
  std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.weight < b.weight;
  });
  Frontier<M> out;
  double best = kInf;
  for (auto& p : f) {
    if (p.weight < best) {
      best = p.weight;
      out.push_back(std::move(p));
    }
  }
  if (out.size() > cap) throw FrontierOverflow{};
  f = std::move(out);
}

// Pareto frontier (mass, weight) of antichains in the subtree below a word,
// with masses relative to the word. Product measures make the subtree depend
// only on its length and last symbol.
template <class M>
class FrontierDp {
 public:
  FrontierDp(const MeasureModel& mu, const ShiftSystem& sys, const Geometry& g, double s, int n, int n_max,
             std::size_t cap)
      : mu_(mu), sys_(sys), c_(g.c), s_(s), lmin_(g.length(n)), lmax_(g.length(n_max)), cap_(cap) {}

  const Frontier<M>& at(int len, int last) {
    const auto key = std::make_pair(len, last);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Frontier<M> f{{M(0), 0.0}};
    const double own = std::exp(-static_cast<double>(len - c_) * s_);
    if (len < lmax_) {
      for (int a = 0; a < sys_.size(); ++a) {
        const M p = factor(last, static_cast<Symbol>(a));
        if (p == M(0)) continue;
        if (last >= 0 && !sys_.allowed(static_cast<Symbol>(last), static_cast<Symbol>(a))) continue;
        const Frontier<M>& child = at(len + 1, a);
        Frontier<M> sum;
        sum.reserve(f.size() * child.size());
        for (const auto& x : f)
          for (const auto& y : child) sum.push_back({x.mass + p * y.mass, x.weight + y.weight});
        prune(sum, cap_);
        f = std::move(sum);
      }
    }
    if (len >= lmin_) f.push_back({M(1), own});
    prune(f, cap_);
    return memo_.emplace(key, std::move(f)).first->second;
  }

 private:
  M factor(int last, Symbol a) const;

  const MeasureModel& mu_;
  const ShiftSystem& sys_;
  int c_;
  double s_;
  int lmin_;
  int lmax_;
  std::size_t cap_;
  std::map<std::pair<int, int>, Frontier<M>> memo_;
};

template <>
Rational FrontierDp<Rational>::factor(int last, Symbol a) const {
  if (mu_.kind() == MeasureKind::Bernoulli) return mu_.exact_p()[a];
  return last < 0 ? mu_.exact_pi()[a] : mu_.exact_transition(static_cast<Symbol>(last), a);
}

template <>
double FrontierDp<double>::factor(int last, Symbol a) const {
  if (mu_.kind() == MeasureKind::Bernoulli) return mu_.p()[a];
  return last < 0 ? mu_.pi()[a] : mu_.transition(static_cast<Symbol>(last), a);
}

template <class M>
double frontier_cover(FrontierDp<M>& dp, const M& threshold) {
  const Frontier<M>& root = dp.at(0, -1);
  double best = kInf;
  for (const auto& p : root)
    if (p.mass > threshold) best = std::min(best, p.weight);
  return best;
}

// Best single-depth greedy family; optimal when the order window is a point.
CoverWeight greedy_cover(const MeasureModel& mu, const ShiftSystem& sys, const Geometry& g, double s, int n,
                         int n_max, double delta) {
  CoverWeight out{kInf, n == n_max};
  const Threshold thr{1.0 - delta, Rational(1) - rational_from_double(delta), true};
  for (int order = n; order <= n_max; ++order) {
    const int len = g.length(order);
    const GreedyCount count = greedy_count(mass_classes(mu, sys, len), thr);
    out.weight = std::min(out.weight, std::exp(count.log_count - static_cast<double>(order) * s));
  }
  return out;
}

double log_or_neg_inf(double w) { return w > 0.0 ? std::log(w) : kNegInf; }

// Monotonicity is judged up to the bisection resolution.
MeasureCritical delta_limit(const std::vector<double>& delta_grid, double tol,
                            const std::function<CriticalValue(double)>& at_delta) {
  if (delta_grid.empty()) fail(ErrorKind::Validation, "empty delta grid");
  std::vector<double> deltas = delta_grid;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  MeasureCritical out;
  for (double d : deltas) {
    out.critical = at_delta(d);
    if (!out.sweep.empty() && out.critical.s_star < out.sweep.back().second - 10.0 * tol) out.monotone = false;
    out.sweep.push_back({d, out.critical.s_star});
  }
  return out;
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::Validation, "delta must lie in (0, 1)");
}

// Decomposition of the depth-D cylinders into groups of equal packing weight
// (one group per last symbol, merged when the weights agree).
struct PieceGroups {
  int depth = 0;
  bool uniform = true;
  GreedyCount uniform_count;                       // when every piece weighs the same
  std::vector<std::vector<double>> prefix_mass;    // per last symbol, cumulative sorted masses
};

PieceGroups piece_groups(const MeasureModel& mu, const ShiftSystem& sys, int depth, double delta) {
  PieceGroups out;
  out.depth = depth;
  out.uniform = sys.is_full();
  if (out.uniform) {
    const Threshold thr{1.0 - delta, Rational(1) - rational_from_double(delta), true};
    out.uniform_count = greedy_count(mass_classes(mu, sys, depth), thr);
    return out;
  }
  std::vector<std::vector<double>> masses(sys.size());
  for_each_word(sys, depth, [&](const Word& w) {
    const double p = word_mass(mu, w);
    if (p > 0.0) masses[w.back()].push_back(p);
  });
  for (auto& g : masses) {
    std::sort(g.begin(), g.end(), std::greater<>());
    std::vector<double> cum{0.0};
    for (double p : g) cum.push_back(cum.back() + p);
    out.prefix_mass.push_back(std::move(cum));
  }
  return out;
}

CoverWeight evaluate_pieces(const PieceGroups& groups, const WeightTable& t, double delta) {
  if (groups.uniform) return {std::exp(groups.uniform_count.log_count + t.full(groups.depth, 0)), true};
  const double thr = 1.0 - delta;
  std::vector<double> unit;
  for (std::size_t a = 0; a < groups.prefix_mass.size(); ++a) unit.push_back(std::exp(t.full(groups.depth, int(a))));
  if (groups.prefix_mass.size() == 2) {
    // Sweep the first group and binary-search the second.
    const auto& g0 = groups.prefix_mass[0];
    const auto& g1 = groups.prefix_mass[1];
    double best = kInf;
    for (std::size_t i = 0; i < g0.size(); ++i) {
      const double need = thr - g0[i];
      const auto it = std::upper_bound(g1.begin(), g1.end(), need);
      if (it == g1.end()) continue;
      const auto j = static_cast<std::size_t>(it - g1.begin());
      best = std::min(best, double(i) * unit[0] + double(j) * unit[1]);
    }
    return {best, true};
  }
  // More groups: greedy by mass per unit weight.
  struct Piece { double mass, weight; };
  std::vector<Piece> pieces;
  for (std::size_t a = 0; a < groups.prefix_mass.size(); ++a)
    for (std::size_t i = 1; i < groups.prefix_mass[a].size(); ++i)
      pieces.push_back({groups.prefix_mass[a][i] - groups.prefix_mass[a][i - 1], unit[a]});
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.mass * y.weight > y.mass * x.weight; });
  double mass = 0.0, weight = 0.0;
  for (const auto& p : pieces) {
    if (mass > thr) break;
    mass += p.mass;
    weight += p.weight;
  }
  return {mass > thr ? weight : kInf, false};
}

}  // namespace

// --- topological weights --------------------------------------------------

double log_bowen_weight(const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps) {
  return log_weight(Mode::Cover, sys, z, s, n, n_max, eps);
}

double bowen_weight(const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps) {
  return std::exp(log_bowen_weight(sys, z, s, n, n_max, eps));
}

double log_packing_weight(const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps) {
  return log_weight(Mode::Pack, sys, z, s, n, n_max, eps);
}

double packing_weight(const ShiftSystem& sys, const LeafSet& z, double s, int n, int n_max, double eps) {
  return std::exp(log_packing_weight(sys, z, s, n, n_max, eps));
}

CriticalValue bowen_critical(const ShiftSystem& sys, const LeafSet& z, double eps, const CriticalSpec& spec) {
  cp_geometry(sys, eps);
  return critical([&](double s, int n) { return log_bowen_weight(sys, z, s, n, n + spec.span, eps); }, spec,
                  FiniteSizeBasis::Affine, "Bowen covers, " + orders_family(spec));
}

CriticalValue packing_critical(const ShiftSystem& sys, const LeafSet& z, double eps, const CriticalSpec& spec) {
  cp_geometry(sys, eps);
  return critical([&](double s, int n) { return log_packing_weight(sys, z, s, n, n + spec.span, eps); }, spec,
                  FiniteSizeBasis::Affine, "closed-ball packings centred in Z, " + orders_family(spec));
}

double packing_modified(const ShiftSystem& sys, const std::vector<LeafSet>& pieces, double s, int n, int n_max,
                        double eps) {
  double acc = kNegInf;
  for (const auto& z : pieces) acc = log_add(acc, log_packing_weight(sys, z, s, n, n_max, eps));
  return std::exp(acc);
}

CriticalValue packing_modified_critical(const ShiftSystem& sys, const std::vector<LeafSet>& pieces, double eps,
                                        const CriticalSpec& spec) {
  cp_geometry(sys, eps);
  auto w = [&](double s, int n) {
    double acc = kNegInf;
    for (const auto& z : pieces) acc = log_add(acc, log_packing_weight(sys, z, s, n, n + spec.span, eps));
    return acc;
  };
  return critical(w, spec, FiniteSizeBasis::Affine,
                  "finite decomposition into " + std::to_string(pieces.size()) + " leaf sets, " + orders_family(spec));
}

// --- measure versions -----------------------------------------------------

CoverWeight katok_cp_cover(const MeasureModel& mu, const ShiftSystem& sys, double s, int n, int n_max, double eps,
                           double delta, const KatokCoverOptions& options) {
  const Geometry g = cp_geometry(sys, eps);
  require_orders(n, n_max, s);
  require_supported(mu, sys);
  if (delta >= 1.0) return {0.0, true};
  if (!(delta > 0.0)) fail(ErrorKind::Validation, "delta must be positive");
  if (g.k == 0) return {std::exp(-static_cast<double>(n_max) * s), true};
  const bool product = mu.kind() != MeasureKind::Empirical;
  if (n < n_max && product && g.length(n_max) <= options.exhaustive_depth) {
    try {
      if (mu.exact()) {
        FrontierDp<Rational> dp(mu, sys, g, s, n, n_max, options.frontier_cap);
        return {frontier_cover(dp, Rational(1) - rational_from_double(delta)), true};
      }
      FrontierDp<double> dp(mu, sys, g, s, n, n_max, options.frontier_cap);
      return {frontier_cover(dp, 1.0 - delta), true};
    } catch (const FrontierOverflow&) {
    }
  }
  return greedy_cover(mu, sys, g, s, n, n_max, delta);
}

CriticalValue katok_cp_critical(const MeasureModel& mu, const ShiftSystem& sys, double eps, double delta,
                                const CriticalSpec& spec) {
  const Geometry g = cp_geometry(sys, eps);
  require_delta(delta);
  require_supported(mu, sys);
  bool exact = true;
  LogWeight w;
  std::map<int, double> single;
  if (spec.span == 0) {
    // One order per family: the cover is the greedy atom count, independent of s.
    const Threshold thr{1.0 - delta, Rational(1) - rational_from_double(delta), true};
    for (int n : spec.n_schedule) single[n] = greedy_count(mass_classes(mu, sys, g.length(n)), thr).log_count;
    w = [&](double s, int n) { return single.at(n) - static_cast<double>(n) * s; };
  } else {
    w = [&](double s, int n) {
      const CoverWeight c = katok_cp_cover(mu, sys, s, n, n + spec.span, eps, delta);
      exact = exact && c.exact;
      return log_or_neg_inf(c.weight);
    };
  }
  CriticalValue out = critical(w, spec, FiniteSizeBasis::SqrtAffine,
                               "ball families with mass > 1 - delta, delta=" + std::to_string(delta) + ", " +
                                   orders_family(spec));
  out.exact = exact;
  return out;
}

MeasureCritical katok_cp_limit(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                               const std::vector<double>& delta_grid, const CriticalSpec& spec) {
  return delta_limit(delta_grid, spec.tol, [&](double d) { return katok_cp_critical(mu, sys, eps, d, spec); });
}

CoverWeight packing_cp_measure(const MeasureModel& mu, const ShiftSystem& sys, double s, int n, int n_max,
                               double eps, double delta) {
  const Geometry g = cp_geometry(sys, eps);
  require_orders(n, n_max, s);
  require_supported(mu, sys);
  if (delta >= 1.0) return {0.0, true};
  if (!(delta > 0.0)) fail(ErrorKind::Validation, "delta must be positive");
  if (g.k == 0) return {std::exp(-static_cast<double>(n) * s), true};
  const PieceGroups groups = piece_groups(mu, sys, g.length(n), delta);
  const WeightTable t(sys, g, Mode::Pack, s, n, n_max);
  return evaluate_pieces(groups, t, delta);
}

CriticalValue packing_cp_critical(const MeasureModel& mu, const ShiftSystem& sys, double eps, double delta,
                                  const CriticalSpec& spec) {
  const Geometry g = cp_geometry(sys, eps);
  require_delta(delta);
  require_supported(mu, sys);
  std::map<int, PieceGroups> groups;
  if (g.k > 0)
    for (int n : spec.n_schedule) groups.emplace(n, piece_groups(mu, sys, g.length(n), delta));
  bool exact = true;
  auto w = [&](double s, int n) {
    if (g.k == 0) return -static_cast<double>(n) * s;
    const WeightTable t(sys, g, Mode::Pack, s, n, n + spec.span);
    const CoverWeight c = evaluate_pieces(groups.at(n), t, delta);
    exact = exact && c.exact;
    return log_or_neg_inf(c.weight);
  };
  CriticalValue out = critical(w, spec, FiniteSizeBasis::SqrtAffine,
                               "decompositions into depth N+k-1 cylinders with mass > 1 - delta, delta=" +
                                   std::to_string(delta) + ", " + orders_family(spec));
  out.exact = exact;
  return out;
}

MeasureCritical packing_cp_limit(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                 const std::vector<double>& delta_grid, const CriticalSpec& spec) {
  return delta_limit(delta_grid, spec.tol, [&](double d) { return packing_cp_critical(mu, sys, eps, d, spec); });
}

// --- 5r covering ----------------------------------------------------------

std::vector<BowenBall> five_r_disjointify(const std::vector<BowenBall>& balls, const ShiftSystem& sys) {
  if (!sys.exact_backend()) fail(ErrorKind::UnsupportedBackend, "disjoint subfamilies need the first-difference metric");
  if (balls.empty()) return {};
  const double eps = balls.front().eps;
  std::vector<std::size_t> order(balls.size());
  std::vector<CylinderSet> cyl;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (balls[i].eps != eps) fail(ErrorKind::Validation, "balls must share the radius");
    order[i] = i;
    cyl.push_back(ball_to_cylinder(balls[i].center, balls[i].n, eps, sys));
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return balls[a].n < balls[b].n; });

  // Same radius and sidedness: every cylinder starts at the same coordinate,
  // so two balls meet iff one word is a prefix of the other.
  auto meet = [&](std::size_t a, std::size_t b) {
    const Word& u = cyl[a].word;
    const Word& v = cyl[b].word;
    const std::size_t len = std::min(u.size(), v.size());
    return std::equal(u.begin(), u.begin() + len, v.begin());
  };
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    bool free = true;
    for (std::size_t j : kept) free = free && !meet(i, j);
    if (free) kept.push_back(i);
  }
  std::vector<BowenBall> out;
  for (std::size_t i : kept) out.push_back(balls[i]);
  return out;
}

// --- generic points -------------------------------------------------------

LeafSet generic_leafset(const MeasureModel& mu, const ShiftSystem& sys, int length, int ell, double eta, int n0,
                        int threads) {
  if (ell < 1 || length < ell) fail(ErrorKind::Validation, "generic leaf sets need 1 <= ell <= L");
  if (!(eta >= 0.0)) fail(ErrorKind::Validation, "eta must be nonnegative");
  require_supported(mu, sys);
  const kernels::MarginalFilter filter(mu, ell, eta);
  const int n_first = std::clamp(n0, 1, length - ell + 1);
  return LeafSet::cylinders(sys, length, kernels::generic_words_omp(sys, filter, length, n_first, threads));
}

EntropyEstimate packing_entropy_generic(const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                        const GenericGrid& grid, int threads) {
  const Geometry g = cp_geometry(sys, eps);
  if (grid.ells.empty() || grid.etas.empty() || grid.lengths.empty()) fail(ErrorKind::Validation, "empty generic grid");
  require_supported(mu, sys);
  EntropyEstimate best;
  best.quantity = QuantityId::PACKING_GENERIC;
  best.eps = eps;
  best.mode = EstimateMode::Certified;
  bool found = false;
  int unresolved = 0;
  std::ostringstream cells;
  for (int ell : grid.ells) {
    for (double eta : grid.etas) {
      const kernels::MarginalFilter filter(mu, ell, eta);
      const int n0 = eta > 0.0 ? std::max(grid.n0, static_cast<int>(std::ceil(1.0 / eta - 1e-9))) : grid.n0;
      const bool counted = sys.size() == 2 && ell <= 2 && !grid.count_lengths.empty();
      Trace trace;
      int deepest = 0;
      for (int len : counted ? grid.count_lengths : grid.lengths) {
        const int n = len - g.c;
        if (n < 1 || n0 > len - ell + 1) continue;
        double rate;
        if (counted) {
          const auto log_count = kernels::generic_log_count(sys, filter, len, n0);
          if (!log_count) fail(ErrorKind::Resource, "generic leaf set of length " + std::to_string(len) + " cannot be counted");
          if (*log_count == kNegInf) continue;
          rate = *log_count / n;
        } else {
          const LeafSet z = generic_leafset(mu, sys, len, ell, eta, n0, threads);
          if (z.empty()) continue;
          CriticalSpec spec;
          spec.n_schedule = {n};
          rate = packing_critical(sys, z, eps, spec).trace.front().second;
        }
        trace.push_back({double(n), rate});
        deepest = len;
      }
      if (trace.empty()) continue;
      if (trace.size() >= 2 && trace.back().second < trace.front().second) {
        cells << (found || unresolved ? "; " : "") << "ell=" << ell << " eta=" << eta << " unresolved";
        ++unresolved;
        continue;
      }
      const double value =
          trace.size() >= 2 ? summarize_tail(trace, FiniteSizeBasis::Affine, int(trace.size())).extrapolated
                            : trace.back().second;
      cells << (found || unresolved ? "; " : "") << "ell=" << ell << " eta=" << eta << " n0=" << n0 << " -> " << value;
      if (!found || value < best.value) {
        best.value = std::max(0.0, value);
        best.trace = trace;
        best.params.ell = ell;
        best.params.eta = eta;
        best.params.depth = deepest;
      }
      found = true;
    }
  }
  if (!found) fail(ErrorKind::EmptyApproximation, "every generic leaf set on the grid is empty");
  best.family = "generic leaf sets; " + cells.str();
  return best;
}

}  // namespace mmd
