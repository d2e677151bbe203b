#include "mmd/grid_family.hpp"

#include "mmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmd {

namespace {

void require_grid_system(const ShiftSystem& sys) {
  if (sys.exact_backend()) fail(ErrorKind::UnsupportedBackend, "grid brackets need the weighted-sum metric");
  if (!sys.is_full()) fail(ErrorKind::Unsupported, "grid brackets are implemented for full shifts");
}

double weight(const ShiftSystem& sys, int t) {
  if (sys.two_sided()) return std::ldexp(1.0, -std::abs(t));
  return t >= 0 ? std::ldexp(1.0, -t) : 0.0;
}

// Total weight S = sum_t w(t) and the weight of coordinates at distance > a
// beyond either end of an order-n window.
double total_weight(const ShiftSystem& sys) { return sys.two_sided() ? 3.0 : 2.0; }
double tail_weight(const ShiftSystem& sys, int a) {
  return (sys.two_sided() ? 2.0 : 1.0) * std::ldexp(1.0, -a);
}

// Symbols within distance < c of v.
int neighbours(const Alphabet& alphabet, Symbol v, double c) {
  int count = 0;
  for (int u = 0; u < alphabet.size(); ++u) count += alphabet.rho(static_cast<Symbol>(u), v) < c ? 1 : 0;
  return count;
}

// E_v[-ln(#{u : rho(u, v) < c} / m)] for v uniform.
double box_exponent(const Alphabet& alphabet, double c) {
  const int m = alphabet.size();
  double acc = 0.0;
  for (int v = 0; v < m; ++v) acc -= std::log(static_cast<double>(neighbours(alphabet, static_cast<Symbol>(v), c)) / m);
  return acc / m;
}

// Smallest margin a with S c + max_rho tail(a) < target, or -1.
int margin_for(const ShiftSystem& sys, double c, double target) {
  for (int a = 0; a <= 60; ++a)
    if (total_weight(sys) * c + sys.alphabet().max_rho() * tail_weight(sys, a) < target) return a;
  return -1;
}

// Distinct symbol distances, sorted.
std::vector<double> distance_levels(const Alphabet& alphabet) {
  std::vector<double> out;
  for (int a = 0; a < alphabet.size(); ++a)
    for (int b = 0; b < alphabet.size(); ++b) out.push_back(alphabet.rho(static_cast<Symbol>(a), static_cast<Symbol>(b)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_schedule(const std::vector<int>& n_schedule) {
  for (int n : n_schedule)
    if (n < 1) fail(ErrorKind::Validation, "orders must be at least 1");
}

}  // namespace

double block_separation(const ShiftSystem& sys, const Word& u, const Word& v) {
  if (u.size() != v.size()) fail(ErrorKind::Validation, "blocks must have equal length");
  const int b = static_cast<int>(u.size());
  double best = 0.0;
  for (int j = 0; j < b; ++j) {
    double acc = 0.0;
    for (int l = 0; l < b; ++l) acc += weight(sys, l - j) * sys.alphabet().rho(u[l], v[l]);
    best = std::max(best, acc);
  }
  return best;
}

std::vector<Word> greedy_block_code(const ShiftSystem& sys, double r, int block, std::uint64_t cap) {
  require_grid_system(sys);
  if (block < 1) fail(ErrorKind::Validation, "block length must be at least 1");
  // Floating sums can only undercount the separation by rounding; the margin
  // keeps every accepted pair strictly beyond r.
  const double threshold = r + 1e-12;
  std::vector<Word> code;
  for_each_word(
      sys, block,
      [&](const Word& w) {
        for (const Word& c : code)
          if (block_separation(sys, w, c) <= threshold) return;
        code.push_back(w);
      },
      cap);
  return code;
}

std::vector<Symbol> symbol_cover(const Alphabet& alphabet, double c) {
  if (!(c > 0.0)) fail(ErrorKind::Validation, "cover radius must be positive");
  std::vector<int> order(alphabet.size());
  for (int i = 0; i < alphabet.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return alphabet.value(a) < alphabet.value(b); });
  // Interval covering on the line: the farthest symbol still reaching the
  // leftmost uncovered one.
  std::vector<Symbol> out;
  std::size_t i = 0;
  while (i < order.size()) {
    const double left = alphabet.value(order[i]);
    std::size_t j = i;
    while (j + 1 < order.size() && alphabet.value(order[j + 1]) - left < c) ++j;
    out.push_back(static_cast<Symbol>(order[j]));
    const double centre = alphabet.value(order[j]);
    std::size_t k = j + 1;
    while (k < order.size() && alphabet.value(order[k]) - centre < c) ++k;
    i = k;
  }
  return out;
}

RateBracket separated_rate_bracket(const ShiftSystem& sys, double r, const std::vector<int>& n_schedule,
                                   int max_block, std::uint64_t cap) {
  require_grid_system(sys);
  require_schedule(n_schedule);
  if (!(r > 0.0)) fail(ErrorKind::Validation, "radius must be positive");
  if (max_block < 1) fail(ErrorKind::Validation, "block length must be at least 1");
  RateBracket out;

  double best = -1.0;
  for (int b = 1; b <= max_block; ++b) {
    const double m_pow = std::pow(static_cast<double>(sys.size()), b);
    if (m_pow > static_cast<double>(cap)) break;
    const std::size_t size = greedy_block_code(sys, r, b, cap).size();
    const double rate = std::log(static_cast<double>(size)) / b;
    if (rate > best + 1e-15) {
      best = rate;
      out.block = b;
      out.code_size = size;
    }
  }
  if (best < 0.0) fail(ErrorKind::Resource, "no block code fits under the enumeration cap");
  out.rate.lo = best;

  // Spanning: every point lies within r/2 (closed) of a centre whose window
  // coordinates come from the cover; separated points sit in distinct balls.
  const auto levels = distance_levels(sys.alphabet());
  const double target = 0.5 * r;
  double c = 0.0;
  for (double lvl : levels)
    if (lvl > 0.0 && total_weight(sys) * lvl < target) c = lvl;
  // Distances < c' for the smallest level above c.
  double c_open = target / total_weight(sys);
  for (double lvl : levels)
    if (lvl > c) {
      c_open = std::min(c_open, lvl);
      break;
    }
  const std::size_t cover = symbol_cover(sys.alphabet(), c_open).size();
  out.cover_size = cover;
  out.rate.hi = std::log(static_cast<double>(cover));

  const int sides = sys.two_sided() ? 2 : 1;
  const int a = margin_for(sys, c, target);
  if (a < 0) fail(ErrorKind::Resource, "no spanning margin reaches the radius");
  for (int n : n_schedule) {
    const double lo = std::floor(static_cast<double>(n) / out.block) * std::log(static_cast<double>(out.code_size)) / n;
    out.lower_trace.push_back({double(n), lo});
    const double hi = static_cast<double>(n + sides * a) * out.rate.hi / n;
    out.upper_trace.push_back({double(n), std::max(hi, lo)});
  }
  return out;
}

RateBracket uniform_bk_bracket(const ShiftSystem& sys, double eps, const std::vector<int>& n_schedule) {
  require_grid_system(sys);
  require_schedule(n_schedule);
  if (!(eps > 0.0)) fail(ErrorKind::Validation, "radius must be positive");
  const Alphabet& alphabet = sys.alphabet();
  RateBracket out;
  // Outer box: d(T^j x, T^j y) >= rho(x_j, y_j) for each j < n.
  out.rate.lo = box_exponent(alphabet, eps);
  // Inner box in the limit: coordinates within < eps/S suffice once the free
  // tail is pushed away.
  out.rate.hi = box_exponent(alphabet, eps / total_weight(sys));

  const auto levels = distance_levels(alphabet);
  const int sides = sys.two_sided() ? 2 : 1;
  for (int n : n_schedule) {
    out.lower_trace.push_back({double(n), out.rate.lo});
    double best = std::numeric_limits<double>::infinity();
    for (double lvl : levels) {
      // Box |y_i - x_i| <= lvl on the window, free outside.
      const int a = margin_for(sys, lvl, eps);
      if (a < 0) continue;
      const double per = box_exponent(alphabet, std::nextafter(lvl, 2.0));
      best = std::min(best, static_cast<double>(n + sides * a) * per / n);
    }
    out.upper_trace.push_back({double(n), std::max(best, out.rate.lo)});
  }
  return out;
}

}  // namespace mmd
