#pragma once
// Brute-force reference computations used by the tests. Nothing here calls
// into the library's counting code; the oracles work on plain digit vectors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Digits = std::vector<int>;

inline int k_of(double eps) {
  int j = 0;
  while (!(std::pow(2.0, -j) < eps)) ++j;
  return j;
}

/// Every word of length L over {0..m-1}; `allowed(a, b)` filters transitions.
inline std::vector<Digits> all_words(int m, int length, const std::function<bool(int, int)>& allowed = {}) {
  std::vector<Digits> out;
  Digits w(length, 0);
  std::uint64_t total = 1;
  for (int i = 0; i < length; ++i) total *= m;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (int i = length - 1; i >= 0; --i) {
      w[i] = static_cast<int>(c % m);
      c /= m;
    }
    bool ok = true;
    for (int i = 0; ok && i + 1 < length; ++i) ok = !allowed || allowed(w[i], w[i + 1]);
    if (ok) out.push_back(w);
  }
  return out;
}

inline bool golden(int a, int b) { return !(a == 1 && b == 1); }

/// One-sided first-difference distance of two equally long words padded by
/// the same tail.
inline double fd_distance(const Digits& x, const Digits& y, int from) {
  for (std::size_t j = from; j < x.size(); ++j)
    if (x[j] != y[j]) return std::pow(2.0, -static_cast<double>(j - from));
  return 0.0;
}

inline double bowen_fd(const Digits& x, const Digits& y, int n) {
  double d = 0.0;
  for (int i = 0; i < n; ++i) d = std::max(d, fd_distance(x, y, i));
  return d;
}

/// Largest clique of an undirected graph: branch and bound with the greedy
/// colouring bound (a clique uses each colour class at most once).
inline std::size_t max_clique(const std::vector<std::vector<bool>>& adj) {
  std::size_t best = 0;
  auto colours = [&](const std::vector<int>& p) {
    std::vector<std::vector<int>> classes;
    for (int v : p) {
      bool placed = false;
      for (auto& cls : classes) {
        bool free = true;
        for (int u : cls) free = free && !adj[u][v];
        if (free) {
          cls.push_back(v);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back({v});
    }
    return classes.size();
  };
  std::function<void(std::size_t, std::vector<int>)> expand = [&](std::size_t size, std::vector<int> p) {
    best = std::max(best, size);
    while (!p.empty()) {
      if (size + colours(p) <= best) return;
      const int v = p.back();
      p.pop_back();
      std::vector<int> np;
      for (int u : p)
        if (adj[v][u]) np.push_back(u);
      expand(size + 1, np);
    }
  };
  std::vector<int> p(adj.size());
  for (std::size_t i = 0; i < adj.size(); ++i) p[i] = static_cast<int>(i);
  expand(0, p);
  return best;
}

/// Largest (n, eps)-separated subset among the given points (d_n > eps).
inline std::size_t max_separated(const std::vector<Digits>& pts, int n, double eps) {
  std::vector<std::vector<bool>> adj(pts.size(), std::vector<bool>(pts.size(), false));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) adj[i][j] = adj[j][i] = bowen_fd(pts[i], pts[j], n) > eps;
  return max_clique(adj);
}

inline double bernoulli_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0) h -= x * std::log(x);
  return h;
}

/// -sum pi_i P_ij ln P_ij.
inline double markov_entropy(const std::vector<double>& pi, const std::vector<double>& t) {
  const std::size_t m = pi.size();
  double h = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (t[i * m + j] > 0) h -= pi[i] * t[i * m + j] * std::log(t[i * m + j]);
  return h;
}

/// Mass of a word under a Markov chain by the matrix-chain product.
inline double markov_mass(const std::vector<double>& pi, const std::vector<double>& t, const Digits& w) {
  if (w.empty()) return 1.0;
  const std::size_t m = pi.size();
  double p = pi[w[0]];
  for (std::size_t i = 1; i < w.size(); ++i) p *= t[w[i - 1] * m + w[i]];
  return p;
}

/// H(X_0..X_{n-1}) / n by summing over all words.
inline double block_entropy_rate(const std::vector<double>& pi, const std::vector<double>& t, int n) {
  double h = 0.0;
  for (const auto& w : all_words(static_cast<int>(pi.size()), n)) {
    const double p = markov_mass(pi, t, w);
    if (p > 0) h -= p * std::log(p);
  }
  return h / n;
}

// --- antichains in the prefix tree -----------------------------------------

/// Tree of admissible words; `hits(w)` says whether cylinder [w] meets Z.
struct PrefixTree {
  int m = 2;
  std::function<bool(int, int)> allowed;
  std::function<bool(const Digits&)> hits;

  std::vector<Digits> children(const Digits& w) const {
    std::vector<Digits> out;
    for (int a = 0; a < m; ++a) {
      if (!w.empty() && allowed && !allowed(w.back(), a)) continue;
      Digits c = w;
      c.push_back(a);
      if (hits(c)) out.push_back(c);
    }
    return out;
  }
};

/// Calls `visit` with the depths of every antichain cover of Z by cylinders
/// of depth in [lo, hi].
inline void for_each_cover(const PrefixTree& t, int lo, int hi, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> acc;
  // Work list of nodes still to be covered.
  std::function<void(std::vector<Digits>)> go = [&](std::vector<Digits> pending) {
    if (pending.empty()) {
      visit(acc);
      return;
    }
    Digits w = pending.back();
    pending.pop_back();
    const int d = static_cast<int>(w.size());
    if (d >= lo && d <= hi) {
      acc.push_back(d);
      go(pending);
      acc.pop_back();
    }
    if (d < hi) {
      auto next = pending;
      for (auto& c : t.children(w)) next.push_back(c);
      go(next);
    }
  };
  if (t.hits({})) go({Digits{}});
  else visit(acc);
}

/// Calls `visit` with the depths of every antichain (covering or not) of
/// cylinders meeting Z with depth in [lo, hi].
inline void for_each_antichain(const PrefixTree& t, int lo, int hi,
                               const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> acc;
  std::function<void(std::vector<Digits>)> go = [&](std::vector<Digits> pending) {
    if (pending.empty()) {
      visit(acc);
      return;
    }
    Digits w = pending.back();
    pending.pop_back();
    const int d = static_cast<int>(w.size());
    if (d >= lo && d <= hi) {
      acc.push_back(d);
      go(pending);
      acc.pop_back();
    }
    if (d < hi) {
      auto next = pending;
      for (auto& c : t.children(w)) next.push_back(c);
      go(next);
    } else {
      go(pending);
    }
  };
  if (t.hits({})) go({Digits{}});
  else visit(acc);
}

/// Exhaustive Bowen weight: min over covers of sum exp(-s n), n = depth - k + 1.
inline double bowen_weight(const PrefixTree& t, double s, int n, int n_max, int k) {
  double best = INFINITY;
  for_each_cover(t, n + k - 1, n_max + k - 1, [&](const std::vector<int>& depths) {
    double w = 0.0;
    for (int d : depths) w += std::exp(-s * (d - k + 1));
    best = std::min(best, w);
  });
  return best;
}

inline double packing_weight(const PrefixTree& t, double s, int n, int n_max, int k) {
  double best = 0.0;
  for_each_antichain(t, n + k - 1, n_max + k - 1, [&](const std::vector<int>& depths) {
    double w = 0.0;
    for (int d : depths) w += std::exp(-s * (d - k + 1));
    best = std::max(best, w);
  });
  return best;
}

/// Every reachable (mass, weight) pair of ball families below one node of
/// the full m-ary tree under the uniform measure, in integer units: masses
/// in m^-leaf, weights in m^-(leaf - k + 1) where leaf = n_max + k - 1. Sets
/// are kept whole, not Pareto-pruned.
inline std::set<std::pair<long, long>> uniform_families(int m, int depth, int lo, int hi) {
  std::set<std::pair<long, long>> out;
  auto ipow = [](long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
  };
  if (depth >= lo) out.insert({ipow(m, hi - depth), ipow(m, hi - depth)});
  if (depth == hi) {
    out.insert({0, 0});
    return out;
  }
  const auto child = uniform_families(m, depth + 1, lo, hi);
  std::set<std::pair<long, long>> acc{{0, 0}};
  for (int c = 0; c < m; ++c) {
    std::set<std::pair<long, long>> next;
    for (auto [a, b] : acc)
      for (auto [x, y] : child) next.insert({a + x, b + y});
    acc.swap(next);
  }
  out.insert(acc.begin(), acc.end());
  return out;
}

}  // namespace oracle
