#include "mmd/measures.hpp"

#include "mmd/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace mmd {

namespace {

constexpr double kSumTol = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(to_double(r));
  return out;
}

std::vector<Rational> to_rationals(const std::vector<double>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(rational_from_double(x));
  return out;
}

bool exact_distribution(const std::vector<Rational>& v) {
  Rational s = 0;
  for (const auto& r : v) {
    if (r < 0) return false;
    s += r;
  }
  return s == 1;
}

bool exact_markov(const std::vector<Rational>& pi, const std::vector<Rational>& t, int m) {
  if (!exact_distribution(pi)) return false;
  for (int a = 0; a < m; ++a) {
    std::vector<Rational> row(t.begin() + a * m, t.begin() + (a + 1) * m);
    if (!exact_distribution(row)) return false;
  }
  for (int b = 0; b < m; ++b) {
    Rational s = 0;
    for (int a = 0; a < m; ++a) s += pi[a] * t[a * m + b];
    if (s != pi[b]) return false;
  }
  return true;
}

void check_distribution(const std::vector<double>& v, const char* what) {
  double s = 0.0;
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorKind::Validation, std::string(what) + " has a negative entry");
    s += x;
  }
  if (std::abs(s - 1.0) > kSumTol) fail(ErrorKind::Validation, std::string(what) + " does not sum to 1");
}

int side_of(std::size_t total, const char* what) {
  const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(total))));
  if (m < 1 || static_cast<std::size_t>(m) * m != total)
    fail(ErrorKind::Validation, std::string(what) + " must be square");
  return m;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

MeasureModel MeasureModel::bernoulli(std::vector<double> p) {
  MeasureModel mu;
  mu.kind_ = MeasureKind::Bernoulli;
  mu.m_ = static_cast<int>(p.size());
  mu.p_ = std::move(p);
  mu.validate();
  auto exact = to_rationals(mu.p_);
  if (exact_distribution(exact)) {
    mu.exact_ = true;
    mu.p_exact_ = std::move(exact);
  }
  return mu;
}

MeasureModel MeasureModel::bernoulli(std::vector<Rational> p) {
  if (!exact_distribution(p)) fail(ErrorKind::Validation, "probability vector must sum to exactly 1");
  MeasureModel mu = bernoulli(to_doubles(p));
  mu.exact_ = true;
  mu.p_exact_ = std::move(p);
  return mu;
}

MeasureModel MeasureModel::markov(std::vector<double> pi, std::vector<double> transition) {
  MeasureModel mu;
  mu.kind_ = MeasureKind::Markov;
  mu.m_ = static_cast<int>(pi.size());
  if (transition.size() != pi.size() * pi.size())
    fail(ErrorKind::Validation, "transition matrix size does not match the stationary vector");
  mu.pi_ = std::move(pi);
  mu.trans_ = std::move(transition);
  mu.validate();
  auto epi = to_rationals(mu.pi_);
  auto et = to_rationals(mu.trans_);
  if (exact_markov(epi, et, mu.m_)) {
    mu.exact_ = true;
    mu.pi_exact_ = std::move(epi);
    mu.trans_exact_ = std::move(et);
  }
  return mu;
}

MeasureModel MeasureModel::markov(std::vector<Rational> pi, std::vector<Rational> transition) {
  const int m = static_cast<int>(pi.size());
  if (transition.size() != pi.size() * pi.size() || !exact_markov(pi, transition, m))
    fail(ErrorKind::Validation, "exact Markov parameters must be stochastic and stationary");
  MeasureModel mu = markov(to_doubles(pi), to_doubles(transition));
  mu.exact_ = true;
  mu.pi_exact_ = std::move(pi);
  mu.trans_exact_ = std::move(transition);
  return mu;
}

MeasureModel MeasureModel::markov_stationary(std::vector<double> transition) {
  const int m = side_of(transition.size(), "transition matrix");
  // Solve pi (P - I) = 0 with sum(pi) = 1 in the least-squares sense.
  Eigen::MatrixXd a(m + 1, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(j, i) = transition[i * m + j] - (i == j ? 1.0 : 0.0);
  for (int i = 0; i < m; ++i) a(m, i) = 1.0;
  b(m) = 1.0;
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  std::vector<double> pi(m);
  for (int i = 0; i < m; ++i) pi[i] = std::max(0.0, x(i));
  double s = 0.0;
  for (double v : pi) s += v;
  for (double& v : pi) v /= s;
  return markov(std::move(pi), std::move(transition));
}

MeasureModel MeasureModel::empirical(Word orbit, int n, int alphabet_size) {
  MeasureModel mu;
  mu.kind_ = MeasureKind::Empirical;
  mu.m_ = alphabet_size;
  mu.orbit_ = std::move(orbit);
  mu.n_ = n;
  mu.exact_ = true;
  mu.validate();
  return mu;
}

void MeasureModel::validate() const {
  if (m_ < 1) fail(ErrorKind::Validation, "measure needs at least one symbol");
  switch (kind_) {
    case MeasureKind::Bernoulli:
      check_distribution(p_, "probability vector");
      break;
    case MeasureKind::Markov: {
      check_distribution(pi_, "stationary vector");
      for (int a = 0; a < m_; ++a)
        check_distribution(std::vector<double>(trans_.begin() + a * m_, trans_.begin() + (a + 1) * m_),
                           "transition row");
      for (int b = 0; b < m_; ++b) {
        double s = 0.0;
        for (int a = 0; a < m_; ++a) s += pi_[a] * trans_[a * m_ + b];
        if (std::abs(s - pi_[b]) > kSumTol) fail(ErrorKind::Validation, "stationary vector is not invariant");
      }
      // irreducibility on the symbols carrying mass
      for (int start = 0; start < m_; ++start) {
        if (pi_[start] <= 0.0) continue;
        std::vector<char> seen(m_, 0);
        std::vector<int> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
          const int a = stack.back();
          stack.pop_back();
          for (int b = 0; b < m_; ++b)
            if (trans_[a * m_ + b] > 0.0 && !seen[b]) {
              seen[b] = 1;
              stack.push_back(b);
            }
        }
        for (int b = 0; b < m_; ++b)
          if (pi_[b] > 0.0 && !seen[b]) fail(ErrorKind::Validation, "Markov chain is not irreducible");
      }
      break;
    }
    case MeasureKind::Empirical:
      if (n_ < 1) fail(ErrorKind::Validation, "empirical measure needs n >= 1");
      if (static_cast<int>(orbit_.size()) < n_)
        fail(ErrorKind::Validation, "empirical orbit shorter than n");
      for (Symbol a : orbit_)
        if (a >= m_) fail(ErrorKind::Validation, "empirical orbit symbol outside alphabet");
      break;
  }
}

bool MeasureModel::positive_symbol(Symbol a) const {
  switch (kind_) {
    case MeasureKind::Bernoulli: return p_[a] > 0.0;
    case MeasureKind::Markov: return pi_[a] > 0.0;
    case MeasureKind::Empirical:
      for (int j = 0; j < n_; ++j)
        if (orbit_[j] == a) return true;
      return false;
  }
  return false;
}

bool MeasureModel::positive_transition(Symbol a, Symbol b) const {
  switch (kind_) {
    case MeasureKind::Bernoulli: return p_[a] > 0.0 && p_[b] > 0.0;
    case MeasureKind::Markov: return pi_[a] > 0.0 && trans_[a * m_ + b] > 0.0;
    case MeasureKind::Empirical:
      for (std::size_t j = 0; j + 1 < orbit_.size() && j < static_cast<std::size_t>(n_); ++j)
        if (orbit_[j] == a && orbit_[j + 1] == b) return true;
      return false;
  }
  return false;
}

void require_supported(const MeasureModel& mu, const ShiftSystem& sys) {
  if (mu.size() != sys.size()) fail(ErrorKind::Validation, "measure and system alphabets differ in size");
  if (mu.kind() == MeasureKind::Empirical) {
    sys.require_admissible(mu.orbit());
    return;
  }
  for (int a = 0; a < mu.size(); ++a)
    for (int b = 0; b < mu.size(); ++b)
      if (mu.positive_transition(a, b) && !sys.allowed(a, b))
        fail(ErrorKind::Admissibility, "measure charges a forbidden transition " + std::to_string(a) + "->" +
                                           std::to_string(b));
}

namespace {

std::uint64_t empirical_count(const MeasureModel& mu, long base, const Word& w) {
  const auto& orbit = mu.orbit();
  const long n = mu.orbit_length();
  const long len = static_cast<long>(w.size());
  if (base < 0 || n - 1 + base + len > static_cast<long>(orbit.size()))
    fail(ErrorKind::Validation, "cylinder reaches beyond the empirical orbit");
  std::uint64_t count = 0;
  for (long j = 0; j < n; ++j) {
    if (std::equal(w.begin(), w.end(), orbit.begin() + j + base)) ++count;
  }
  return count;
}

}  // namespace

double word_mass(const MeasureModel& mu, const Word& w) { return cylinder_mass(mu, {0, w}); }

double cylinder_mass(const MeasureModel& mu, const CylinderSet& c) {
  const Word& w = c.word;
  for (Symbol a : w)
    if (a >= mu.size()) fail(ErrorKind::Admissibility, "cylinder symbol outside the measure's alphabet");
  if (w.empty()) return 1.0;
  switch (mu.kind()) {
    case MeasureKind::Bernoulli: {
      double v = 1.0;
      for (Symbol a : w) v *= mu.p()[a];
      return v;
    }
    case MeasureKind::Markov: {
      double v = mu.pi()[w[0]];
      for (std::size_t i = 1; i < w.size(); ++i) v *= mu.transition(w[i - 1], w[i]);
      return v;
    }
    case MeasureKind::Empirical:
      return static_cast<double>(empirical_count(mu, c.base, w)) / mu.orbit_length();
  }
  return 0.0;
}

std::optional<Rational> word_mass_exact(const MeasureModel& mu, const Word& w) {
  return cylinder_mass_exact(mu, {0, w});
}

std::optional<Rational> cylinder_mass_exact(const MeasureModel& mu, const CylinderSet& c) {
  if (!mu.exact()) return std::nullopt;
  const Word& w = c.word;
  for (Symbol a : w)
    if (a >= mu.size()) fail(ErrorKind::Admissibility, "cylinder symbol outside the measure's alphabet");
  if (w.empty()) return Rational(1);
  switch (mu.kind()) {
    case MeasureKind::Bernoulli: {
      Rational v = 1;
      for (Symbol a : w) v *= mu.exact_p()[a];
      return v;
    }
    case MeasureKind::Markov: {
      Rational v = mu.exact_pi()[w[0]];
      for (std::size_t i = 1; i < w.size(); ++i) v *= mu.exact_transition(w[i - 1], w[i]);
      return v;
    }
    case MeasureKind::Empirical:
      return Rational(BigInt(empirical_count(mu, c.base, w)), BigInt(mu.orbit_length()));
  }
  return std::nullopt;
}

double extension_mass(const MeasureModel& mu, Symbol last, const Word& tail) {
  double v = 1.0;
  switch (mu.kind()) {
    case MeasureKind::Bernoulli:
      for (Symbol a : tail) v *= mu.p()[a];
      return v;
    case MeasureKind::Markov: {
      Symbol prev = last;
      for (Symbol a : tail) {
        v *= mu.transition(prev, a);
        prev = a;
      }
      return v;
    }
    case MeasureKind::Empirical:
      break;
  }
  fail(ErrorKind::Unsupported, "conditional masses are not defined for empirical measures");
}

double entropy_rate(const MeasureModel& mu) {
  double h = 0.0;
  switch (mu.kind()) {
    case MeasureKind::Bernoulli:
      for (double p : mu.p()) h -= xlogx(p);
      return h;
    case MeasureKind::Markov:
      for (int a = 0; a < mu.size(); ++a)
        for (int b = 0; b < mu.size(); ++b) h -= mu.pi()[a] * xlogx(mu.transition(a, b));
      return h;
    case MeasureKind::Empirical:
      break;
  }
  fail(ErrorKind::Unsupported, "entropy rate has no closed form for empirical measures");
}

double block_entropy(const MeasureModel& mu, int n) {
  if (n <= 0) return 0.0;
  switch (mu.kind()) {
    case MeasureKind::Bernoulli:
      return n * entropy_rate(mu);
    case MeasureKind::Markov: {
      double h0 = 0.0;
      for (double p : mu.pi()) h0 -= xlogx(p);
      return h0 + (n - 1) * entropy_rate(mu);
    }
    case MeasureKind::Empirical: {
      double h = 0.0;
      for (const auto& [w, p] : marginal(mu, n).mass) h -= xlogx(p);
      return h;
    }
  }
  return 0.0;
}

double MarginalDistribution::at(const Word& w) const {
  auto it = std::lower_bound(mass.begin(), mass.end(), w,
                             [](const std::pair<Word, double>& e, const Word& key) { return e.first < key; });
  return it != mass.end() && it->first == w ? it->second : 0.0;
}

MarginalDistribution marginal(const MeasureModel& mu, int depth, std::uint64_t cap) {
  if (depth < 0) fail(ErrorKind::Validation, "negative marginal depth");
  MarginalDistribution out;
  out.depth = depth;
  if (depth == 0) {
    out.mass.push_back({Word{}, 1.0});
    return out;
  }
  if (mu.kind() == MeasureKind::Empirical) {
    const long n = mu.orbit_length();
    if (n - 1 + depth > static_cast<long>(mu.orbit().size()))
      fail(ErrorKind::Validation, "marginal depth reaches beyond the empirical orbit");
    std::map<Word, std::uint64_t> counts;
    for (long j = 0; j < n; ++j)
      ++counts[Word(mu.orbit().begin() + j, mu.orbit().begin() + j + depth)];
    for (const auto& [w, c] : counts) out.mass.push_back({w, static_cast<double>(c) / n});
    return out;
  }
  const int m = mu.size();
  Word w(depth, 0);
  std::vector<double> prefix(depth + 1, 1.0);
  std::vector<int> next(depth, 0);
  int pos = 0;
  while (pos >= 0) {
    if (next[pos] >= m) {
      next[pos] = 0;
      --pos;
      continue;
    }
    const Symbol a = static_cast<Symbol>(next[pos]++);
    const double step = pos == 0 ? (mu.kind() == MeasureKind::Bernoulli ? mu.p()[a] : mu.pi()[a])
                                 : (mu.kind() == MeasureKind::Bernoulli ? mu.p()[a] : mu.transition(w[pos - 1], a));
    if (step <= 0.0) continue;
    w[pos] = a;
    prefix[pos + 1] = prefix[pos] * step;
    if (pos + 1 == depth) {
      if (out.mass.size() >= cap) fail(ErrorKind::Resource, "enumeration cap " + std::to_string(cap) + " exceeded");
      out.mass.push_back({w, prefix[depth]});
    } else {
      ++pos;
    }
  }
  return out;
}

double marginal_distance(const MeasureModel& mu, const MeasureModel& nu, int depth, std::uint64_t cap) {
  if (mu.size() != nu.size()) fail(ErrorKind::Validation, "measures live on different alphabets");
  double best = 0.0;
  for (int l = 1; l <= depth; ++l) {
    const auto a = marginal(mu, l, cap);
    const auto b = marginal(nu, l, cap);
    std::size_t i = 0, j = 0;
    while (i < a.mass.size() || j < b.mass.size()) {
      if (j == b.mass.size() || (i < a.mass.size() && a.mass[i].first < b.mass[j].first)) {
        best = std::max(best, a.mass[i++].second);
      } else if (i == a.mass.size() || b.mass[j].first < a.mass[i].first) {
        best = std::max(best, b.mass[j++].second);
      } else {
        best = std::max(best, std::abs(a.mass[i++].second - b.mass[j++].second));
      }
    }
  }
  return best;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

namespace {

Symbol draw(std::mt19937_64& gen, const double* weights, int m) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  double cum = 0.0;
  int last = 0;
  for (int a = 0; a < m; ++a) {
    if (weights[a] <= 0.0) continue;
    cum += weights[a];
    last = a;
    if (u < cum) return static_cast<Symbol>(a);
  }
  return static_cast<Symbol>(last);
}

}  // namespace

OrbitSampler::OrbitSampler(const MeasureModel& mu, std::uint64_t seed) : mu_(mu), gen_(seed) {
  if (mu.kind() == MeasureKind::Empirical)
    fail(ErrorKind::Unsupported, "sampling is defined for Bernoulli and Markov measures");
  const int m = mu.size();
  if (mu.kind() == MeasureKind::Markov) {
    rows_.resize(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) rows_[a * m + b] = mu.transition(a, b);
  }
}

Symbol OrbitSampler::next() {
  const int m = mu_.size();
  if (mu_.kind() == MeasureKind::Bernoulli) {
    last_ = draw(gen_, mu_.p().data(), m);
  } else if (!started_) {
    last_ = draw(gen_, mu_.pi().data(), m);
  } else {
    last_ = draw(gen_, rows_.data() + static_cast<std::size_t>(last_) * m, m);
  }
  started_ = true;
  return last_;
}

Word sample_orbit(const MeasureModel& mu, int n, std::uint64_t seed) {
  if (n < 0) fail(ErrorKind::Validation, "negative sample length");
  OrbitSampler sampler(mu, seed);
  Word w(n);
  for (int i = 0; i < n; ++i) w[i] = sampler.next();
  return w;
}

}  // namespace mmd
