#include "mmd/config.hpp"

#include "mmd/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mmd {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::Validation, "config." + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(path, "must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) bad(path.empty() ? key : path + "." + key, "unknown key");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(path, "must be finite");
  return x;
}

long long get_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) bad(path, "must be an integer");
  return v.get<long long>();
}

int get_int(const json& v, const std::string& path, long long lo, long long hi) {
  const long long x = get_integer(v, path);
  if (x < lo || x > hi) bad(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "must be a string");
  return v.get<std::string>();
}

std::vector<int> get_ints(const json& v, const std::string& path, long long lo, long long hi) {
  if (!v.is_array() || v.empty()) bad(path, "must be a nonempty array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_int(v[i], path + "[" + std::to_string(i) + "]", lo, hi));
  return out;
}

std::vector<double> get_numbers(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) bad(path, "must be a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> get_schedule(const json& v, const std::string& path) {
  auto out = get_ints(v, path, 1, 1 << 20);
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) bad(path, "must be strictly increasing");
  return out;
}

// Flattened probability vector or matrix: all numbers, or all rational strings.
void get_probabilities(const json& v, const std::string& path, std::vector<double>& num, std::vector<Rational>& exact,
                       bool& is_exact) {
  if (!v.is_array() || v.empty()) bad(path, "must be a nonempty array");
  std::vector<json> flat;
  for (const auto& row : v) {
    if (row.is_array()) {
      for (const auto& x : row) flat.push_back(x);
    } else {
      flat.push_back(row);
    }
  }
  const bool strings = flat.front().is_string();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (strings) {
      if (!flat[i].is_string()) bad(p, "mix of numbers and rational strings");
      try {
        exact.push_back(parse_rational(flat[i].get<std::string>()));
      } catch (const Error& e) {
        bad(p, e.what());
      }
      num.push_back(to_double(exact.back()));
    } else {
      num.push_back(get_number(flat[i], p));
    }
  }
  is_exact = strings;
}

SystemConfig parse_system(const json& v) {
  const std::string path = "system";
  check_keys(v, path, {"alphabet_size", "values", "symbol_metric", "transitions", "sidedness", "metric", "window"});
  SystemConfig s;
  if (!v.contains("alphabet_size")) bad(join(path, "alphabet_size"), "required");
  s.alphabet_size = get_int(v["alphabet_size"], join(path, "alphabet_size"), 1, 256);
  if (v.contains("values")) {
    s.values = get_numbers(v["values"], join(path, "values"));
    if (static_cast<int>(s.values->size()) != s.alphabet_size) bad(join(path, "values"), "needs alphabet_size entries");
    for (double x : *s.values)
      if (x < 0.0 || x > 1.0) bad(join(path, "values"), "entries must lie in [0, 1]");
  }
  if (v.contains("symbol_metric")) {
    const std::string m = get_string(v["symbol_metric"], join(path, "symbol_metric"));
    if (m == "discrete") s.symbol_metric = SymbolMetric::Discrete;
    else if (m == "euclidean") s.symbol_metric = SymbolMetric::Euclidean;
    else bad(join(path, "symbol_metric"), "expected discrete or euclidean");
  }
  if (v.contains("transitions")) {
    const json& t = v["transitions"];
    const std::string p = join(path, "transitions");
    if (!t.is_array() || static_cast<int>(t.size()) != s.alphabet_size) bad(p, "must be an alphabet_size x alphabet_size matrix");
    std::vector<std::uint8_t> entries;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!t[i].is_array() || static_cast<int>(t[i].size()) != s.alphabet_size)
        bad(p + "[" + std::to_string(i) + "]", "row must have alphabet_size entries");
      for (std::size_t j = 0; j < t[i].size(); ++j)
        entries.push_back(static_cast<std::uint8_t>(
            get_int(t[i][j], p + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", 0, 1)));
    }
    s.transitions = std::move(entries);
  }
  if (v.contains("sidedness")) {
    const std::string x = get_string(v["sidedness"], join(path, "sidedness"));
    if (x == "one_sided") s.sidedness = Sidedness::OneSided;
    else if (x == "two_sided") s.sidedness = Sidedness::TwoSided;
    else bad(join(path, "sidedness"), "expected one_sided or two_sided");
  }
  if (v.contains("metric")) {
    const std::string x = get_string(v["metric"], join(path, "metric"));
    if (x == "first_difference") s.metric.kind = MetricKind::FirstDifference;
    else if (x == "weighted_sum") s.metric.kind = MetricKind::WeightedSum;
    else bad(join(path, "metric"), "expected first_difference or weighted_sum");
  }
  if (v.contains("window")) s.metric.window = get_int(v["window"], join(path, "window"), 1, 1000);
  return s;
}

MeasureConfig parse_measure(const json& v) {
  const std::string path = "measure";
  check_keys(v, path, {"kind", "p", "pi", "transition"});
  MeasureConfig m;
  if (!v.contains("kind")) bad(join(path, "kind"), "required");
  const std::string kind = get_string(v["kind"], join(path, "kind"));
  if (kind == "bernoulli") {
    m.kind = MeasureKind::Bernoulli;
    if (!v.contains("p")) bad(join(path, "p"), "required for bernoulli");
    if (v.contains("pi") || v.contains("transition")) bad(path, "bernoulli takes only p");
    get_probabilities(v["p"], join(path, "p"), m.p, m.p_exact, m.exact);
  } else if (kind == "markov") {
    m.kind = MeasureKind::Markov;
    if (v.contains("p")) bad(join(path, "p"), "markov takes pi and transition");
    if (!v.contains("transition")) bad(join(path, "transition"), "required for markov");
    bool exact_t = false, exact_pi = false;
    get_probabilities(v["transition"], join(path, "transition"), m.transition, m.transition_exact, exact_t);
    if (v.contains("pi")) {
      get_probabilities(v["pi"], join(path, "pi"), m.pi, m.pi_exact, exact_pi);
      if (exact_pi != exact_t) bad(path, "pi and transition must both be numbers or both be rational strings");
    } else if (exact_t) {
      bad(join(path, "pi"), "required with rational transitions");
    }
    m.exact = exact_t;
  } else {
    bad(join(path, "kind"), "expected bernoulli or markov");
  }
  return m;
}

CriticalSpec parse_critical(const json& v, const std::string& path, CriticalSpec base) {
  check_keys(v, path, {"tol", "span", "theta_low", "theta_high"});
  if (v.contains("tol")) base.tol = get_number(v["tol"], join(path, "tol"));
  if (v.contains("span")) base.span = get_int(v["span"], join(path, "span"), 0, 1 << 16);
  if (v.contains("theta_low")) base.theta_low = get_number(v["theta_low"], join(path, "theta_low"));
  if (v.contains("theta_high")) base.theta_high = get_number(v["theta_high"], join(path, "theta_high"));
  if (!(base.tol > 0.0)) bad(join(path, "tol"), "must be positive");
  if (!(base.theta_low > 0.0 && base.theta_low < 1.0 && base.theta_high > 1.0))
    bad(path, "need 0 < theta_low < 1 < theta_high");
  return base;
}

Command parse_command(const std::string& s) {
  if (s == "entropy") return Command::Entropy;
  if (s == "chain31") return Command::Chain31;
  if (s == "chain32") return Command::Chain32;
  if (s == "theorem11") return Command::Theorem11;
  if (s == "example46") return Command::Example46;
  if (s == "cp") return Command::Cp;
  bad("command", "expected entropy, chain31, chain32, theorem11, example46 or cp");
}

bool cp_quantity(QuantityId q) {
  return q == QuantityId::BOWEN_TOP || q == QuantityId::PACKING_TOP || q == QuantityId::BOWEN_MU ||
         q == QuantityId::PACKING_MU || q == QuantityId::PACKING_GENERIC || q == QuantityId::PACKING_INF;
}

bool needs_measure(QuantityId q) {
  return q != QuantityId::SEP_COUNT_RATE && q != QuantityId::BOWEN_TOP && q != QuantityId::PACKING_TOP;
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Entropy: return "entropy";
    case Command::Chain31: return "chain31";
    case Command::Chain32: return "chain32";
    case Command::Theorem11: return "theorem11";
    case Command::Example46: return "example46";
    case Command::Cp: return "cp";
  }
  return "?";
}

ShiftSystem SystemConfig::build() const {
  Alphabet alphabet = values ? Alphabet(*values, symbol_metric) : Alphabet::uniform_grid(alphabet_size, symbol_metric);
  std::optional<TransitionMatrix> sft;
  if (transitions) sft = TransitionMatrix(alphabet_size, *transitions);
  return ShiftSystem(std::move(alphabet), std::move(sft), sidedness, metric);
}

MeasureModel MeasureConfig::build() const {
  if (kind == MeasureKind::Bernoulli) return exact ? MeasureModel::bernoulli(p_exact) : MeasureModel::bernoulli(p);
  if (exact) return MeasureModel::markov(pi_exact, transition_exact);
  if (pi.empty()) return MeasureModel::markov_stationary(transition);
  return MeasureModel::markov(pi, transition);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "",
             {"schema_version", "name", "command", "system", "measure", "quantities", "eps", "delta", "delta_grid",
              "tau", "schedules", "ks_max_depth", "neighbourhoods", "generic", "sampling", "critical", "critical_top",
              "z", "example46", "caps", "threads", "output"});
  ExperimentConfig c;
  if (!doc.contains("schema_version")) bad("schema_version", "required");
  c.schema_version = get_int(doc["schema_version"], "schema_version", 0, 1 << 20);
  if (c.schema_version != kConfigSchemaVersion)
    bad("schema_version", "unsupported version " + std::to_string(c.schema_version) + " (expected " +
                              std::to_string(kConfigSchemaVersion) + ")");
  if (doc.contains("name")) c.name = get_string(doc["name"], "name");
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) bad("name", "must be a nonempty file stem");
  if (!doc.contains("command")) bad("command", "required");
  c.command = parse_command(get_string(doc["command"], "command"));

  if (doc.contains("system")) c.system = parse_system(doc["system"]);
  if (doc.contains("measure")) c.measure = parse_measure(doc["measure"]);

  if (doc.contains("quantities")) {
    const json& q = doc["quantities"];
    if (!q.is_array() || q.empty()) bad("quantities", "must be a nonempty array");
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::string p = "quantities[" + std::to_string(i) + "]";
      try {
        c.quantities.push_back(parse_quantity(get_string(q[i], p)));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Validation) throw;
        bad(p, e.what());
      }
    }
  }
  if (doc.contains("eps")) {
    c.eps = get_numbers(doc["eps"], "eps");
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
      const std::string p = "eps[" + std::to_string(i) + "]";
      if (!(c.eps[i] > 0.0)) bad(p, "must be positive");
      if (is_dyadic(c.eps[i])) bad(p, "dyadic radius " + std::to_string(c.eps[i]) + " is rejected");
    }
  }

  EstimatorSettings& s = c.settings;
  if (doc.contains("delta")) {
    s.delta = get_number(doc["delta"], "delta");
    if (!(s.delta > 0.0 && s.delta < 1.0)) bad("delta", "must lie in (0, 1)");
  }
  if (doc.contains("delta_grid")) {
    s.delta_grid = get_numbers(doc["delta_grid"], "delta_grid");
    for (std::size_t i = 0; i < s.delta_grid.size(); ++i) {
      if (!(s.delta_grid[i] > 0.0 && s.delta_grid[i] < 1.0)) bad("delta_grid", "entries must lie in (0, 1)");
      if (i > 0 && !(s.delta_grid[i] < s.delta_grid[i - 1])) bad("delta_grid", "must be strictly decreasing");
    }
  }
  if (doc.contains("tau")) {
    c.tau = get_number(doc["tau"], "tau");
    if (c.tau < 0.0) bad("tau", "must be nonnegative");
  }
  if (doc.contains("schedules")) {
    const json& v = doc["schedules"];
    check_keys(v, "schedules", {"sep", "ks", "katok", "bk", "ps", "ow", "critical", "critical_top"});
    if (v.contains("sep")) s.sep_schedule = get_schedule(v["sep"], "schedules.sep");
    if (v.contains("ks")) s.ks_schedule = get_schedule(v["ks"], "schedules.ks");
    if (v.contains("katok")) s.katok_schedule = get_schedule(v["katok"], "schedules.katok");
    if (v.contains("bk")) s.bk_schedule = get_schedule(v["bk"], "schedules.bk");
    if (v.contains("ps")) s.ps_schedule = get_schedule(v["ps"], "schedules.ps");
    if (v.contains("ow")) s.ow_schedule = get_schedule(v["ow"], "schedules.ow");
    if (v.contains("critical")) s.critical.n_schedule = get_schedule(v["critical"], "schedules.critical");
    if (v.contains("critical_top")) s.critical_top.n_schedule = get_schedule(v["critical_top"], "schedules.critical_top");
  }
  if (doc.contains("ks_max_depth")) s.ks_max_depth = get_int(doc["ks_max_depth"], "ks_max_depth", 1, 64);
  if (doc.contains("neighbourhoods")) {
    const json& v = doc["neighbourhoods"];
    check_keys(v, "neighbourhoods", {"ells", "etas"});
    if (v.contains("ells")) s.ps_grid.ells = get_ints(v["ells"], "neighbourhoods.ells", 1, 16);
    if (v.contains("etas")) s.ps_grid.etas = get_numbers(v["etas"], "neighbourhoods.etas");
    for (double e : s.ps_grid.etas)
      if (!(e > 0.0)) bad("neighbourhoods.etas", "entries must be positive");
  }
  if (doc.contains("generic")) {
    const json& v = doc["generic"];
    check_keys(v, "generic", {"ells", "etas", "lengths", "count_lengths", "n0"});
    if (v.contains("ells")) s.generic.ells = get_ints(v["ells"], "generic.ells", 1, 16);
    if (v.contains("etas")) s.generic.etas = get_numbers(v["etas"], "generic.etas");
    for (double e : s.generic.etas)
      if (!(e > 0.0)) bad("generic.etas", "entries must be positive");
    if (v.contains("lengths")) s.generic.lengths = get_schedule(v["lengths"], "generic.lengths");
    if (v.contains("count_lengths")) {
      s.generic.count_lengths = get_schedule(v["count_lengths"], "generic.count_lengths");
      if (s.generic.count_lengths.back() > 1000) bad("generic.count_lengths", "lengths above 1000 cannot be counted");
    }
    if (v.contains("n0")) s.generic.n0 = get_int(v["n0"], "generic.n0", 1, 1 << 20);
  }
  if (doc.contains("sampling")) {
    const json& v = doc["sampling"];
    check_keys(v, "sampling", {"seed", "bk_samples", "ow_samples", "ow_horizon"});
    std::uint64_t seed = 1;
    if (v.contains("seed")) {
      if (!v["seed"].is_number_integer() || v["seed"].get<long long>() < 0 && !v["seed"].is_number_unsigned())
        bad("sampling.seed", "must be a nonnegative integer");
      seed = v["seed"].get<std::uint64_t>();
    }
    s.ow.seed = seed;
    if (v.contains("bk_samples")) {
      const int n = get_int(v["bk_samples"], "sampling.bk_samples", 0, 1 << 24);
      if (n > 0) s.bk_sampling = SamplingSpec{n, seed, 0};
    }
    if (v.contains("ow_samples")) s.ow.samples = get_int(v["ow_samples"], "sampling.ow_samples", 1, 1 << 24);
    if (v.contains("ow_horizon")) s.ow.horizon = get_int(v["ow_horizon"], "sampling.ow_horizon", 1, 1 << 30);
  }
  if (doc.contains("critical")) s.critical = parse_critical(doc["critical"], "critical", s.critical);
  if (doc.contains("critical_top")) s.critical_top = parse_critical(doc["critical_top"], "critical_top", s.critical_top);
  if (doc.contains("threads")) s.threads = get_int(doc["threads"], "threads", 0, 4096);

  if (doc.contains("z")) {
    const json& v = doc["z"];
    check_keys(v, "z", {"depth", "words"});
    LeafSetConfig z;
    if (!v.contains("depth") || !v.contains("words")) bad("z", "needs depth and words");
    z.depth = get_int(v["depth"], "z.depth", 1, 64);
    if (!v["words"].is_array() || v["words"].empty()) bad("z.words", "must be a nonempty array");
    for (std::size_t i = 0; i < v["words"].size(); ++i) {
      const std::string p = "z.words[" + std::to_string(i) + "]";
      z.words.push_back(get_string(v["words"][i], p));
      if (static_cast<int>(z.words.back().size()) != z.depth) bad(p, "length must equal z.depth");
    }
    c.z = std::move(z);
  }

  std::uint64_t cap = kDefaultEnumerationCap;
  if (doc.contains("caps")) {
    const json& v = doc["caps"];
    check_keys(v, "caps", {"enumeration"});
    if (v.contains("enumeration")) {
      const json& e = v["enumeration"];
      if (!e.is_number_integer() || (!e.is_number_unsigned() && e.get<long long>() <= 0) ||
          e.get<std::uint64_t>() == 0)
        bad("caps.enumeration", "must be a positive integer");
      cap = v["enumeration"].get<std::uint64_t>();
    }
  }
  c.example46.spec.cap = cap;
  if (doc.contains("example46")) {
    const json& v = doc["example46"];
    const std::string path = "example46";
    check_keys(v, path, {"first_level", "last_level", "margin", "inflate", "deflate", "max_block", "n_schedule", "sidedness"});
    Example46Config& e = c.example46;
    if (v.contains("first_level")) e.first_level = get_int(v["first_level"], "example46.first_level", 1, 7);
    if (v.contains("last_level")) e.last_level = get_int(v["last_level"], "example46.last_level", 1, 7);
    if (v.contains("margin")) e.margin = get_number(v["margin"], "example46.margin");
    if (v.contains("inflate")) e.spec.inflate = get_number(v["inflate"], "example46.inflate");
    if (v.contains("deflate")) e.spec.deflate = get_number(v["deflate"], "example46.deflate");
    if (v.contains("max_block")) e.spec.max_block = get_int(v["max_block"], "example46.max_block", 1, 8);
    if (v.contains("n_schedule")) e.spec.n_schedule = get_schedule(v["n_schedule"], "example46.n_schedule");
    if (v.contains("sidedness")) {
      const std::string x = get_string(v["sidedness"], "example46.sidedness");
      if (x == "one_sided") e.spec.sidedness = Sidedness::OneSided;
      else if (x == "two_sided") e.spec.sidedness = Sidedness::TwoSided;
      else bad("example46.sidedness", "expected one_sided or two_sided");
    }
    if (e.last_level < e.first_level) bad("example46.last_level", "must be >= first_level");
    if (!(e.margin > 0.0)) bad("example46.margin", "must be positive");
    if (!(e.spec.inflate > 1.0)) bad("example46.inflate", "must exceed 1");
    if (!(e.spec.deflate > 0.0 && e.spec.deflate < 1.0)) bad("example46.deflate", "must lie in (0, 1)");
  }

  if (doc.contains("output")) {
    const json& v = doc["output"];
    check_keys(v, "output", {"dir", "results", "csv"});
    if (v.contains("dir")) c.output.dir = get_string(v["dir"], "output.dir");
    if (v.contains("results")) c.output.results = get_string(v["results"], "output.results");
    if (v.contains("csv")) c.output.csv = get_string(v["csv"], "output.csv");
  }
  if (c.output.csv.empty()) c.output.csv = c.name;

  // Command-specific requirements.
  const bool grid_command = c.command == Command::Example46;
  if (!grid_command) {
    if (!c.system) bad("system", "required for " + std::string(to_string(c.command)));
    if (c.eps.empty()) bad("eps", "required for " + std::string(to_string(c.command)));
  }
  switch (c.command) {
    case Command::Entropy:
      if (c.quantities.empty()) bad("quantities", "required for entropy");
      break;
    case Command::Cp:
      if (c.quantities.empty()) c.quantities = {QuantityId::BOWEN_TOP, QuantityId::PACKING_TOP};
      for (QuantityId q : c.quantities)
        if (!cp_quantity(q)) bad("quantities", std::string(to_string(q)) + " is not a Caratheodory-Pesin quantity");
      break;
    case Command::Chain31:
    case Command::Chain32:
      if (!c.quantities.empty()) bad("quantities", "chains fix their own nodes");
      if (c.system->metric.kind != MetricKind::FirstDifference) bad("system.metric", "chains need first_difference");
      if (!c.measure) bad("measure", "required for chains");
      break;
    case Command::Theorem11:
      if (c.quantities.empty()) c.quantities = theorem11_quantities();
      if (c.eps.size() < 4) bad("eps", "theorem11 needs at least 4 grid points");
      for (std::size_t i = 0; i < c.eps.size(); ++i) {
        if (!(c.eps[i] < 1.0)) bad("eps", "theorem11 grid points must be below 1");
        if (i > 0 && !(c.eps[i] < c.eps[i - 1])) bad("eps", "theorem11 grid must be strictly decreasing");
      }
      break;
    case Command::Example46:
      if (c.system || c.measure) bad(c.system ? "system" : "measure", "example46 builds its own grid systems");
      if (!c.eps.empty()) bad("eps", "example46 derives its radii from the levels");
      c.example46.spec.levels = dyadic_levels(c.example46.first_level, c.example46.last_level, c.example46.margin);
      break;
  }
  if (c.command != Command::Example46 && c.command != Command::Chain31 && c.command != Command::Chain32) {
    bool measure_needed = false;
    for (QuantityId q : c.quantities) measure_needed = measure_needed || needs_measure(q);
    if (measure_needed && !c.measure) bad("measure", "required by the requested quantities");
  }
  if (c.z && c.command != Command::Cp) bad("z", "only the cp command takes a set Z");

  // Build once so system and measure errors surface at validation time.
  std::string stage = "system";
  try {
    if (c.system) {
      const ShiftSystem sys = c.system->build();
      if (c.measure) {
        stage = "measure";
        const MeasureModel mu = c.measure->build();
        require_supported(mu, sys);
      }
      if (c.z) {
        stage = "z";
        std::vector<Word> words;
        for (const auto& w : c.z->words) words.push_back(parse_word(w));
        (void)LeafSet::cylinders(sys, c.z->depth, words);
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Resource) throw;
    bad(stage, e.what());
  }

  c.canonical = doc.dump();
  c.digest = fnv1a_hex(c.canonical);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Validation, "config " + path + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace mmd
