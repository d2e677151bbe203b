#include "mmd/results.hpp"

#include "mmd/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#ifndef MMD_VERSION
#define MMD_VERSION "dev"
#endif

namespace mmd {

using nlohmann::json;

namespace {

// Non-finite values travel as strings so the document stays valid JSON.
json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(ErrorKind::Validation, "expected a number in results document");
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

json interval(const std::optional<Interval>& iv) {
  if (!iv) return nullptr;
  return json{{"lo", num(iv->lo)}, {"hi", num(iv->hi)}};
}

json trace_json(const Trace& t) {
  json out = json::array();
  for (const auto& [n, v] : t) out.push_back(json::array({num(n), num(v)}));
  return out;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<double> ratio_of(double value, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) return std::nullopt;
  return value / std::log(1.0 / eps);
}

}  // namespace

const char* library_version() { return MMD_VERSION; }

bool ResultRecord::operator==(const ResultRecord& o) const {
  if (config_digest != o.config_digest || quantity != o.quantity || !same(eps, o.eps) || !same(value, o.value) ||
      mode != o.mode || family != o.family || version != o.version)
    return false;
  if (params.delta != o.params.delta || params.ell != o.params.ell || params.eta != o.params.eta ||
      params.samples != o.params.samples || params.seed != o.params.seed || params.depth != o.params.depth)
    return false;
  if (bounds.has_value() != o.bounds.has_value()) return false;
  if (bounds && (!same(bounds->lo, o.bounds->lo) || !same(bounds->hi, o.bounds->hi))) return false;
  if (trace.size() != o.trace.size()) return false;
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (!same(trace[i].first, o.trace[i].first) || !same(trace[i].second, o.trace[i].second)) return false;
  return true;
}

ResultRecord make_record(const EntropyEstimate& est, const std::string& digest) {
  ResultRecord r;
  r.config_digest = digest;
  r.quantity = to_string(est.quantity);
  r.eps = est.eps;
  r.params = est.params;
  r.trace = est.trace;
  r.value = est.value;
  r.bounds = est.bounds;
  r.mode = to_string(est.mode);
  r.family = est.family;
  r.version = library_version();
  return r;
}

json to_json(const ResultRecord& r) {
  json params = json::object();
  if (r.params.delta) params["delta"] = num(*r.params.delta);
  if (r.params.ell) params["ell"] = *r.params.ell;
  if (r.params.eta) params["eta"] = num(*r.params.eta);
  if (r.params.samples) params["samples"] = *r.params.samples;
  if (r.params.seed) params["seed"] = *r.params.seed;
  if (r.params.depth) params["depth"] = *r.params.depth;
  return json{{"config_digest", r.config_digest},
              {"quantity", r.quantity},
              {"eps", num(r.eps)},
              {"params", params},
              {"trace", trace_json(r.trace)},
              {"value", num(r.value)},
              {"bounds", interval(r.bounds)},
              {"mode", r.mode},
              {"family", r.family},
              {"units", "nats"},
              {"version", r.version}};
}

ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  try {
    r.config_digest = j.at("config_digest").get<std::string>();
    r.quantity = j.at("quantity").get<std::string>();
    r.eps = read_num(j.at("eps"));
    const json& p = j.at("params");
    if (p.contains("delta")) r.params.delta = read_num(p["delta"]);
    if (p.contains("ell")) r.params.ell = p["ell"].get<int>();
    if (p.contains("eta")) r.params.eta = read_num(p["eta"]);
    if (p.contains("samples")) r.params.samples = p["samples"].get<int>();
    if (p.contains("seed")) r.params.seed = p["seed"].get<std::uint64_t>();
    if (p.contains("depth")) r.params.depth = p["depth"].get<int>();
    for (const auto& pt : j.at("trace")) r.trace.push_back({read_num(pt.at(0)), read_num(pt.at(1))});
    r.value = read_num(j.at("value"));
    if (!j.at("bounds").is_null()) r.bounds = Interval{read_num(j["bounds"].at("lo")), read_num(j["bounds"].at("hi"))};
    r.mode = j.at("mode").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.version = j.at("version").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Validation, std::string("malformed result record: ") + e.what());
  }
  return r;
}

json to_json(const ChainReport& r) {
  auto node = [](const ChainNode& n) {
    return json{{"quantity", n.quantity}, {"eps_arg", n.eps_label}, {"eps", num(n.eps)},
                {"value", num(n.value)},  {"mode", to_string(n.mode)}, {"family", n.family}};
  };
  json nodes = json::array(), links = json::array();
  for (const auto& n : r.nodes) nodes.push_back(node(n));
  for (const auto& l : r.links)
    links.push_back(json{{"lhs", l.lhs.quantity + "(" + l.lhs.eps_label + ")"},
                         {"rhs", l.rhs.quantity + "(" + l.rhs.eps_label + ")"},
                         {"lhs_value", num(l.lhs.value)},
                         {"rhs_value", num(l.rhs.value)},
                         {"lhs_mode", to_string(l.lhs.mode)},
                         {"rhs_mode", to_string(l.rhs.mode)},
                         {"slack", num(l.slack)},
                         {"pass", l.pass}});
  return json{{"name", r.name},   {"eps", num(r.eps)},         {"tau", num(r.tau)},
              {"nodes", nodes},   {"links", links},            {"passed", r.passed()},
              {"failures", r.failures()}};
}

json to_json(const SlopeReport& r) {
  json eps = json::array(), values = json::array(), ratios = json::array(), modes = json::array(),
       bounds = json::array();
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    eps.push_back(num(r.eps[i]));
    values.push_back(num(r.values[i]));
    ratios.push_back(num(r.ratios[i]));
    modes.push_back(to_string(r.modes[i]));
    bounds.push_back(interval(r.bounds[i]));
  }
  return json{{"quantity", r.quantity}, {"eps", eps},
              {"values", values},       {"ratios", ratios},
              {"bounds", bounds},       {"modes", modes},
              {"ratio_finest", num(r.ratio_finest)}, {"slope", num(r.slope)},
              {"upper", num(r.upper)},  {"lower", num(r.lower)}};
}

json to_json(const Theorem11Report& r) {
  json slopes = json::array();
  for (const auto& s : r.slopes) slopes.push_back(to_json(s));
  return json{{"slopes", slopes},
              {"discrepancy", num(r.discrepancy)},
              {"katok_gap", num(r.katok_gap)},
              {"ratio_bound", num(r.ratio_bound)}};
}

json to_json(const Example46Report& r) {
  auto opt_iv = [](const std::optional<Interval>& iv) { return interval(iv); };
  json rows = json::array();
  for (const auto& row : r.rows) {
    json lower_trace = trace_json(row.lower_bracket.lower_trace);
    json upper_trace = trace_json(row.upper_bracket.upper_trace);
    rows.push_back(json{{"m", row.level.m},
                        {"eps", num(row.level.eps)},
                        {"spacing", num(row.spacing)},
                        {"top", interval(row.top)},
                        {"bk", interval(row.bk)},
                        {"top_ratio", opt_iv(row.top_ratio)},
                        {"bk_ratio", opt_iv(row.bk_ratio)},
                        {"ratio_gap", row.ratio_gap ? num(*row.ratio_gap) : json(nullptr)},
                        {"block", row.lower_bracket.block},
                        {"code_size", row.lower_bracket.code_size},
                        {"cover_size", row.upper_bracket.cover_size},
                        {"lower_trace", lower_trace},
                        {"upper_trace", upper_trace},
                        {"bk_upper_trace", trace_json(row.bk_bracket.upper_trace)}});
  }
  json out{{"rows", rows},
           {"monotone", r.monotone},
           {"final_lower_ratio", r.final_lower_ratio ? num(*r.final_lower_ratio) : json(nullptr)},
           {"max_ratio_gap", num(r.max_ratio_gap)}};
  out["top_lower"] = r.top_lower ? to_json(*r.top_lower) : json(nullptr);
  out["top_upper"] = r.top_upper ? to_json(*r.top_upper) : json(nullptr);
  out["bk_upper"] = r.bk_upper ? to_json(*r.bk_upper) : json(nullptr);
  return out;
}

std::string csv_text(const std::vector<CsvRow>& rows) {
  std::string out = "epsilon,quantity,value,ratio,lo,hi,mode\n";
  auto opt = [](const std::optional<double>& x) { return x ? fmt(*x) : std::string(); };
  for (const auto& r : rows)
    out += fmt(r.eps) + "," + r.quantity + "," + fmt(r.value) + "," + opt(r.ratio) + "," + opt(r.lo) + "," +
           opt(r.hi) + "," + r.mode + "\n";
  return out;
}

std::vector<CsvRow> csv_rows(const std::vector<ResultRecord>& records) {
  std::vector<CsvRow> out;
  for (const auto& r : records) {
    CsvRow row{r.eps, r.quantity, r.value, ratio_of(r.value, r.eps), std::nullopt, std::nullopt, r.mode};
    if (r.bounds) {
      row.lo = r.bounds->lo;
      row.hi = r.bounds->hi;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<CsvRow> csv_rows(const ChainReport& r) {
  std::vector<CsvRow> out;
  for (const auto& n : r.nodes)
    out.push_back({n.eps, n.quantity, n.value, ratio_of(n.value, n.eps), std::nullopt, std::nullopt, to_string(n.mode)});
  return out;
}

std::vector<CsvRow> csv_rows(const SlopeReport& r) {
  std::vector<CsvRow> out;
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    CsvRow row{r.eps[i], r.quantity, r.values[i], r.ratios[i], std::nullopt, std::nullopt, to_string(r.modes[i])};
    if (r.bounds[i]) {
      row.lo = r.bounds[i]->lo;
      row.hi = r.bounds[i]->hi;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<CsvRow> csv_rows(const Example46Report& r) {
  std::vector<CsvRow> out;
  for (const auto& row : r.rows) {
    const double eps = row.level.eps;
    out.push_back({eps, "SEP_COUNT_RATE", row.top.lo, ratio_of(row.top.lo, eps), row.top.lo, row.top.hi, "certified"});
    out.push_back({eps, "BK_UPPER", row.bk.hi, ratio_of(row.bk.hi, eps), row.bk.lo, row.bk.hi, "certified"});
  }
  return out;
}

json results_document(const std::string& name, const std::string& command, const std::string& digest,
                      const std::vector<ResultRecord>& records, const json& reports) {
  json recs = json::array();
  for (const auto& r : records) recs.push_back(to_json(r));
  return json{{"schema_version", kResultsSchemaVersion},
              {"library_version", library_version()},
              {"name", name},
              {"command", command},
              {"config_digest", digest},
              {"records", recs},
              {"reports", reports}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  if (ec) fail(ErrorKind::Io, "cannot create directory for " + path + ": " + ec.message());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::Io, "cannot move results into " + path);
  }
}

}  // namespace mmd
