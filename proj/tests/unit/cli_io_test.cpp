#include "mmd/config.hpp"
#include "mmd/errors.hpp"
#include "mmd/results.hpp"
#include "mmd/runner.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace mmd;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "schema_version": 1, "name": "minimal", "command": "entropy",
    "system": {"alphabet_size": 2},
    "measure": {"kind": "bernoulli", "p": ["1/2", "1/2"]},
    "quantities": ["BK_UPPER"], "eps": [0.3]
  })");
}

std::string validation_message(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    return e.what();
  }
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("mmd_unit_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("minimal config parses") {
  const auto c = parse_config(minimal());
  CHECK(c.command == Command::Entropy);
  CHECK(c.quantities == std::vector<QuantityId>{QuantityId::BK_UPPER});
  CHECK(c.measure->exact);
  CHECK(c.output.csv == "minimal");
  CHECK(c.digest == fnv1a_hex(c.canonical));
  CHECK(c.digest.size() == 16);
}

TEST_CASE("config errors name the offending field") {
  auto doc = minimal();
  doc["colour"] = "blue";
  CHECK(validation_message(doc).find("colour") != std::string::npos);

  doc = minimal();
  doc["system"]["alphabet"] = 2;
  CHECK(validation_message(doc).find("system.alphabet") != std::string::npos);

  doc = minimal();
  doc["eps"] = {0.25};
  CHECK(validation_message(doc).find("eps[0]") != std::string::npos);

  doc = minimal();
  doc["schema_version"] = 7;
  CHECK(validation_message(doc).find("schema_version") != std::string::npos);

  doc = minimal();
  doc["measure"]["p"] = {0.6, 0.6};
  CHECK(validation_message(doc).find("measure") != std::string::npos);

  doc = minimal();
  doc["quantities"] = {"NOT_A_QUANTITY"};
  CHECK(validation_message(doc).find("quantities[0]") != std::string::npos);

  doc = minimal();
  doc["caps"] = {{"enumeration", 0}};
  CHECK(validation_message(doc).find("caps.enumeration") != std::string::npos);

  doc = minimal();
  doc["command"] = "example46";
  CHECK(validation_message(doc).find("system") != std::string::npos);

  doc = minimal();
  doc["command"] = "theorem11";
  CHECK(validation_message(doc).find("eps") != std::string::npos);
}

TEST_CASE("fnv1a digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("result records round-trip through JSON") {
  ResultRecord r;
  r.config_digest = "0123456789abcdef";
  r.quantity = "KATOK_UPPER";
  r.eps = 0.3;
  r.params.delta = 0.2;
  r.params.seed = 12345678901234ull;
  r.trace = {{64, 0.51234567890123}, {128, std::numeric_limits<double>::infinity()}};
  r.value = 0.1 + 0.2;
  r.bounds = Interval{-std::numeric_limits<double>::infinity(), 1.0 / 3.0};
  r.mode = "certified";
  r.family = "depth-3 cylinders";
  r.version = library_version();
  const ResultRecord back = record_from_json(json::parse(to_json(r).dump()));
  CHECK(back == r);
  CHECK(to_json(r)["units"] == "nats");

  ResultRecord plain = r;
  plain.bounds.reset();
  plain.params = {};
  CHECK(record_from_json(json::parse(to_json(plain).dump())) == plain);
}

TEST_CASE("empty results are still a valid document") {
  const json doc = results_document("x", "entropy", "d", {}, json::object());
  const json back = json::parse(dump_json(doc));
  CHECK(back["records"].is_array());
  CHECK(back["records"].empty());
  CHECK(back["schema_version"] == kResultsSchemaVersion);
}

TEST_CASE("CSV rows carry a fixed header") {
  const std::string text = csv_text({{0.3, "PS", 0.5, 0.4, std::nullopt, std::nullopt, "certified"}});
  CHECK(text.rfind("epsilon,quantity,value,ratio,lo,hi,mode\n", 0) == 0);
  CHECK(text == "epsilon,quantity,value,ratio,lo,hi,mode\n0.29999999999999999,PS,0.5,0.40000000000000002,,,certified\n");
}

TEST_CASE("atomic writes") {
  const auto dir = scratch("atomic");
  const std::string path = (dir / "nested" / "out.txt").string();
  write_atomic(path, "one");
  write_atomic(path, "two");
  CHECK(slurp(path) == "two");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  try {
    write_atomic("/proc/mmd_cannot_write/out.txt", "x");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("running the minimal config") {
  auto c = parse_config(minimal());
  const auto dir = scratch("run");
  c.output.dir = dir.string();
  const RunOutcome a = run_experiment(c);
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.files.size() == 2);
  const json doc = json::parse(slurp(a.files[0]));
  REQUIRE(doc["records"].size() == 1);
  const ResultRecord rec = record_from_json(doc["records"][0]);
  CHECK(rec.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(rec.config_digest == c.digest);
  const std::string first = slurp(a.files[0]) + slurp(a.files[1]);
  const RunOutcome b = run_experiment(c);
  CHECK(slurp(b.files[0]) + slurp(b.files[1]) == first);
  std::filesystem::remove_all(dir);
}

TEST_CASE("chain run writes a report and exits cleanly") {
  auto doc = minimal();
  doc.erase("quantities");
  doc["command"] = "chain31";
  doc["name"] = "chain";
  auto c = parse_config(doc);
  const auto dir = scratch("chain");
  c.output.dir = dir.string();
  const RunOutcome r = run_experiment(c);
  CHECK(r.exit_code == 0);
  const json out = json::parse(slurp(r.files[0]));
  CHECK(out["reports"]["chains"].size() == 1);
  CHECK(out["reports"]["chains"][0]["passed"] == true);
  std::filesystem::remove_all(dir);
}

TEST_CASE("slope run writes one CSV row per quantity and radius") {
  auto doc = minimal();
  doc["command"] = "theorem11";
  doc["name"] = "slopes";
  doc["quantities"] = {"KS_EPS", "BK_UPPER"};
  doc["eps"] = {0.3, 0.15, 0.07, 0.03};
  auto c = parse_config(doc);
  const auto dir = scratch("slopes");
  c.output.dir = dir.string();
  const RunOutcome r = run_experiment(c);
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(r.files[1]);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("library errors map to exit codes") {
  CHECK(exit_code_for(ErrorKind::Validation) == 2);
  CHECK(exit_code_for(ErrorKind::RejectedRadius) == 2);
  CHECK(exit_code_for(ErrorKind::Resource) == 3);
  CHECK(exit_code_for(ErrorKind::Bracket) == 4);
  CHECK(exit_code_for(ErrorKind::EmptyApproximation) == 4);
  CHECK(exit_code_for(ErrorKind::Io) == 1);

  auto doc = minimal();
  doc["system"] = {{"alphabet_size", 3}};
  doc["measure"] = {{"kind", "bernoulli"}, {"p", {0.5, 0.3, 0.2}}};
  doc["quantities"] = {"PACKING_GENERIC"};
  doc["generic"] = {{"lengths", {30}}};
  auto c = parse_config(doc);
  c.output.dir = scratch("cap").string();
  const RunOutcome r = run_experiment(c);
  CHECK(r.exit_code == 3);
  CHECK_FALSE(r.message.empty());
}
