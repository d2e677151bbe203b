#pragma once
// Result records, their JSON form, plot-ready CSV rows and atomic file output.

#include "mmd/estimate.hpp"
#include "mmd/mdim.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mmd {

inline constexpr int kResultsSchemaVersion = 1;

const char* library_version();

/// One estimator output. Values are in nats.
struct ResultRecord {
  std::string config_digest;
  std::string quantity;
  double eps = 0.0;
  EstimateParams params;
  Trace trace;
  double value = 0.0;
  std::optional<Interval> bounds;
  std::string mode;
  std::string family;
  std::string version;

  bool operator==(const ResultRecord& other) const;
};

ResultRecord make_record(const EntropyEstimate& est, const std::string& digest);

nlohmann::json to_json(const ResultRecord& r);
ResultRecord record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ChainReport& r);
nlohmann::json to_json(const SlopeReport& r);
nlohmann::json to_json(const Theorem11Report& r);
nlohmann::json to_json(const Example46Report& r);

/// Columns epsilon, quantity, value, ratio, lo, hi, mode.
struct CsvRow {
  double eps = 0.0;
  std::string quantity;
  double value = 0.0;
  std::optional<double> ratio;
  std::optional<double> lo;
  std::optional<double> hi;
  std::string mode;
};

std::string csv_text(const std::vector<CsvRow>& rows);

std::vector<CsvRow> csv_rows(const std::vector<ResultRecord>& records);
std::vector<CsvRow> csv_rows(const ChainReport& r);
std::vector<CsvRow> csv_rows(const SlopeReport& r);
std::vector<CsvRow> csv_rows(const Example46Report& r);

/// The results document: schema version, version, digest, records and any
/// reports keyed by name.
nlohmann::json results_document(const std::string& name, const std::string& command, const std::string& digest,
                                const std::vector<ResultRecord>& records, const nlohmann::json& reports);

/// Deterministic serialisation used for every output file.
std::string dump_json(const nlohmann::json& j);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace mmd
