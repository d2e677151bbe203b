#pragma once
// Experiment configuration: a schema-versioned JSON document naming the
// system, measure, command and every grid, schedule, seed, cap and output
// path. Unknown keys are rejected; errors name the offending field.

#include "mmd/mdim.hpp"
#include "mmd/measures.hpp"
#include "mmd/symbolic.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mmd {

inline constexpr int kConfigSchemaVersion = 1;

enum class Command { Entropy, Chain31, Chain32, Theorem11, Example46, Cp };
const char* to_string(Command c);

struct SystemConfig {
  int alphabet_size = 2;
  std::optional<std::vector<double>> values;
  SymbolMetric symbol_metric = SymbolMetric::Discrete;
  /// Row-major 0/1 matrix; absent for the full shift.
  std::optional<std::vector<std::uint8_t>> transitions;
  Sidedness sidedness = Sidedness::OneSided;
  SequenceMetric metric;

  ShiftSystem build() const;
};

struct MeasureConfig {
  MeasureKind kind = MeasureKind::Bernoulli;
  /// Entries given as JSON strings ("1/2") are exact rationals; a vector is
  /// either all numbers or all strings.
  std::vector<double> p;
  std::vector<double> pi;
  std::vector<double> transition;
  std::vector<Rational> p_exact;
  std::vector<Rational> pi_exact;
  std::vector<Rational> transition_exact;
  bool exact = false;

  MeasureModel build() const;
};

/// Z for the cp command: depth-L cylinders, or the whole space when absent.
struct LeafSetConfig {
  int depth = 0;
  std::vector<std::string> words;
};

struct Example46Config {
  int first_level = 1;
  int last_level = 5;
  double margin = 1e-6;
  Example46Spec spec;
};

struct OutputConfig {
  std::string dir = ".";
  std::string results = "results.json";
  /// Stem of the CSV file; defaults to the experiment name.
  std::string csv;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name = "experiment";
  Command command = Command::Entropy;
  std::optional<SystemConfig> system;
  std::optional<MeasureConfig> measure;
  std::vector<QuantityId> quantities;
  std::vector<double> eps;
  double tau = 0.05;
  EstimatorSettings settings;
  std::optional<LeafSetConfig> z;
  Example46Config example46;
  OutputConfig output;

  /// Canonical dump of the source document and its FNV-1a digest.
  std::string canonical;
  std::string digest;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace mmd
