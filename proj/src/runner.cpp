#include "mmd/runner.hpp"

#include "mmd/caratheodory.hpp"
#include "mmd/results.hpp"

#include <chrono>
#include <filesystem>

namespace mmd {

using nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return 1;
    case ErrorKind::Validation:
    case ErrorKind::RejectedRadius:
    case ErrorKind::Admissibility:
    case ErrorKind::Unsupported:
    case ErrorKind::UnsupportedBackend: return 2;
    case ErrorKind::Resource: return 3;
    case ErrorKind::Bracket:
    case ErrorKind::EmptyApproximation: return 4;
  }
  return 1;
}

namespace {

struct Collected {
  std::vector<ResultRecord> records;
  json reports = json::object();
  std::vector<CsvRow> rows;
  std::string failures;
};

void append(std::vector<CsvRow>& dst, std::vector<CsvRow> src) {
  dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

// Topological quantities ignore the measure; any supported one will do.
MeasureModel uniform_placeholder(int m) {
  return MeasureModel::bernoulli(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
}

EntropyEstimate cp_on_set(QuantityId q, const LeafSet& z, const ShiftSystem& sys, double eps,
                          const EstimatorSettings& s) {
  if (q == QuantityId::BOWEN_TOP) return critical_estimate(bowen_critical(sys, z, eps, s.critical_top), q, eps);
  return critical_estimate(packing_critical(sys, z, eps, s.critical_top), q, eps);
}

Collected collect(const ExperimentConfig& c) {
  Collected out;
  const EstimatorSettings& s = c.settings;
  switch (c.command) {
    case Command::Entropy:
    case Command::Cp: {
      const ShiftSystem sys = c.system->build();
      const MeasureModel mu = c.measure ? c.measure->build() : uniform_placeholder(c.system->alphabet_size);
      std::optional<LeafSet> z;
      if (c.z) {
        std::vector<Word> words;
        for (const auto& w : c.z->words) words.push_back(parse_word(w));
        z = LeafSet::cylinders(sys, c.z->depth, words);
      }
      for (double eps : c.eps)
        for (QuantityId q : c.quantities) {
          const bool on_set = z && (q == QuantityId::BOWEN_TOP || q == QuantityId::PACKING_TOP);
          const EntropyEstimate est = on_set ? cp_on_set(q, *z, sys, eps, s) : estimate_quantity(q, mu, sys, eps, s);
          out.records.push_back(make_record(est, c.digest));
        }
      out.rows = csv_rows(out.records);
      break;
    }
    case Command::Chain31:
    case Command::Chain32: {
      const ShiftSystem sys = c.system->build();
      const MeasureModel mu = c.measure->build();
      json chains = json::array();
      for (double eps : c.eps) {
        const ChainReport r = c.command == Command::Chain31 ? lemma31_chain(mu, sys, eps, c.tau, s)
                                                            : lemma32_chain(mu, sys, eps, c.tau, s);
        for (const auto& f : r.failures()) out.failures += r.name + " eps=" + std::to_string(eps) + ": " + f + "\n";
        chains.push_back(to_json(r));
        append(out.rows, csv_rows(r));
      }
      out.reports["chains"] = chains;
      break;
    }
    case Command::Theorem11: {
      const ShiftSystem sys = c.system->build();
      const MeasureModel mu = c.measure->build();
      const Theorem11Report r = theorem11_experiment(mu, sys, c.eps, c.quantities, s);
      out.reports["dimension_slopes"] = to_json(r);
      for (const auto& slope : r.slopes) append(out.rows, csv_rows(slope));
      break;
    }
    case Command::Example46: {
      const Example46Report r = example46_experiment(c.example46.spec);
      out.reports["grid_family"] = to_json(r);
      out.rows = csv_rows(r);
      break;
    }
  }
  return out;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config) {
  RunOutcome result;
  const auto start = std::chrono::steady_clock::now();
  try {
    Collected got = collect(config);
    result.document = results_document(config.name, to_string(config.command), config.digest, got.records,
                                       got.reports);
    const std::filesystem::path dir(config.output.dir);
    const std::string json_path = (dir / config.output.results).string();
    const std::string csv_path = (dir / (config.output.csv + ".csv")).string();
    write_atomic(json_path, dump_json(result.document));
    write_atomic(csv_path, csv_text(got.rows));
    result.files = {json_path, csv_path};
    if (!got.failures.empty()) {
      result.exit_code = 4;
      result.message = got.failures;
    }
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.kind());
    result.message = std::string(to_string(e.kind())) + ": " + e.what();
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace mmd
