#pragma once
// Executes a parsed experiment and writes its results document and CSV.

#include "mmd/config.hpp"
#include "mmd/errors.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mmd {

/// 0 ok, 1 io, 2 invalid input or unsupported request, 3 resource cap,
/// 4 bracket failure, empty approximation or a failed chain.
int exit_code_for(ErrorKind kind);

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::string> files;
  /// Error text or failing chain links; empty on success.
  std::string message;
  double wall_seconds = 0.0;
  nlohmann::json document;
};

/// Never throws for library errors; they become the exit code and message.
RunOutcome run_experiment(const ExperimentConfig& config);

}  // namespace mmd
