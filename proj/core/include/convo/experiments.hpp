#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "convo/config.hpp"

namespace convo {

// Outcome of one experiment run: a JSON payload plus the metadata that ties
// it to its config. `pass` reflects the experiment's own acceptance (a
// validation that failed, a partition deviation out of tolerance); runs
// that cannot even start throw instead.
struct ResultRecord {
  std::string config_digest;
  ExperimentKind experiment = ExperimentKind::validate;
  std::uint64_t seed = 0;
  bool pass = true;
  nlohmann::json payload;
  double wall_time_ms = 0.0;

  nlohmann::json to_json() const;

  // Flat sweep table ("x,value,stderr,method"), empty when the experiment
  // has no natural table.
  std::string csv() const;
};

// Execute the experiment described by the config. ConfigError and
// ConditionViolation propagate for genuinely unrunnable setups; expected
// negative outcomes (failed validation, failed identity check) come back
// as pass = false with diagnostics in the payload.
ResultRecord run(const ExperimentConfig& cfg);

// The correlate experiment with at least two engines: runs each engine and
// cross-tabulates the estimates. ConfigError when fewer than two engines
// are requested.
ResultRecord compare_engines(const ExperimentConfig& cfg);

// Atomically write record JSON to json_path (temp file + rename), plus a
// sibling .csv when the record has a table. Creates parent directories.
void write_result_files(const ResultRecord& record,
                        const std::string& json_path);

}  // namespace convo
