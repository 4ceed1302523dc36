#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "convo/correlators.hpp"
#include "convo/generators.hpp"

namespace convo {

enum class ExperimentKind {
  validate,
  sample,
  correlate,
  clt_demo,
  convolution_demo,
  partition_check,
};

// Wire names are hyphenated: "clt-demo", "convolution-demo",
// "partition-check".
const char* experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

// The engine block. `seed` lives here because it is part of the
// reproducibility contract; `n` in the document may be a single count or an
// object keyed by sampling-engine name when the two MC engines need
// different budgets.
struct EngineSettings {
  std::vector<EngineKind> run;
  std::int64_t n_mc = 100000;
  std::int64_t n_semi = 100000;
  int nodes = 60;
  int order = 8;
  std::uint64_t seed = 1;
};

// A fully validated experiment description.
//
// Document schema (strict, unknown keys rejected):
//   spec_version   integer, must be 1
//   experiment     one of the names above
//   dims           {dim_f, r}
//   forms          {b_m, b_g}; each is "identity", a row-major matrix
//                  (nested rows or flat), or {precision_scale} /
//                  {covariance_scale}
//   generators     named preset ("diag2", "zero2"), a list of row-major
//                  matrices, or {dim_f, generators}
//   functionals    list of coefficient vectors (correlate only)
//   engine         {n, seed, nodes, order, run}
//   law            probability vector on {0, 1, ...} (clt-demo only)
//   powers         partial-sum sizes (clt-demo only)
//   output         result path; CLI --out overrides
//
// Which blocks apply depends on the experiment; a block that does not
// belong is rejected like an unknown key. convolution-demo reads b_m and
// b_g as the two forms being convolved (both on dim_f); partition-check
// reads engine.n as the probe count.
//
// `canonical` is the document minus the output path and is what the digest
// covers; `threads` is a CLI-level execution detail, never part of the
// document.
struct ExperimentConfig {
  int spec_version = 1;
  ExperimentKind experiment = ExperimentKind::validate;
  int threads = 1;
  std::string output;

  int dim_f = 0;
  int r = 0;
  Eigen::MatrixXd b_m;
  Eigen::MatrixXd b_g;
  std::optional<GeneratorSet> generators;
  std::vector<Functional> functionals;
  EngineSettings engine;

  std::vector<double> law;
  std::vector<std::int64_t> powers;

  nlohmann::json canonical;
};

// Strict parse: unknown keys anywhere are ConfigError, as are missing
// required fields, wrong types, dimension mismatches, and blocks that do
// not belong to the requested experiment.
ExperimentConfig parse_config(const nlohmann::json& doc);

ExperimentConfig load_config_file(const std::string& path);

std::uint64_t fnv1a64(std::string_view data);

// Hex digest of the canonical form. Stable under key reordering in the
// source file (serialization sorts object keys) and used to tie result
// records back to their configs.
std::string config_digest(const nlohmann::json& canonical);

}  // namespace convo
