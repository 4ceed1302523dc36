#include "convo/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "convo/discrete.hpp"
#include "convo/errors.hpp"
#include "convo/interacting_measure.hpp"
#include "convo/tolerances.hpp"
#include "convo/version.hpp"

namespace convo {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

InteractingMeasure build_from_config(const ExperimentConfig& cfg) {
  GaussianMeasure field{QuadraticForm(cfg.b_m)};
  GaussianMeasure coupling{QuadraticForm(cfg.b_g)};
  InteractionMap zeta = InteractionMap::exponential(*cfg.generators);
  return build_interacting_measure(std::move(field), std::move(coupling),
                                   std::move(zeta));
}

nlohmann::json run_validate(const ExperimentConfig& cfg, bool& pass) {
  const GeneratorValidation report = validate_generators(*cfg.generators);
  nlohmann::json payload;
  payload["generator_validation"] = report.to_json();
  pass = report.pass;
  if (!report.pass) {
    payload["reason"] = "generator family failed validation";
    return payload;
  }
  try {
    const InteractingMeasure m = build_from_config(cfg);
    const PartitionReport partition = partition_identity_check(
        m, static_cast<int>(cfg.engine.n_mc), cfg.engine.seed);
    payload["partition"] = partition.to_json();
    payload["normalization"] = m.normalization();
    const bool partition_ok =
        partition.max_abs_deviation <= tol::kXiDetSpread;
    payload["partition_ok"] = partition_ok;
    pass = partition_ok;
  } catch (const ConditionViolation& err) {
    payload["reason"] = err.what();
    payload["violated_condition"] = err.condition();
    pass = false;
  }
  return payload;
}

nlohmann::json run_sample(const ExperimentConfig& cfg) {
  const InteractingMeasure m = build_from_config(cfg);
  const SampleBatch batch =
      sample_interacting(m, cfg.engine.n_mc, cfg.engine.seed, cfg.threads);
  nlohmann::json payload;
  payload["n"] = batch.size();
  payload["rejected"] = batch.rejected;
  payload["mean"] = vector_to_json(empirical_mean(batch));
  payload["covariance"] = matrix_to_json(empirical_covariance(batch));
  payload["covariance_std_error"] =
      matrix_to_json(empirical_covariance_error(batch));
  return payload;
}

struct EngineTable {
  nlohmann::json estimates = nlohmann::json::array();
  nlohmann::json comparisons = nlohmann::json::array();
  bool all_consistent = true;
  std::vector<CorrelatorEstimate> raw;
};

EngineTable run_engines(const ExperimentConfig& cfg) {
  const InteractingMeasure m = build_from_config(cfg);
  const EngineSettings& engine = cfg.engine;
  EngineTable table;
  for (const EngineKind kind : engine.run) {
    CorrelatorEstimate est;
    switch (kind) {
      case EngineKind::mc:
        est = mc_correlator(m, cfg.functionals, engine.n_mc, engine.seed,
                            cfg.threads);
        break;
      case EngineKind::semi_analytic:
        est = semi_analytic_correlator(m, cfg.functionals, engine.n_semi,
                                       engine.seed, cfg.threads);
        break;
      case EngineKind::quadrature:
        est = two_point_quadrature(m, cfg.functionals.at(0),
                                   cfg.functionals.at(1), engine.nodes);
        break;
      case EngineKind::perturbative:
        est = two_point_perturbative(m, cfg.functionals.at(0),
                                     cfg.functionals.at(1), engine.order);
        break;
    }
    table.estimates.push_back(est.to_json());
    table.raw.push_back(est);
  }

  // Pairwise agreement: statistical pairs are compared in combined standard
  // errors, deterministic pairs in relative terms.
  for (std::size_t i = 0; i < table.raw.size(); ++i) {
    for (std::size_t j = i + 1; j < table.raw.size(); ++j) {
      const CorrelatorEstimate& a = table.raw[i];
      const CorrelatorEstimate& b = table.raw[j];
      const double delta = std::abs(a.value - b.value);
      const double sigma = std::hypot(a.std_error, b.std_error);
      nlohmann::json row;
      row["a"] = engine_name(a.method);
      row["b"] = engine_name(b.method);
      row["abs_delta"] = delta;
      row["combined_std_error"] = sigma;
      bool flagged;
      if (sigma > 0.0) {
        const double z = delta / sigma;
        row["z"] = z;
        flagged = z > 3.0;
      } else {
        const double scale =
            std::max({std::abs(a.value), std::abs(b.value), 1e-300});
        const double rel = delta / scale;
        row["relative"] = rel;
        flagged = rel > 1e-6;
      }
      row["flagged"] = flagged;
      table.all_consistent = table.all_consistent && !flagged;
      table.comparisons.push_back(std::move(row));
    }
  }
  return table;
}

nlohmann::json run_clt(const ExperimentConfig& cfg, bool& pass) {
  DiscreteLaw base = [&] {
    try {
      return DiscreteLaw(cfg.law);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("law is not a probability law: ") +
                        err.what());
    }
  }();
  if (!(law_variance(base) > 0.0)) {
    throw ConfigError("law has zero variance");
  }
  nlohmann::json rows = nlohmann::json::array();
  double previous = 0.0;
  bool decreasing = true;
  for (std::size_t k = 0; k < cfg.powers.size(); ++k) {
    const std::int64_t n = cfg.powers[k];
    const double dist = partial_sum_clt_distance(base, n);
    rows.push_back({{"n", n}, {"kolmogorov_distance", dist}});
    if (k > 0 && dist >= previous) decreasing = false;
    previous = dist;
  }
  nlohmann::json payload;
  payload["law"] = cfg.law;
  payload["rows"] = rows;
  payload["decreasing"] = decreasing;
  payload["final_distance"] = previous;
  pass = decreasing;
  return payload;
}

nlohmann::json run_convolution(const ExperimentConfig& cfg, bool& pass) {
  const GaussianMeasure mu_a{QuadraticForm(cfg.b_m)};
  const GaussianMeasure mu_b{QuadraticForm(cfg.b_g)};
  const GaussianMeasure conv = classical_convolution(mu_a, mu_b);
  const SampleBatch batch = pushforward_sum_sample(
      mu_a, mu_b, cfg.engine.n_mc, cfg.engine.seed, cfg.threads);
  const Eigen::MatrixXd empirical = empirical_covariance(batch);
  const Eigen::MatrixXd se = empirical_covariance_error(batch);

  double max_z = 0.0;
  for (Eigen::Index i = 0; i < empirical.rows(); ++i) {
    for (Eigen::Index j = 0; j < empirical.cols(); ++j) {
      if (se(i, j) > 0.0) {
        max_z = std::max(
            max_z, std::abs(empirical(i, j) - conv.covariance()(i, j)) /
                       se(i, j));
      }
    }
  }

  nlohmann::json payload;
  payload["analytic_covariance"] = matrix_to_json(conv.covariance());
  payload["empirical_covariance"] = matrix_to_json(empirical);
  payload["empirical_std_error"] = matrix_to_json(se);
  payload["n"] = batch.size();
  payload["max_z"] = max_z;
  // Largest standardized deviation over dim^2 entries; 5 sigma is a loose
  // sanity gate, not a statistical test.
  pass = max_z <= 5.0;
  return payload;
}

nlohmann::json run_partition(const ExperimentConfig& cfg, bool& pass) {
  const InteractingMeasure m = build_from_config(cfg);
  const PartitionReport report = partition_identity_check(
      m, static_cast<int>(cfg.engine.n_mc), cfg.engine.seed);
  nlohmann::json payload;
  payload["partition"] = report.to_json();
  pass = report.max_abs_deviation <= tol::kXiDetSpread;
  payload["tolerance"] = tol::kXiDetSpread;
  return payload;
}

}  // namespace

nlohmann::json ResultRecord::to_json() const {
  return {{"spec_version", kSpecVersion},
          {"library_version", kLibraryVersion},
          {"experiment", experiment_name(experiment)},
          {"config_digest", config_digest},
          {"seed", seed},
          {"pass", pass},
          {"payload", payload},
          {"wall_time_ms", wall_time_ms}};
}

std::string ResultRecord::csv() const {
  std::ostringstream out;
  out.precision(17);
  if (experiment == ExperimentKind::correlate &&
      payload.contains("estimates")) {
    out << "x,value,stderr,method\n";
    for (const auto& est : payload["estimates"]) {
      // x is the engine's sweep coordinate: draws or nodes, except for the
      // perturbative engine where it is the truncation order.
      const std::int64_t x = est["order"].is_null()
                                 ? est["n"].get<std::int64_t>()
                                 : est["order"].get<std::int64_t>();
      out << x << "," << est["value"].get<double>() << ","
          << est["stderr"].get<double>() << ","
          << est["method"].get<std::string>() << "\n";
    }
    return out.str();
  }
  if (experiment == ExperimentKind::clt_demo && payload.contains("rows")) {
    out << "x,value,stderr,method\n";
    for (const auto& row : payload["rows"]) {
      out << row["n"].get<std::int64_t>() << ","
          << row["kolmogorov_distance"].get<double>() << ",0,"
          << "exact_convolution\n";
    }
    return out.str();
  }
  return {};
}

ResultRecord run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord record;
  record.config_digest = config_digest(cfg.canonical);
  record.experiment = cfg.experiment;
  record.seed = cfg.engine.seed;

  switch (cfg.experiment) {
    case ExperimentKind::validate:
      record.payload = run_validate(cfg, record.pass);
      break;
    case ExperimentKind::sample:
      record.payload = run_sample(cfg);
      break;
    case ExperimentKind::correlate: {
      EngineTable table = run_engines(cfg);
      record.payload["estimates"] = std::move(table.estimates);
      record.payload["comparisons"] = std::move(table.comparisons);
      record.payload["all_consistent"] = table.all_consistent;
      // Disagreement between engines is a finding, not a failure: the
      // perturbative engine diverging at strong coupling is expected.
      record.pass = true;
      break;
    }
    case ExperimentKind::clt_demo:
      record.payload = run_clt(cfg, record.pass);
      break;
    case ExperimentKind::convolution_demo:
      record.payload = run_convolution(cfg, record.pass);
      break;
    case ExperimentKind::partition_check:
      record.payload = run_partition(cfg, record.pass);
      break;
  }

  const auto end = std::chrono::steady_clock::now();
  record.wall_time_ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  return record;
}

ResultRecord compare_engines(const ExperimentConfig& cfg) {
  if (cfg.experiment != ExperimentKind::correlate) {
    throw ConfigError(
        "compare_engines requires experiment = correlate");
  }
  if (cfg.engine.run.size() < 2) {
    throw ConfigError(
        "compare_engines requires at least two engines in engine.run");
  }
  return run(cfg);
}

void write_result_files(const ResultRecord& record,
                        const std::string& json_path) {
  namespace fs = std::filesystem;
  const fs::path target(json_path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }

  const auto write_atomic = [](const fs::path& path,
                               const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw std::runtime_error("cannot write to '" + tmp.string() + "'");
      }
      out << content;
      if (!out.flush()) {
        throw std::runtime_error("short write to '" + tmp.string() + "'");
      }
    }
    fs::rename(tmp, path);
  };

  write_atomic(target, record.to_json().dump(2) + "\n");
  const std::string table = record.csv();
  if (!table.empty()) {
    fs::path csv_path = target;
    csv_path.replace_extension(".csv");
    write_atomic(csv_path, table);
  }
}

}  // namespace convo
