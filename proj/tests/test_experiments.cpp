#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "convo/config.hpp"
#include "convo/errors.hpp"
#include "convo/experiments.hpp"

namespace {

using convo::compare_engines;
using convo::ConfigError;
using convo::ExperimentConfig;
using convo::ExperimentKind;
using convo::parse_config;
using convo::ResultRecord;
using convo::run;
using convo::write_result_files;

nlohmann::json validate_doc(int probes, int seed) {
  nlohmann::json doc;
  doc["spec_version"] = 1;
  doc["experiment"] = "validate";
  doc["dims"] = {{"dim_f", 2}, {"r", 1}};
  doc["generators"] = "diag2";
  doc["engine"] = {{"n", probes}, {"seed", seed}};
  return doc;
}

nlohmann::json trivial_correlate_doc() {
  nlohmann::json doc;
  doc["spec_version"] = 1;
  doc["experiment"] = "correlate";
  doc["dims"] = {{"dim_f", 2}, {"r", 1}};
  doc["generators"] = "zero2";
  doc["functionals"] = {{1.0, 0.0}, {1.0, 0.0}};
  doc["engine"] = {{"n", {{"mc", 50000}, {"semi_analytic_mc", 2000}}},
                   {"nodes", 20},
                   {"order", 4},
                   {"seed", 11}};
  return doc;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("validate passes the diagonal instance") {
  const ResultRecord record = run(parse_config(validate_doc(200, 5)));
  CHECK(record.pass);
  CHECK(record.experiment == ExperimentKind::validate);
  CHECK(record.seed == 5);
  CHECK(record.config_digest.size() == 16);
  CHECK(record.wall_time_ms >= 0.0);
  CHECK(record.payload["generator_validation"]["pass"] == true);
  CHECK(record.payload["partition"]["probes"] == 200);
  CHECK(record.payload["partition_ok"] == true);
  CHECK(record.payload["normalization"] == 1.0);
  CHECK(record.csv().empty());
}

TEST_CASE("validate reports a failed generator family without throwing") {
  nlohmann::json doc = validate_doc(100, 1);
  doc["generators"] = {{"dim_f", 2}, {"generators", {{1.0, 0.0, 0.0, 1.0}}}};
  const ResultRecord record = run(parse_config(doc));
  CHECK_FALSE(record.pass);
  CHECK(record.payload["generator_validation"]["pass"] == false);
  CHECK(record.payload.contains("reason"));
  CHECK_FALSE(record.payload.contains("violated_condition"));
  CHECK_FALSE(record.payload.contains("partition"));
}

TEST_CASE("validate surfaces condition violations with their number") {
  nlohmann::json doc = validate_doc(100, 1);
  // A coupling this wide fails the admissibility probe outright.
  doc["forms"] = {{"b_g", {{"covariance_scale", 1e8}}}};
  const ResultRecord record = run(parse_config(doc));
  CHECK_FALSE(record.pass);
  CHECK(record.payload["violated_condition"] == 3);
  CHECK(record.payload.contains("reason"));
}

TEST_CASE("sample reports free-field statistics for the trivial map") {
  nlohmann::json doc;
  doc["spec_version"] = 1;
  doc["experiment"] = "sample";
  doc["dims"] = {{"dim_f", 2}, {"r", 1}};
  doc["generators"] = "zero2";
  doc["engine"] = {{"n", 20000}, {"seed", 3}};
  const ResultRecord record = run(parse_config(doc));
  CHECK(record.pass);
  CHECK(record.payload["n"] == 20000);
  CHECK(record.payload["rejected"] == 0);
  const double cov00 = record.payload["covariance"][0][0].get<double>();
  const double se00 =
      record.payload["covariance_std_error"][0][0].get<double>();
  CHECK(std::abs(cov00 - 1.0) <= 5.0 * se00);
  CHECK(record.csv().empty());
}

TEST_CASE("correlate runs the requested engines and cross-tabulates") {
  const ResultRecord record = run(parse_config(trivial_correlate_doc()));
  CHECK(record.pass);
  REQUIRE(record.payload["estimates"].size() == 4);
  CHECK(record.payload["comparisons"].size() == 6);
  CHECK(record.payload["all_consistent"] == true);

  for (const auto& est : record.payload["estimates"]) {
    CHECK(est.contains("value"));
    CHECK(est.contains("stderr"));
    CHECK(est.contains("method"));
    CHECK(est.contains("n"));
    CHECK(est.contains("order"));
    if (est["method"] == "mc") CHECK(est["n"] == 50000);
    if (est["method"] == "semi_analytic_mc") CHECK(est["n"] == 2000);
    if (est["method"] == "quadrature") {
      CHECK(est["n"] == 20);
      CHECK(est["order"].is_null());
    }
    if (est["method"] == "perturbative") {
      CHECK(est["n"] == 0);
      CHECK(est["order"] == 4);
    }
    // Trivial interaction: every engine sees the free covariance.
    CHECK(est["value"].get<double>() ==
          doctest::Approx(1.0).epsilon(0.05));
  }

  const std::vector<std::string> lines = split_lines(record.csv());
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "x,value,stderr,method");
  for (const auto& line : lines) {
    if (line.find("perturbative") != std::string::npos) {
      CHECK(line.rfind("4,", 0) == 0);  // x is the truncation order
    }
    if (line.find("quadrature") != std::string::npos) {
      CHECK(line.rfind("20,", 0) == 0);  // x is nodes per dimension
    }
    if (line.find(",mc") != std::string::npos) {
      CHECK(line.rfind("50000,", 0) == 0);  // x is the draw count
    }
  }
}

TEST_CASE("compare_engines needs correlate with at least two engines") {
  nlohmann::json doc = trivial_correlate_doc();
  doc["engine"]["run"] = {"mc"};
  CHECK_THROWS_AS(compare_engines(parse_config(doc)), ConfigError);
  CHECK_THROWS_AS(compare_engines(parse_config(validate_doc(100, 1))),
                  ConfigError);
  doc["engine"]["run"] = {"quadrature", "perturbative"};
  const ResultRecord record = compare_engines(parse_config(doc));
  CHECK(record.payload["estimates"].size() == 2);
  CHECK(record.payload["comparisons"].size() == 1);
  CHECK(record.payload["all_consistent"] == true);
}

TEST_CASE("clt demo walks the partial sums toward the normal law") {
  nlohmann::json doc;
  doc["spec_version"] = 1;
  doc["experiment"] = "clt-demo";
  const ResultRecord record = run(parse_config(doc));
  CHECK(record.pass);
  CHECK(record.payload["decreasing"] == true);
  CHECK(record.payload["final_distance"].get<double>() < 0.05);
  REQUIRE(record.payload["rows"].size() == 3);
  CHECK(record.payload["rows"][0]["n"] == 4);
  CHECK(record.payload["rows"][2]["n"] == 64);
  CHECK(record.payload["law"] == nlohmann::json({0.5, 0.5}));

  const std::vector<std::string> lines = split_lines(record.csv());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "x,value,stderr,method");
  CHECK(lines[1].rfind("4,", 0) == 0);
  CHECK(lines[3].rfind("64,", 0) == 0);
  CHECK(lines[1].find("exact_convolution") != std::string::npos);

  doc["law"] = {0.2, 0.2};
  CHECK_THROWS_AS(run(parse_config(doc)), ConfigError);
  doc["law"] = {1.0, 0.0};
  CHECK_THROWS_AS(run(parse_config(doc)), ConfigError);
}

TEST_CASE("convolution demo matches the analytic covariance") {
  nlohmann::json doc;
  doc["spec_version"] = 1;
  doc["experiment"] = "convolution-demo";
  doc["dims"] = {{"dim_f", 1}};
  doc["forms"] = {{"b_m", {{"covariance_scale", 1.0}}},
                  {"b_g", {{"covariance_scale", 4.0}}}};
  doc["engine"] = {{"n", 100000}, {"seed", 1}};
  const ResultRecord record = run(parse_config(doc));
  CHECK(record.pass);
  CHECK(record.payload["analytic_covariance"][0][0].get<double>() ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(record.payload["max_z"].get<double>() <= 5.0);
  CHECK(record.payload["n"] == 100000);
}

TEST_CASE("partition check sweeps probe draws") {
  nlohmann::json doc;
  doc["spec_version"] = 1;
  doc["experiment"] = "partition-check";
  doc["dims"] = {{"dim_f", 2}, {"r", 1}};
  doc["generators"] = "diag2";
  doc["engine"] = {{"n", 1000}, {"seed", 17}};
  const ResultRecord record = run(parse_config(doc));
  CHECK(record.pass);
  CHECK(record.payload["partition"]["probes"] == 1000);
  CHECK(record.payload["partition"]["max_abs_deviation"].get<double>() <=
        1e-8);
  CHECK(record.payload["tolerance"] == 1e-8);
}

TEST_CASE("records serialize with their metadata and write atomically") {
  namespace fs = std::filesystem;
  const ResultRecord record = run(parse_config(validate_doc(100, 2)));
  const nlohmann::json doc = record.to_json();
  for (const char* key : {"spec_version", "library_version", "experiment",
                          "config_digest", "seed", "pass", "payload",
                          "wall_time_ms"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["experiment"] == "validate");

  const fs::path dir =
      fs::temp_directory_path() / "convo_exp_test" / "nested";
  const fs::path json_path = dir / "result.json";
  write_result_files(record, json_path.string());
  REQUIRE(fs::exists(json_path));
  std::ifstream in(json_path);
  const nlohmann::json loaded = nlohmann::json::parse(in);
  CHECK(loaded["config_digest"] == record.config_digest);
  // Validation runs have no sweep table, so no csv sibling appears.
  CHECK_FALSE(fs::exists(dir / "result.csv"));

  const ResultRecord corr = run(parse_config(trivial_correlate_doc()));
  const fs::path corr_path = dir / "correlate.json";
  write_result_files(corr, corr_path.string());
  REQUIRE(fs::exists(dir / "correlate.csv"));
  std::ifstream csv_in(dir / "correlate.csv");
  std::string header;
  std::getline(csv_in, header);
  CHECK(header == "x,value,stderr,method");

  fs::remove_all(fs::temp_directory_path() / "convo_exp_test");
}

TEST_CASE("runs are identical apart from wall time") {
  ExperimentConfig cfg = parse_config(trivial_correlate_doc());
  nlohmann::json first = run(cfg).to_json();
  nlohmann::json second = run(cfg).to_json();
  cfg.threads = 4;
  nlohmann::json threaded = run(cfg).to_json();
  first.erase("wall_time_ms");
  second.erase("wall_time_ms");
  threaded.erase("wall_time_ms");
  CHECK(first.dump() == second.dump());
  CHECK(first.dump() == threaded.dump());
}

}  // TEST_SUITE
