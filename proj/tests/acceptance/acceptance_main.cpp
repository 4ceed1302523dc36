// Acceptance gate: every release-blocking criterion, one line of output
// each. Exits nonzero when any criterion fails. Statistical checks use
// fixed seeds, so a pass here is reproducible, not lucky.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convo/correlators.hpp"
#include "convo/discrete.hpp"
#include "convo/errors.hpp"
#include "convo/gaussian.hpp"
#include "convo/interacting_measure.hpp"
#include "convo/interaction.hpp"
#include "convo/moments.hpp"
#include "../support/oracles.hpp"

#ifndef CONVOMEASURE_BIN
#error "CONVOMEASURE_BIN must point at the CLI binary"
#endif
#ifndef CONVO_CONFIG_DIR
#error "CONVO_CONFIG_DIR must point at the shipped config directory"
#endif

namespace {

using namespace convo;

struct Criterion {
  std::string name;
  double budget_seconds = 0.0;  // 0 disables the runtime check
  std::function<bool(std::string&)> check;
};

bool nearly(double value, double target, double tolerance) {
  return std::abs(value - target) <= tolerance;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

// 1. Classical convolution: variances add exactly; the pushforward sampler
// agrees statistically.
bool classical_convolution_additivity(std::string& detail) {
  Eigen::MatrixXd c1(1, 1), c2(1, 1);
  c1 << 1.0;
  c2 << 4.0;
  const GaussianMeasure mu1 = GaussianMeasure::from_covariance(c1);
  const GaussianMeasure mu2 = GaussianMeasure::from_covariance(c2);
  const GaussianMeasure conv = classical_convolution(mu1, mu2);
  if (conv.covariance()(0, 0) != 5.0) {
    detail = "analytic variance " + fmt(conv.covariance()(0, 0)) +
             " is not exactly 5";
    return false;
  }
  const SampleBatch batch = pushforward_sum_sample(mu1, mu2, 100000, 2001);
  const double emp = empirical_covariance(batch)(0, 0);
  const double se = empirical_covariance_error(batch)(0, 0);
  if (!nearly(emp, 5.0, 5.0 * se)) {
    detail = "pushforward variance " + fmt(emp) + " misses 5 by more than 5 "
             "stderr (" + fmt(se) + ")";
    return false;
  }
  return true;
}

// 2. Partition identity across the named instance and random families.
bool partition_identity(std::string& detail) {
  std::vector<InteractingMeasure> measures;
  measures.push_back(build_interacting_measure(
      GaussianMeasure::standard(2), GaussianMeasure::standard(1),
      InteractionMap::exponential(generator_preset("diag2"))));
  oracles::TestRng rng(902);
  for (int trial = 0; trial < 5; ++trial) {
    const int dim = (trial % 2 == 0) ? 2 : 4;
    const int r = 1 + trial % 2;
    std::vector<Eigen::MatrixXd> gens;
    for (int a = 0; a < r; ++a) gens.push_back(rng.traceless(dim, 0.4));
    measures.push_back(build_interacting_measure(
        GaussianMeasure{QuadraticForm(rng.spd(dim))},
        GaussianMeasure::standard(r),
        InteractionMap::exponential(GeneratorSet(dim, gens))));
  }
  for (std::size_t k = 0; k < measures.size(); ++k) {
    const PartitionReport report =
        partition_identity_check(measures[k], 1000, 7000 + k);
    if (report.max_abs_deviation > 1e-8) {
      detail = "instance " + std::to_string(k) + ": |N det^{-1/2} - 1| = " +
               fmt(report.max_abs_deviation) + " exceeds 1e-8";
      return false;
    }
  }
  return true;
}

// 3. det Xi(A) constant over coordinates for exponential maps; the
// quadratic negative control is flagged as a condition-4 violation.
bool determinant_constancy(std::string& detail) {
  oracles::TestRng rng(903);
  const QuadraticForm b2(rng.spd(2));
  const QuadraticForm b4(rng.spd(4));
  const InteractionMap diag =
      InteractionMap::exponential(generator_preset("diag2"));
  const InteractionMap generic = InteractionMap::exponential(
      GeneratorSet(4, {rng.traceless(4, 0.5), rng.traceless(4, 0.5)}));

  const auto spread = [&](const InteractionMap& zeta, const QuadraticForm& b,
                          int r) {
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd a = rng.vector(r, 1.0);
      const double det = xi_at(zeta, b, a).det;
      if (k == 0) {
        lo = hi = det;
      } else {
        lo = std::min(lo, det);
        hi = std::max(hi, det);
      }
    }
    return (hi - lo) / hi;
  };
  const double s2 = spread(diag, b2, 1);
  const double s4 = spread(generic, b4, 2);
  if (s2 > 1e-8 || s4 > 1e-8) {
    detail = "relative det spread " + fmt(std::max(s2, s4)) + " exceeds 1e-8";
    return false;
  }

  const InteractionMap control = InteractionMap::custom(
      2, 1,
      [](const Eigen::VectorXd& a) {
        return (1.0 + a[0] * a[0]) * Eigen::MatrixXd::Identity(2, 2);
      },
      "quadratic-control");
  try {
    build_interacting_measure(GaussianMeasure::standard(2),
                              GaussianMeasure::standard(1), control);
    detail = "negative control zeta(A) = (1 + A^2) I was not flagged";
    return false;
  } catch (const ConditionViolation& err) {
    if (err.condition() != 4) {
      detail = std::string("negative control flagged condition ") +
               std::to_string(err.condition()) + ", expected 4";
      return false;
    }
  }
  return true;
}

// 4. Zero generators reproduce the free theory: covariance and every
// correlator engine.
bool trivial_reduction(std::string& detail) {
  oracles::TestRng rng(904);
  const GaussianMeasure mu_m{QuadraticForm(rng.spd(3))};
  const InteractingMeasure m = build_interacting_measure(
      mu_m, GaussianMeasure::standard(2),
      InteractionMap::exponential(GeneratorSet(
          3, {Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3)})));

  const SampleBatch batch = sample_interacting(m, 100000, 904);
  const Eigen::MatrixXd emp = empirical_covariance(batch);
  const Eigen::MatrixXd se = empirical_covariance_error(batch);
  const Eigen::MatrixXd& truth = mu_m.covariance();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(emp(i, j) - truth(i, j)) > 5.0 * se(i, j)) {
        detail = "covariance entry (" + std::to_string(i) + "," +
                 std::to_string(j) + ") off by more than 5 stderr";
        return false;
      }
    }
  }

  const Functional f1{rng.vector(3)};
  const Functional f2{rng.vector(3)};
  const double free_value = n_point_free_oracle(mu_m, {f1, f2});
  const double tol12 = 1e-12 * std::abs(free_value);
  const double quad = two_point_quadrature(m, f1, f2, 12).value;
  const double pert = two_point_perturbative(m, f1, f2, 6).value;
  const double semi = semi_analytic_correlator(m, {f1, f2}, 1000, 41).value;
  if (std::abs(quad - free_value) > tol12 ||
      std::abs(pert - free_value) > tol12 ||
      std::abs(semi - free_value) > tol12) {
    detail = "a deterministic engine misses the free oracle " +
             fmt(free_value) + " beyond 1e-12 relative (quadrature " +
             fmt(quad) + ", perturbative " + fmt(pert) + ", semi-analytic " +
             fmt(semi) + ")";
    return false;
  }
  const CorrelatorEstimate mc = mc_correlator(m, {f1, f2}, 200000, 42);
  if (std::abs(mc.value - free_value) > 4.0 * mc.std_error) {
    detail = "mc estimate " + fmt(mc.value) + " misses the free oracle " +
             fmt(free_value) + " by more than 4 stderr";
    return false;
  }
  return true;
}

// 5. Engine agreement on the diagonal reference instance.
bool engine_agreement(std::string& detail) {
  const auto instance = [](double coupling_variance) {
    Eigen::MatrixXd cov(1, 1);
    cov << coupling_variance;
    return build_interacting_measure(
        GaussianMeasure::standard(2), GaussianMeasure::from_covariance(cov),
        InteractionMap::exponential(generator_preset("diag2")));
  };
  Eigen::VectorXd e1_coeffs = Eigen::VectorXd::Zero(2);
  e1_coeffs[0] = 1.0;
  const Functional e1{e1_coeffs};

  const InteractingMeasure unit = instance(1.0);
  const double closed_form = std::exp(2.0);
  const CorrelatorEstimate quad = two_point_quadrature(unit, e1, e1, 60);
  if (std::abs(quad.value / closed_form - 1.0) > 1e-6) {
    detail = "quadrature " + fmt(quad.value) + " vs closed form " +
             fmt(closed_form) + " beyond 1e-6 relative";
    return false;
  }
  const CorrelatorEstimate semi =
      two_point_semi_analytic(unit, e1, e1, 100000, 905);
  if (std::abs(semi.value - quad.value) > 3.0 * semi.std_error) {
    detail = "semi-analytic " + fmt(semi.value) + " vs quadrature " +
             fmt(quad.value) + " beyond 3 stderr (" + fmt(semi.std_error) +
             ")";
    return false;
  }
  const CorrelatorEstimate mc = mc_correlator(unit, {e1, e1}, 1000000, 906);
  if (std::abs(mc.value - quad.value) > 3.0 * mc.std_error) {
    detail = "mc " + fmt(mc.value) + " vs quadrature " + fmt(quad.value) +
             " beyond 3 stderr (" + fmt(mc.std_error) + ")";
    return false;
  }

  const InteractingMeasure weak = instance(0.09);
  const double weak_truth = std::exp(0.18);
  const CorrelatorEstimate pert = two_point_perturbative(weak, e1, e1, 8);
  if (std::abs(pert.value / weak_truth - 1.0) > 1e-5) {
    detail = "perturbative order 8 " + fmt(pert.value) +
             " vs weak-coupling closed form " + fmt(weak_truth) +
             " beyond 1e-5 relative";
    return false;
  }
  return true;
}

// 6. Discrete constructions in exact arithmetic.
bool discrete_constructions(std::string& detail) {
  oracles::TestRng rng(906);
  const auto random_exact_law = [&]() {
    const int size = rng.integer(1, 32);
    std::vector<long long> counts(static_cast<std::size_t>(size));
    long long total = 0;
    for (auto& c : counts) {
      c = rng.integer(0, 9);
      total += c;
    }
    if (total == 0) {
      counts[0] = 1;
      total = 1;
    }
    std::vector<Rational> probs;
    probs.reserve(counts.size());
    for (const long long c : counts) probs.emplace_back(c, total);
    return ExactDiscreteLaw(std::move(probs));
  };

  for (int pair = 0; pair < 500; ++pair) {
    const ExactDiscreteLaw p = random_exact_law();
    const ExactDiscreteLaw q = random_exact_law();
    const ExactDiscreteLaw conv = discrete_convolution(p, q);
    Rational total(0);
    for (const Rational& v : conv.probs()) total += v;
    if (total != Rational(1)) {
      detail = "pair " + std::to_string(pair) +
               ": rational convolution mass differs from 1";
      return false;
    }

    // Pointwise interaction: exactly normalized weights are accepted,
    // anything else is rejected.
    std::vector<Rational> raw(p.probs().size());
    for (auto& w : raw) w = Rational(rng.integer(1, 9));
    Rational mass(0);
    for (std::size_t k = 0; k < raw.size(); ++k) {
      mass += p.probs()[k] * raw[k];
    }
    std::vector<Rational> weights = raw;
    for (auto& w : weights) w /= mass;
    const ExactWeightFunction good(weights);
    if (mean_one_check(p, good) != Rational(1)) {
      detail = "pair " + std::to_string(pair) +
               ": normalized weights fail the exact mean-one check";
      return false;
    }
    try {
      (void)pointwise_interaction(p, good);
    } catch (const std::invalid_argument&) {
      detail = "pair " + std::to_string(pair) +
               ": exactly normalized weights were rejected";
      return false;
    }
    for (auto& w : weights) w *= Rational(2);
    try {
      (void)pointwise_interaction(p, ExactWeightFunction(weights));
      detail = "pair " + std::to_string(pair) +
               ": doubled weights were accepted";
      return false;
    } catch (const std::invalid_argument&) {
    }
  }

  // Floating mode enforces the 1e-9 normalization window.
  const DiscreteLaw coin({0.5, 0.5});
  try {
    (void)pointwise_interaction(coin,
                                WeightFunction({1.0, 1.0 + 4e-10}));
  } catch (const std::invalid_argument&) {
    detail = "floating weights within 1e-9 of normalized were rejected";
    return false;
  }
  try {
    (void)pointwise_interaction(coin, WeightFunction({1.0, 1.0 + 1e-6}));
    detail = "floating weights off by 5e-7 were accepted";
    return false;
  } catch (const std::invalid_argument&) {
  }
  return true;
}

// 7. CLT demonstration by exact convolution powers.
bool clt_demonstration(std::string& detail) {
  const DiscreteLaw coin({0.5, 0.5});
  double previous = 1.0;
  double final_distance = 1.0;
  for (const std::int64_t n : {4, 16, 64}) {
    const double dist = partial_sum_clt_distance(coin, n);
    if (dist > previous) {
      detail = "distance increased at n = " + std::to_string(n);
      return false;
    }
    previous = dist;
    final_distance = dist;
  }
  if (final_distance >= 0.05) {
    detail = "distance at n = 64 is " + fmt(final_distance) +
             ", expected < 0.05";
    return false;
  }
  return true;
}

// 8. Wick oracle self-consistency.
bool wick_consistency(std::string& detail) {
  const GaussianMeasure mu = GaussianMeasure::standard(1);
  const double wick = isserlis_moment(mu, {{0, 0, 0, 0}});
  if (!nearly(wick, 3.0, 1e-12)) {
    detail = "fourth moment " + fmt(wick) + " differs from 3";
    return false;
  }
  Eigen::MatrixXd zero(1, 1);
  zero << 0.0;
  const InteractingMeasure m = build_interacting_measure(
      mu, GaussianMeasure::standard(1),
      InteractionMap::exponential(GeneratorSet(1, {zero})));
  Eigen::VectorXd one(1);
  one << 1.0;
  const Functional f{one};
  const CorrelatorEstimate mc =
      mc_correlator(m, {f, f, f, f}, 1000000, 908);
  if (std::abs(mc.value - 3.0) > 3.0 * mc.std_error) {
    detail = "mc fourth moment " + fmt(mc.value) +
             " misses 3 by more than 3 stderr (" + fmt(mc.std_error) + ")";
    return false;
  }
  return true;
}

// 9. Worker-count invariance through the CLI: byte-identical results.
bool determinism_via_cli(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "convo_acceptance";
  fs::create_directories(dir);
  const std::string bin = CONVOMEASURE_BIN;
  const std::string configs = CONVO_CONFIG_DIR;

  const auto run_cli = [&](const std::string& experiment,
                           const std::string& config, int threads,
                           const fs::path& out) {
    std::ostringstream cmd;
    cmd << '"' << bin << "\" " << experiment << " --config \"" << configs
        << '/' << config << "\" --threads " << threads << " --out \""
        << out.string() << "\" > /dev/null 2>&1";
    return std::system(cmd.str().c_str());
  };

  const struct {
    const char* experiment;
    const char* config;
  } cases[] = {{"sample", "sample_zero2.json"},
               {"correlate", "correlate_free_four.json"}};

  for (const auto& c : cases) {
    const fs::path out1 = dir / (std::string(c.experiment) + "_t1.json");
    const fs::path out2 = dir / (std::string(c.experiment) + "_t2.json");
    if (run_cli(c.experiment, c.config, 1, out1) != 0 ||
        run_cli(c.experiment, c.config, 2, out2) != 0) {
      detail = std::string("CLI run failed for ") + c.config;
      return false;
    }
    std::ifstream in1(out1), in2(out2);
    nlohmann::json doc1 = nlohmann::json::parse(in1);
    nlohmann::json doc2 = nlohmann::json::parse(in2);
    doc1.erase("wall_time_ms");
    doc2.erase("wall_time_ms");
    if (doc1.dump() != doc2.dump()) {
      detail = std::string("results differ across worker counts for ") +
               c.config;
      return false;
    }
  }
  fs::remove_all(dir);
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"classical convolution additivity", 1.0,
       classical_convolution_additivity},
      {"partition identity on named and random instances", 5.0,
       partition_identity},
      {"determinant constancy and negative control", 1.0,
       determinant_constancy},
      {"trivial interaction reduces to the free theory", 0.0,
       trivial_reduction},
      {"two-point engine agreement on the reference instance", 30.0,
       engine_agreement},
      {"discrete constructions in exact arithmetic", 5.0,
       discrete_constructions},
      {"CLT demonstration by exact convolution powers", 1.0,
       clt_demonstration},
      {"Wick oracle self-consistency", 0.0, wick_consistency},
      {"byte-identical results across worker counts", 0.0,
       determinism_via_cli},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const Criterion& criterion = criteria[k];
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = criterion.check(detail);
    } catch (const std::exception& err) {
      detail = std::string("unexpected exception: ") + err.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    if (pass && criterion.budget_seconds > 0.0 &&
        seconds > criterion.budget_seconds) {
      pass = false;
      detail = "runtime " + fmt(seconds) + " s exceeds budget " +
               fmt(criterion.budget_seconds) + " s";
    }
    std::ostringstream line;
    line << (pass ? "[PASS] " : "[FAIL] ") << (k + 1) << ". "
         << criterion.name << " (" << fmt(seconds) << " s)";
    if (!pass) line << " -- " << detail;
    std::cout << line.str() << "\n";
    if (!pass) ++failures;
  }

  if (failures == 0) {
    std::cout << "acceptance: all " << criteria.size() << " criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << failures << " of " << criteria.size()
            << " criteria FAILED\n";
  return 1;
}
