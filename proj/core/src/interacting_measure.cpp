#include "convo/interacting_measure.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "convo/errors.hpp"
#include "convo/rng.hpp"
#include "convo/tolerances.hpp"
#include "parallel_util.hpp"

namespace convo {

namespace {

// Stream roles under one sampling seed: coupling coordinates on even
// streams, field noise on odd. Probing uses its own seed entirely.
constexpr std::uint64_t kCouplingStream = 0;
constexpr std::uint64_t kFieldStream = 1;

Eigen::VectorXd draw_coupling(const NormalStream& stream,
                              const GaussianMeasure& mu_g, std::uint64_t index,
                              std::uint64_t attempt) {
  Eigen::VectorXd z(mu_g.dim());
  stream.fill_draw(index, attempt, z);
  return mu_g.covariance_cholesky() * z;
}

}  // namespace

nlohmann::json PartitionReport::to_json() const {
  return {{"probes", probes},
          {"skipped", skipped},
          {"normalization", normalization},
          {"max_abs_deviation", max_abs_deviation}};
}

InteractingMeasure build_interacting_measure(GaussianMeasure mu_m,
                                             GaussianMeasure mu_g,
                                             InteractionMap zeta,
                                             InteractionProbeOptions opts) {
  // Condition 2: zeta must be an endomorphism of the field space driven by
  // exactly the coupling coordinates.
  if (zeta.dim_f() != mu_m.dim()) {
    std::ostringstream msg;
    msg << "In convo::build_interacting_measure: interaction map acts on "
        << "dimension " << zeta.dim_f() << " but the field measure lives on "
        << "dimension " << mu_m.dim();
    throw std::invalid_argument(msg.str());
  }
  if (zeta.r() != mu_g.dim()) {
    std::ostringstream msg;
    msg << "In convo::build_interacting_measure: interaction map reads "
        << zeta.r() << " coupling coordinates but the coupling measure has "
        << mu_g.dim();
    throw std::invalid_argument(msg.str());
  }

  // For the exponential kind the generator family must be sound.
  if (zeta.kind() == InteractionMap::Kind::exponential) {
    const GeneratorValidation report = validate_generators(zeta.generators());
    if (!report.pass) {
      std::ostringstream msg;
      msg << "In convo::build_interacting_measure: generator family fails "
          << "validation (rank " << report.rank << " of " << zeta.r() << ",";
      for (const auto& c : report.checks) {
        if (!c.traceless) {
          msg << " generator " << c.index << " has |trace| = " << c.trace_abs
              << ",";
        }
      }
      msg << " see validate_generators)";
      throw std::invalid_argument(msg.str());
    }
  }

  // Conditions 3 and 4 at probe draws of the coupling coordinates.
  if (opts.probe_count < 1) {
    throw std::invalid_argument(
        "In convo::build_interacting_measure: probe_count must be >= 1");
  }
  const NormalStream probe_stream(opts.probe_seed, kCouplingStream);
  double det_min = 0.0;
  double det_max = 0.0;
  int inspected = 0;
  std::uint64_t index = 0;
  std::uint64_t skipped = 0;
  while (inspected < opts.probe_count) {
    if (index >= static_cast<std::uint64_t>(opts.probe_count) * 16 + 1024) {
      throw ConditionViolation(
          3, "In convo::build_interacting_measure: almost no admissible "
             "coupling draws; the interaction map rejects the bulk of the "
             "coupling measure");
    }
    const Eigen::VectorXd a = draw_coupling(probe_stream, mu_g, index++, 0);
    if (!zeta.admissible(a)) {
      ++skipped;
      continue;
    }
    XiOperator xi;
    try {
      xi = xi_at(zeta, mu_m.precision(), a);
    } catch (const std::domain_error& err) {
      throw ConditionViolation(3, err.what());
    }
    try {
      cholesky_factor(xi.symmetrized);
    } catch (const std::invalid_argument& err) {
      std::ostringstream msg;
      msg << "In convo::build_interacting_measure: Xi(A) is not positive-"
          << "definite at probe draw " << inspected << ": " << err.what();
      throw ConditionViolation(3, msg.str());
    }
    if (inspected == 0) {
      det_min = det_max = xi.det;
    } else {
      det_min = std::min(det_min, xi.det);
      det_max = std::max(det_max, xi.det);
    }
    ++inspected;
  }

  const double spread = (det_max - det_min) / det_max;
  if (!(spread <= tol::kXiDetSpread)) {
    std::ostringstream msg;
    msg << "In convo::build_interacting_measure: det Xi(A) varies with the "
        << "coupling coordinates, relative spread " << spread << " exceeds "
        << tol::kXiDetSpread << " over " << inspected << " probe draws "
        << "(min " << det_min << ", max " << det_max << ")";
    throw ConditionViolation(4, msg.str());
  }

  double normalization;
  if (const auto closed_form = zeta.normalization()) {
    normalization = *closed_form;
    // The partition identity pins det Xi = N^2; for closed-form kinds this
    // is a genuine consistency check on the probes.
    const double expected_det = normalization * normalization;
    const double dev = std::max(std::abs(det_min / expected_det - 1.0),
                                std::abs(det_max / expected_det - 1.0));
    if (!(dev <= tol::kXiDetSpread)) {
      std::ostringstream msg;
      msg << "In convo::build_interacting_measure: det Xi(A) = ["
          << det_min << ", " << det_max << "] is constant but inconsistent "
          << "with N(zeta)^2 = " << expected_det << " (relative deviation "
          << dev << ")";
      throw ConditionViolation(4, msg.str());
    }
  } else {
    // Custom kind: measure N from the constant determinant.
    normalization = std::sqrt((det_min + det_max) / 2.0);
  }

  return InteractingMeasure(std::move(mu_m), std::move(mu_g), std::move(zeta),
                            normalization);
}

SampleBatch sample_interacting(const InteractingMeasure& m, std::int64_t n,
                               std::uint64_t seed, int threads) {
  if (n < 1) {
    throw std::invalid_argument(
        "In convo::sample_interacting: n must be >= 1");
  }
  const int dim = m.dim();
  SampleBatch batch;
  batch.seed = seed;
  batch.stream_id = kCouplingStream;
  batch.values.resize(dim, n);

  const NormalStream coupling_stream(seed, kCouplingStream);
  const NormalStream field_stream(seed, kFieldStream);
  const GaussianMeasure& mu_g = m.coupling_measure();
  const Eigen::MatrixXd& field_color = m.field_measure().covariance_cholesky();
  const InteractionMap& zeta = m.interaction();

  std::atomic<std::uint64_t> rejected{0};
  detail::for_each_chunk(n, threads, [&](std::int64_t, std::int64_t lo,
                                         std::int64_t hi) {
    Eigen::VectorXd zu(dim);
    std::uint64_t local_rejected = 0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const auto index = static_cast<std::uint64_t>(i);
      Eigen::MatrixXd zeta_inv;
      std::uint64_t attempt = 0;
      for (;; ++attempt) {
        if (attempt >= static_cast<std::uint64_t>(tol::kMaxRedraws)) {
          throw std::runtime_error(
              "In convo::sample_interacting: redraw budget exhausted; the "
              "interaction map rejects almost all coupling draws");
        }
        const Eigen::VectorXd a =
            draw_coupling(coupling_stream, mu_g, index, attempt);
        if (!zeta.admissible(a)) {
          ++local_rejected;
          continue;
        }
        zeta_inv = zeta.inverse_apply(a);
        break;
      }
      // Field noise is indexed by the same attempt so a rejected coupling
      // draw discards its field partner too.
      field_stream.fill_draw(index, attempt, zu);
      batch.values.col(i).noalias() = zeta_inv * (field_color * zu);
    }
    rejected.fetch_add(local_rejected, std::memory_order_relaxed);
  });
  batch.rejected = rejected.load();
  return batch;
}

PartitionReport partition_identity_check(const InteractingMeasure& m,
                                         int probe_count, std::uint64_t seed) {
  if (probe_count < 1) {
    throw std::invalid_argument(
        "In convo::partition_identity_check: probe_count must be >= 1");
  }
  const NormalStream stream(seed, kCouplingStream);
  const InteractionMap& zeta = m.interaction();
  PartitionReport report;
  report.normalization = m.normalization();
  std::uint64_t index = 0;
  while (report.probes < probe_count) {
    if (index >= static_cast<std::uint64_t>(probe_count) * 16 + 1024) {
      throw ConditionViolation(
          3, "In convo::partition_identity_check: almost no admissible "
             "coupling draws");
    }
    const Eigen::VectorXd a =
        draw_coupling(stream, m.coupling_measure(), index++, 0);
    if (!zeta.admissible(a)) {
      ++report.skipped;
      continue;
    }
    const XiOperator xi = xi_at(zeta, m.field_measure().precision(), a);
    const double value = m.normalization() / std::sqrt(xi.det);
    report.max_abs_deviation =
        std::max(report.max_abs_deviation, std::abs(value - 1.0));
    ++report.probes;
  }
  return report;
}

}  // namespace convo
