#include "convo/correlators.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "convo/errors.hpp"
#include "convo/gauss_hermite.hpp"
#include "convo/moments.hpp"
#include "convo/rng.hpp"
#include "convo/summation.hpp"
#include "convo/tolerances.hpp"
#include "parallel_util.hpp"

namespace convo {

namespace {

// Coupling draws for the semi-analytic engine live on their own stream so
// its noise never overlaps the plain sampler's under a shared seed.
constexpr std::uint64_t kSemiAnalyticStream = 2;

void check_functionals(const InteractingMeasure& m,
                       const std::vector<Functional>& fs, const char* where) {
  if (fs.empty()) {
    throw std::invalid_argument(std::string("In ") + where +
                                ": need at least one functional");
  }
  for (const auto& f : fs) {
    if (f.dim() != m.dim()) {
      std::ostringstream msg;
      msg << "In " << where << ": functional of dimension " << f.dim()
          << " against a measure of dimension " << m.dim();
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace

Functional::Functional(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) {
    throw std::invalid_argument("In convo::Functional: empty coefficients");
  }
  if (!coeffs_.allFinite()) {
    throw std::invalid_argument(
        "In convo::Functional: nonfinite coefficients");
  }
  if (coeffs_.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument(
        "In convo::Functional: all coefficients are zero");
  }
}

const char* engine_name(EngineKind kind) {
  switch (kind) {
    case EngineKind::mc:
      return "mc";
    case EngineKind::semi_analytic:
      return "semi_analytic_mc";
    case EngineKind::quadrature:
      return "quadrature";
    case EngineKind::perturbative:
      return "perturbative";
  }
  return "unknown";
}

EngineKind engine_from_name(const std::string& name) {
  if (name == "mc") return EngineKind::mc;
  if (name == "semi_analytic_mc") return EngineKind::semi_analytic;
  if (name == "quadrature") return EngineKind::quadrature;
  if (name == "perturbative") return EngineKind::perturbative;
  throw ConfigError(
      "In convo::engine_from_name: unknown engine '" + name +
      "' (known: mc, semi_analytic_mc, quadrature, perturbative)");
}

nlohmann::json CorrelatorEstimate::to_json() const {
  return {{"value", value},
          {"stderr", std_error},
          {"method", engine_name(method)},
          {"n", n_or_nodes},
          {"order", order ? nlohmann::json(*order) : nlohmann::json()}};
}

CorrelatorEstimate mc_correlator(const InteractingMeasure& m,
                                 const std::vector<Functional>& fs,
                                 std::int64_t n, std::uint64_t seed,
                                 int threads) {
  check_functionals(m, fs, "convo::mc_correlator");
  if (n < 2) {
    throw std::invalid_argument("In convo::mc_correlator: n must be >= 2");
  }
  const SampleBatch batch = sample_interacting(m, n, seed, threads);
  const auto product = [&](std::int64_t i) {
    double p = 1.0;
    for (const auto& f : fs) p *= f(batch.values.col(i));
    return p;
  };
  const MeanAndError stats = mean_and_error(n, product);
  CorrelatorEstimate est;
  est.value = stats.mean;
  est.std_error = stats.std_error;
  est.method = EngineKind::mc;
  est.n_or_nodes = n;
  est.rejected = batch.rejected;
  return est;
}

CorrelatorEstimate semi_analytic_correlator(const InteractingMeasure& m,
                                            const std::vector<Functional>& fs,
                                            std::int64_t n_a,
                                            std::uint64_t seed, int threads) {
  check_functionals(m, fs, "convo::semi_analytic_correlator");
  if (n_a < 2) {
    throw std::invalid_argument(
        "In convo::semi_analytic_correlator: n_a must be >= 2");
  }
  const int nf = static_cast<int>(fs.size());
  const NormalStream stream(seed, kSemiAnalyticStream);
  const GaussianMeasure& mu_g = m.coupling_measure();
  const Eigen::MatrixXd& coupling_color = mu_g.covariance_cholesky();
  const Eigen::MatrixXd& c_m = m.field_measure().covariance();
  const InteractionMap& zeta = m.interaction();

  // All pair partitions of {1..nf} reuse the same index list; only the
  // transported Gram matrix changes per draw.
  std::vector<int> all_indices(static_cast<std::size_t>(nf));
  for (int j = 0; j < nf; ++j) all_indices[static_cast<std::size_t>(j)] = j;

  Eigen::VectorXd conditional(n_a);
  std::atomic<std::uint64_t> rejected{0};
  detail::for_each_chunk(n_a, threads, [&](std::int64_t, std::int64_t lo,
                                           std::int64_t hi) {
    Eigen::VectorXd z(mu_g.dim());
    std::uint64_t local_rejected = 0;
    for (std::int64_t i = lo; i < hi; ++i) {
      Eigen::MatrixXd zeta_inv;
      std::uint64_t attempt = 0;
      for (;; ++attempt) {
        if (attempt >= static_cast<std::uint64_t>(tol::kMaxRedraws)) {
          throw std::runtime_error(
              "In convo::semi_analytic_correlator: redraw budget exhausted");
        }
        stream.fill_draw(static_cast<std::uint64_t>(i), attempt, z);
        const Eigen::VectorXd a = coupling_color * z;
        if (!zeta.admissible(a)) {
          ++local_rejected;
          continue;
        }
        zeta_inv = zeta.inverse_apply(a);
        break;
      }
      // Covariance of zeta(A)^{-1} u' at fixed A, contracted with the
      // functionals.
      const Eigen::MatrixXd transported =
          zeta_inv * c_m * zeta_inv.transpose();
      Eigen::MatrixXd gram(nf, nf);
      for (int p = 0; p < nf; ++p) {
        const Eigen::VectorXd tp =
            transported * fs[static_cast<std::size_t>(p)].coeffs();
        for (int q = 0; q < nf; ++q) {
          gram(p, q) = fs[static_cast<std::size_t>(q)].coeffs().dot(tp);
        }
      }
      conditional[i] = gaussian_product_moment(gram, all_indices);
    }
    rejected.fetch_add(local_rejected, std::memory_order_relaxed);
  });

  const MeanAndError stats =
      mean_and_error(n_a, [&](std::int64_t i) { return conditional[i]; });
  CorrelatorEstimate est;
  est.value = stats.mean;
  est.std_error = stats.std_error;
  est.method = EngineKind::semi_analytic;
  est.n_or_nodes = n_a;
  est.rejected = rejected.load();
  return est;
}

CorrelatorEstimate two_point_semi_analytic(const InteractingMeasure& m,
                                           const Functional& f1,
                                           const Functional& f2,
                                           std::int64_t n_a,
                                           std::uint64_t seed, int threads) {
  return semi_analytic_correlator(m, {f1, f2}, n_a, seed, threads);
}

CorrelatorEstimate two_point_quadrature(const InteractingMeasure& m,
                                        const Functional& f1,
                                        const Functional& f2,
                                        int nodes_per_dim) {
  check_functionals(m, {f1, f2}, "convo::two_point_quadrature");
  const Eigen::MatrixXd& c_m = m.field_measure().covariance();
  const InteractionMap& zeta = m.interaction();
  const auto integrand = [&](const Eigen::VectorXd& a) {
    Eigen::MatrixXd zeta_inv;
    try {
      zeta_inv = zeta.inverse_apply(a);
    } catch (const std::domain_error& err) {
      throw ConditionViolation(
          0, std::string("In convo::two_point_quadrature: quadrature node "
                         "outside the admissible coupling region: ") +
                 err.what());
    }
    return f1.coeffs().dot(zeta_inv * c_m *
                           (zeta_inv.transpose() * f2.coeffs()));
  };
  CorrelatorEstimate est;
  est.value = gaussian_expectation(m.coupling_measure(), nodes_per_dim,
                                   integrand);
  est.std_error = 0.0;
  est.method = EngineKind::quadrature;
  est.n_or_nodes = nodes_per_dim;
  return est;
}

namespace {

// Multi-index coefficient table for one truncation level: the matrices
// Q_k[alpha] with sum_{|alpha| = k} Q_k[alpha] A^alpha = (sum_a A_a T^a)^k.
using CoefficientLevel = std::map<std::vector<int>, Eigen::MatrixXd>;

}  // namespace

CorrelatorEstimate two_point_perturbative(const InteractingMeasure& m,
                                          const Functional& f1,
                                          const Functional& f2, int order) {
  check_functionals(m, {f1, f2}, "convo::two_point_perturbative");
  if (m.interaction().kind() != InteractionMap::Kind::exponential) {
    throw std::invalid_argument(
        "In convo::two_point_perturbative: only exponential interaction "
        "maps have a power-series expansion");
  }
  if (order < 0 || order > tol::kPerturbativeMaxOrder) {
    std::ostringstream msg;
    msg << "In convo::two_point_perturbative: order " << order
        << " outside [0, " << tol::kPerturbativeMaxOrder << "]";
    throw ConditionViolation(0, msg.str());
  }

  const GeneratorSet& gens = m.interaction().generators();
  const int r = gens.r();
  const Eigen::MatrixXd& c_m = m.field_measure().covariance();

  // Levels of the expansion of zeta(A)^{-1} = exp(-sum A_a T^a): the
  // coefficient of A^alpha at level k = |alpha| is (-1)^k / k! times the
  // symmetrized word sum Q_k[alpha].
  std::vector<CoefficientLevel> levels(static_cast<std::size_t>(order) + 1);
  levels[0][std::vector<int>(static_cast<std::size_t>(r), 0)] =
      Eigen::MatrixXd::Identity(gens.dim_f, gens.dim_f);
  for (int k = 1; k <= order; ++k) {
    for (const auto& [alpha, q] : levels[static_cast<std::size_t>(k - 1)]) {
      for (int a = 0; a < r; ++a) {
        std::vector<int> next = alpha;
        ++next[static_cast<std::size_t>(a)];
        auto [it, inserted] = levels[static_cast<std::size_t>(k)].try_emplace(
            std::move(next),
            Eigen::MatrixXd::Zero(gens.dim_f, gens.dim_f));
        it->second.noalias() +=
            gens.generators[static_cast<std::size_t>(a)] * q;
      }
    }
  }

  // Contract each expansion coefficient with the functionals once.
  struct Contracted {
    std::vector<int> alpha;
    int degree = 0;
    Eigen::VectorXd left;       // P[alpha]^T f1
    Eigen::VectorXd right_cm;   // C_m P[alpha]^T f2
  };
  std::vector<Contracted> terms;
  double factorial = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) factorial *= k;
    const double coeff = ((k % 2 == 0) ? 1.0 : -1.0) / factorial;
    for (const auto& [alpha, q] : levels[static_cast<std::size_t>(k)]) {
      Contracted t;
      t.alpha = alpha;
      t.degree = k;
      const Eigen::MatrixXd p = coeff * q;
      t.left = p.transpose() * f1.coeffs();
      t.right_cm = c_m * (p.transpose() * f2.coeffs());
      terms.push_back(std::move(t));
    }
  }

  // Integrand coefficients I[gamma] = sum over splittings gamma = a + b of
  // f1^T P[a] C_m P[b]^T f2, keeping only total degree |gamma| <= order,
  // then the exact coupling expectation of each monomial A^gamma.
  std::map<std::vector<int>, double> integrand;
  std::vector<int> gamma(static_cast<std::size_t>(r));
  for (const auto& ta : terms) {
    for (const auto& tb : terms) {
      if (ta.degree + tb.degree > order) continue;
      for (int a = 0; a < r; ++a) {
        gamma[static_cast<std::size_t>(a)] =
            ta.alpha[static_cast<std::size_t>(a)] +
            tb.alpha[static_cast<std::size_t>(a)];
      }
      integrand[gamma] += ta.left.dot(tb.right_cm);
    }
  }

  const Eigen::MatrixXd& coupling_cov = m.coupling_measure().covariance();
  CompensatedSum value;
  std::vector<int> monomial;
  for (const auto& [g, weight] : integrand) {
    if (weight == 0.0) continue;
    monomial.clear();
    for (int a = 0; a < r; ++a) {
      monomial.insert(monomial.end(), static_cast<std::size_t>(g[static_cast<std::size_t>(a)]),
                      a);
    }
    value.add(weight * gaussian_product_moment(coupling_cov, monomial));
  }

  CorrelatorEstimate est;
  est.value = value.value();
  est.std_error = 0.0;
  est.method = EngineKind::perturbative;
  est.n_or_nodes = 0;
  est.order = order;
  return est;
}

double n_point_free_oracle(const GaussianMeasure& mu,
                           const std::vector<Functional>& fs) {
  if (fs.empty()) {
    throw std::invalid_argument(
        "In convo::n_point_free_oracle: need at least one functional");
  }
  const int nf = static_cast<int>(fs.size());
  Eigen::MatrixXd gram(nf, nf);
  for (int p = 0; p < nf; ++p) {
    if (fs[static_cast<std::size_t>(p)].dim() != mu.dim()) {
      throw std::invalid_argument(
          "In convo::n_point_free_oracle: functional dimension mismatch");
    }
    const Eigen::VectorXd cp =
        mu.covariance() * fs[static_cast<std::size_t>(p)].coeffs();
    for (int q = 0; q < nf; ++q) {
      gram(p, q) = fs[static_cast<std::size_t>(q)].coeffs().dot(cp);
    }
  }
  std::vector<int> indices(static_cast<std::size_t>(nf));
  for (int j = 0; j < nf; ++j) indices[static_cast<std::size_t>(j)] = j;
  return gaussian_product_moment(gram, indices);
}

}  // namespace convo
