#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "convo/gaussian.hpp"
#include "convo/interacting_measure.hpp"

namespace convo {

// A linear observable u -> <coeffs, u> on field space.
class Functional {
 public:
  explicit Functional(Eigen::VectorXd coeffs);

  int dim() const { return static_cast<int>(coeffs_.size()); }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator()(const Eigen::VectorXd& u) const { return coeffs_.dot(u); }

 private:
  Eigen::VectorXd coeffs_;
};

enum class EngineKind { mc, semi_analytic, quadrature, perturbative };

// Serialized method names: "mc", "semi_analytic_mc", "quadrature",
// "perturbative".
const char* engine_name(EngineKind kind);
EngineKind engine_from_name(const std::string& name);

// One correlator estimate with its provenance. n_or_nodes is the draw
// count for the sampling engines and nodes per dimension for quadrature (0
// for the perturbative engine, whose sweep coordinate is `order`).
// std_error is 0 for the deterministic engines. Serializes as
// {value, stderr, method, n, order} with order null unless perturbative.
struct CorrelatorEstimate {
  double value = 0.0;
  double std_error = 0.0;
  EngineKind method = EngineKind::mc;
  std::int64_t n_or_nodes = 0;
  std::optional<int> order;
  std::uint64_t rejected = 0;

  nlohmann::json to_json() const;
};

// E[f1(u) ... fN(u)] under the interacting measure, straight Monte Carlo on
// sample_interacting draws. Works for any N >= 1.
CorrelatorEstimate mc_correlator(const InteractingMeasure& m,
                                 const std::vector<Functional>& fs,
                                 std::int64_t n, std::uint64_t seed,
                                 int threads = 1);

// Same expectation, but only the coupling coordinates are sampled; the
// conditional Gaussian expectation over the field at fixed A is evaluated
// in closed form (pair-partition sum over the transported covariance).
// Exact zero for odd N. Variance is never larger than mc_correlator's at
// equal draw count.
CorrelatorEstimate semi_analytic_correlator(const InteractingMeasure& m,
                                            const std::vector<Functional>& fs,
                                            std::int64_t n_a,
                                            std::uint64_t seed,
                                            int threads = 1);

// The two-point case, B_m^{-1}(f1 . zeta(A)^{-1}, f2 . zeta(A)^{-1})
// averaged over A.
CorrelatorEstimate two_point_semi_analytic(const InteractingMeasure& m,
                                           const Functional& f1,
                                           const Functional& f2,
                                           std::int64_t n_a,
                                           std::uint64_t seed,
                                           int threads = 1);

// Two-point correlator by deterministic tensor-product quadrature over the
// coupling coordinates. Inherits the dimension/node caps of
// gaussian_expectation.
CorrelatorEstimate two_point_quadrature(const InteractingMeasure& m,
                                        const Functional& f1,
                                        const Functional& f2,
                                        int nodes_per_dim);

// Two-point correlator from the power-series expansion of zeta(A)^{-1},
// keeping the integrand exactly through total order K (`order`) in the
// coupling coordinates and dropping everything beyond, with the coupling
// expectation of each surviving monomial taken in closed form through
// Gaussian product moments. Exponential interaction maps only.
// Deterministic; accurate at weak coupling, honestly off the truth at
// strong coupling. order <= 16.
CorrelatorEstimate two_point_perturbative(const InteractingMeasure& m,
                                          const Functional& f1,
                                          const Functional& f2, int order);

// E[f1(x) ... fN(x)] under a plain Gaussian measure, in closed form. The
// reference value every engine must reproduce when the interaction is
// trivial.
double n_point_free_oracle(const GaussianMeasure& mu,
                           const std::vector<Functional>& fs);

}  // namespace convo
