#include "convo/gauss_hermite.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "convo/errors.hpp"
#include "convo/summation.hpp"
#include "convo/tolerances.hpp"

namespace convo {

GaussHermiteRule gauss_hermite_rule(int node_count) {
  if (node_count < 1) {
    throw std::invalid_argument(
        "In convo::gauss_hermite_rule: node_count must be >= 1");
  }
  // Jacobi matrix of the (physicists') Hermite recurrence: zero diagonal,
  // off-diagonal sqrt(k/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(node_count, node_count);
  for (int k = 1; k < node_count; ++k) {
    const double b = std::sqrt(static_cast<double>(k) / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error(
        "In convo::gauss_hermite_rule: eigen decomposition failed");
  }
  GaussHermiteRule rule;
  rule.nodes = eig.eigenvalues();
  const double mu0 = std::sqrt(std::numbers::pi);  // integral of e^{-x^2}
  rule.weights =
      mu0 * eig.eigenvectors().row(0).transpose().array().square().matrix();
  return rule;
}

double gaussian_expectation(
    const GaussianMeasure& mu_g, int nodes_per_dim,
    const std::function<double(const Eigen::VectorXd&)>& g) {
  const int r = mu_g.dim();
  if (r > tol::kQuadratureMaxDim) {
    std::ostringstream msg;
    msg << "In convo::gaussian_expectation: tensor grid over " << r
        << " dimensions refused (cap " << tol::kQuadratureMaxDim
        << "); use a sampling engine";
    throw ConditionViolation(0, msg.str());
  }
  if (nodes_per_dim < tol::kQuadratureMinNodes ||
      nodes_per_dim > tol::kQuadratureMaxNodes) {
    std::ostringstream msg;
    msg << "In convo::gaussian_expectation: nodes_per_dim = " << nodes_per_dim
        << " outside [" << tol::kQuadratureMinNodes << ", "
        << tol::kQuadratureMaxNodes << "]";
    throw ConditionViolation(0, msg.str());
  }

  const GaussHermiteRule rule = gauss_hermite_rule(nodes_per_dim);
  const double weight_mass = pairwise_sum(
      std::span<const double>(rule.weights.data(),
                              static_cast<std::size_t>(nodes_per_dim)));

  // Substitution A = sqrt(2) L x turns the Gaussian expectation into the
  // e^{-|x|^2} integral the rule targets.
  const Eigen::MatrixXd color = std::sqrt(2.0) * mu_g.covariance_cholesky();

  std::int64_t total = 1;
  for (int d = 0; d < r; ++d) total *= nodes_per_dim;

  const double integral = pairwise_sum(total, [&](std::int64_t flat) {
    Eigen::VectorXd x(r);
    double w = 1.0;
    std::int64_t rest = flat;
    for (int d = 0; d < r; ++d) {
      const int idx = static_cast<int>(rest % nodes_per_dim);
      rest /= nodes_per_dim;
      x[d] = rule.nodes[idx];
      w *= rule.weights[idx];
    }
    return w * g(color * x);
  });

  double mass = 1.0;
  for (int d = 0; d < r; ++d) mass *= weight_mass;
  return integral / mass;
}

}  // namespace convo
