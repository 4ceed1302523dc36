#pragma once

#include <functional>

#include <Eigen/Dense>

#include "convo/gaussian.hpp"

namespace convo {

// Nodes and weights for integration against exp(-x^2) on the line,
// computed from the Jacobi matrix of the Hermite recurrence (eigenvalues
// are the nodes, squared first eigenvector components the weights).
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussHermiteRule gauss_hermite_rule(int node_count);

// E[g(A)] for A distributed per mu_g, by tensor-product quadrature with
// nodes_per_dim nodes along each of the dim(mu_g) principal directions.
// Deterministic. Self-normalizing: the weight mass is divided out, so a
// constant integrand is integrated exactly. Throws ConditionViolation when
// dim(mu_g) > 3 or nodes_per_dim is outside [10, 200]; the tensor grid is
// the wrong tool beyond that.
double gaussian_expectation(const GaussianMeasure& mu_g, int nodes_per_dim,
                            const std::function<double(const Eigen::VectorXd&)>& g);

}  // namespace convo
