#pragma once

#include <vector>

#include <Eigen/Dense>

#include "convo/gaussian.hpp"

namespace convo {

// Moment order of a centered Gaussian vector: indices[k] selects the
// coordinate of the k-th factor, repetitions allowed, so {0,0,1,1} means
// E[x_0^2 x_1^2].
struct MomentSpec {
  std::vector<int> indices;
};

// E[prod_k x_{indices[k]}] for x centered Gaussian with the given
// covariance. Sum over pair partitions, evaluated by a memoized recursion
// on multiplicity vectors rather than by enumerating partitions, so degrees
// in the thirties stay cheap. Odd degree gives 0, empty product gives 1.
double gaussian_product_moment(const Eigen::MatrixXd& covariance,
                               const std::vector<int>& indices);

// Same, addressed through a measure. Validates that spec is nonempty and
// every index lies in [0, dim).
double isserlis_moment(const GaussianMeasure& mu, const MomentSpec& spec);

}  // namespace convo
