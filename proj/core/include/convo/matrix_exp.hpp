#pragma once

#include <Eigen/Dense>

namespace convo {

// Matrix exponential by scaling and squaring with diagonal Pade
// approximants, degree chosen from the 1-norm (3/5/7/9/13 ladder). Accurate
// to machine precision for the argument norms the admissibility bound
// allows.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);

}  // namespace convo
