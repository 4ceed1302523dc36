#pragma once

#include <Eigen/Dense>

#include "convo/quadratic_form.hpp"

namespace convo {

// Real 2d x 2d image of a complex d x d matrix M = X + iY under the
// standard embedding C^d -> R^2d: [[X, -Y], [Y, X]]. Multiplication and
// inversion commute with the embedding.
Eigen::MatrixXd embed_complex_matrix(const Eigen::MatrixXcd& m);

// The real quadratic form of a Hermitian positive-definite form on C^d:
// the embedding of H is symmetric positive-definite on R^2d, and
// z^* H z = x^T embed(H) x under z = x_re + i x_im. Throws when H is not
// Hermitian within the symmetry tolerance.
QuadraticForm embed_hermitian_form(const Eigen::MatrixXcd& h);

}  // namespace convo
