#pragma once

#include <Eigen/Dense>

namespace convo {

// A symmetric positive-definite bilinear form B on R^dim, stored with its
// lower Cholesky factor. Construction validates symmetry and positivity;
// a form that exists is usable without further checks.
class QuadraticForm {
 public:
  // Throws std::invalid_argument naming the asymmetry magnitude or the
  // failing Cholesky pivot when `matrix` is not symmetric positive-definite.
  explicit QuadraticForm(Eigen::MatrixXd matrix);

  static QuadraticForm identity(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  // Lower-triangular L with L L^T = matrix.
  const Eigen::MatrixXd& cholesky() const { return chol_; }

  // B(x, y) = x^T M y.
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd chol_;
};

// Lower Cholesky factor of a symmetric positive-definite matrix. Throws
// std::invalid_argument naming the failing pivot otherwise. Reads only the
// lower triangle.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& m);

}  // namespace convo
