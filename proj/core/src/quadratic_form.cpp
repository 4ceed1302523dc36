#include "convo/quadratic_form.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "convo/tolerances.hpp"

namespace convo {

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      std::ostringstream msg;
      msg << "In convo::cholesky_factor: matrix is not positive-definite, "
          << "pivot " << j << " = " << d;
      throw std::invalid_argument(msg.str());
    }
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

QuadraticForm::QuadraticForm(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument(
        "In convo::QuadraticForm: matrix must be square and nonempty");
  }
  if (!matrix_.allFinite()) {
    throw std::invalid_argument(
        "In convo::QuadraticForm: matrix has nonfinite entries");
  }
  const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::kSymmetry) {
    std::ostringstream msg;
    msg << "In convo::QuadraticForm: matrix is asymmetric, max |M - M^T| = "
        << asym << " exceeds " << tol::kSymmetry;
    throw std::invalid_argument(msg.str());
  }
  chol_ = cholesky_factor(matrix_);
}

QuadraticForm QuadraticForm::identity(int dim) {
  return QuadraticForm(Eigen::MatrixXd::Identity(dim, dim));
}

double QuadraticForm::operator()(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y) const {
  if (x.size() != matrix_.rows() || y.size() != matrix_.rows()) {
    throw std::invalid_argument(
        "In convo::QuadraticForm: argument dimension mismatch");
  }
  return x.dot(matrix_ * y);
}

}  // namespace convo
