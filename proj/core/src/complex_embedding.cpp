#include "convo/complex_embedding.hpp"

#include <sstream>
#include <stdexcept>

#include "convo/tolerances.hpp"

namespace convo {

Eigen::MatrixXd embed_complex_matrix(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(
        "In convo::embed_complex_matrix: matrix must be square and nonempty");
  }
  const Eigen::Index d = m.rows();
  Eigen::MatrixXd out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = m.real();
  out.topRightCorner(d, d) = -m.imag();
  out.bottomLeftCorner(d, d) = m.imag();
  out.bottomRightCorner(d, d) = m.real();
  return out;
}

QuadraticForm embed_hermitian_form(const Eigen::MatrixXcd& h) {
  const double herm_defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm_defect > tol::kSymmetry) {
    std::ostringstream msg;
    msg << "In convo::embed_hermitian_form: form is not Hermitian, "
        << "max |H - H^*| = " << herm_defect << " exceeds " << tol::kSymmetry;
    throw std::invalid_argument(msg.str());
  }
  // For Hermitian H the embedding is symmetric: X symmetric, Y
  // antisymmetric. QuadraticForm's constructor validates positivity.
  return QuadraticForm(embed_complex_matrix(h));
}

}  // namespace convo
