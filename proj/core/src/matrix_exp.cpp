#include "convo/matrix_exp.hpp"

#include <cmath>
#include <stdexcept>

namespace convo {

namespace {

// Pade numerator coefficients for e^x, degrees 3..13 (Higham's values).
// For the diagonal approximant r(x) = p(x)/p(-x), p has these coefficients
// in increasing powers.

Eigen::MatrixXd pade_solve(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  // r = (v - u)^{-1} (v + u)
  return (v - u).partialPivLu().solve(v + u);
}

Eigen::MatrixXd pade3(const Eigen::MatrixXd& a, const Eigen::MatrixXd& a2) {
  const double b[] = {120.0, 60.0, 12.0, 1.0};
  const Eigen::MatrixXd i = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd u = a * (b[3] * a2 + b[1] * i);
  const Eigen::MatrixXd v = b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

Eigen::MatrixXd pade5(const Eigen::MatrixXd& a, const Eigen::MatrixXd& a2) {
  const double b[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  const Eigen::MatrixXd i = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd u = a * (b[5] * a4 + b[3] * a2 + b[1] * i);
  const Eigen::MatrixXd v = b[4] * a4 + b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

Eigen::MatrixXd pade7(const Eigen::MatrixXd& a, const Eigen::MatrixXd& a2) {
  const double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                      25200.0,    1512.0,    56.0,      1.0};
  const Eigen::MatrixXd i = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * i);
  const Eigen::MatrixXd v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

Eigen::MatrixXd pade9(const Eigen::MatrixXd& a, const Eigen::MatrixXd& a2) {
  const double b[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                      30270240.0,    2162160.0,    110880.0,     3960.0,
                      90.0,          1.0};
  const Eigen::MatrixXd i = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd a8 = a6 * a2;
  const Eigen::MatrixXd u =
      a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * i);
  const Eigen::MatrixXd v =
      b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

Eigen::MatrixXd pade13(const Eigen::MatrixXd& a, const Eigen::MatrixXd& a2) {
  const double b[] = {64764752532480000.0, 32382376266240000.0,
                      7771770303897600.0,  1187353796428800.0,
                      129060195264000.0,   10559470521600.0,
                      670442572800.0,      33522128640.0,
                      1323241920.0,        40840800.0,
                      960960.0,            16380.0,
                      182.0,               1.0};
  const Eigen::MatrixXd i = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
           b[5] * a4 + b[3] * a2 + b[1] * i);
  const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                            b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(
        "In convo::matrix_exponential: matrix must be square and nonempty");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(
        "In convo::matrix_exponential: matrix has nonfinite entries");
  }

  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  const Eigen::MatrixXd m2 = m * m;
  if (norm < 1.495585217958292e-2) return pade3(m, m2);
  if (norm < 2.539398330063230e-1) return pade5(m, m2);
  if (norm < 9.504178996162932e-1) return pade7(m, m2);
  if (norm < 2.097847961257068e0) return pade9(m, m2);

  constexpr double theta13 = 5.371920351148152;
  int squarings = 0;
  double scale = 1.0;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    scale = std::ldexp(1.0, -squarings);
  }
  const Eigen::MatrixXd a = scale * m;
  Eigen::MatrixXd r = pade13(a, (scale * scale) * m2);
  for (int s = 0; s < squarings; ++s) r = (r * r).eval();
  return r;
}

}  // namespace convo
