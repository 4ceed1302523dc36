#pragma once

// Test-side oracles, deliberately implemented with different algorithms
// than the library paths they check.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// Gaussian product moment by explicit enumeration of perfect matchings:
// pair index 0 with every later index, recurse on the rest. Exponential
// cost, fine for N <= 10.
inline double pairing_moment(const Eigen::MatrixXd& gram,
                             std::vector<int> indices) {
  if (indices.empty()) return 1.0;
  if (indices.size() % 2 != 0) return 0.0;
  const int first = indices.front();
  double total = 0.0;
  for (std::size_t j = 1; j < indices.size(); ++j) {
    std::vector<int> rest;
    rest.reserve(indices.size() - 2);
    for (std::size_t k = 1; k < indices.size(); ++k) {
      if (k != j) rest.push_back(indices[k]);
    }
    total += gram(first, indices[j]) * pairing_moment(gram, std::move(rest));
  }
  return total;
}

// Plain Taylor series for the matrix exponential; converges fast for the
// small norms the tests feed it.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a, int terms = 60) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

// Naive n-fold convolution power: fold one factor at a time. Quadratic in
// n, used only for small n as the binary-powering oracle.
inline std::vector<double> naive_power(const std::vector<double>& base,
                                       int n) {
  std::vector<double> acc{1.0};
  for (int fold = 0; fold < n; ++fold) {
    std::vector<double> next(acc.size() + base.size() - 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      for (std::size_t j = 0; j < base.size(); ++j) {
        next[i + j] += acc[i] * base[j];
      }
    }
    acc = std::move(next);
  }
  return acc;
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Adaptive Simpson on [lo, hi] to a tight absolute tolerance; the 1D
// quadrature oracle.
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double lo, double hi, double tol = 1e-12,
                               int depth = 40) {
  const auto simpson = [&](double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  };
  std::function<double(double, double, double, int)> rec =
      [&](double a, double b, double whole, int d) -> double {
    const double m = 0.5 * (a + b);
    const double left = simpson(a, m);
    const double right = simpson(m, b);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(a, m, left, d - 1) + rec(m, b, right, d - 1);
  };
  return rec(lo, hi, simpson(lo, hi), depth);
}

// Deterministic random matrices for property sweeps; mt19937_64 keeps the
// test-side randomness independent of the library's counter-based streams.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }

  Eigen::VectorXd vector(int dim, double scale = 1.0) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = scale * normal();
    return v;
  }

  Eigen::MatrixXd matrix(int rows, int cols, double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = scale * normal();
    }
    return m;
  }

  Eigen::MatrixXd traceless(int dim, double scale = 1.0) {
    Eigen::MatrixXd m = matrix(dim, dim, scale);
    m -= (m.trace() / dim) * Eigen::MatrixXd::Identity(dim, dim);
    return m;
  }

  // Well-conditioned SPD matrix: A A^T + dim * I.
  Eigen::MatrixXd spd(int dim, double scale = 1.0) {
    const Eigen::MatrixXd a = matrix(dim, dim, scale);
    return a * a.transpose() +
           static_cast<double>(dim) * Eigen::MatrixXd::Identity(dim, dim);
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace oracles
