#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "convo/quadratic_form.hpp"
#include "convo/sample_batch.hpp"

namespace convo {

// A centered Gaussian measure on R^dim, held as the pair (precision form B,
// covariance C = B^{-1}). Both directions are validated against each other
// at construction, so downstream code may use whichever is convenient.
class GaussianMeasure {
 public:
  // Measure with density proportional to exp(-1/2 B(x,x)).
  explicit GaussianMeasure(QuadraticForm precision);

  static GaussianMeasure from_covariance(Eigen::MatrixXd covariance);
  static GaussianMeasure standard(int dim);

  int dim() const { return precision_.dim(); }
  const QuadraticForm& precision() const { return precision_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  // Lower-triangular factor of the covariance; the sampler's color matrix.
  const Eigen::MatrixXd& covariance_cholesky() const { return cov_chol_; }

  // B^{-1}(f, g) = f^T C g, the two-point function of linear observables.
  double covariance_bilinear(const Eigen::VectorXd& f,
                             const Eigen::VectorXd& g) const;

 private:
  GaussianMeasure(QuadraticForm precision, Eigen::MatrixXd covariance);

  QuadraticForm precision_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd cov_chol_;
};

// Draw n independent vectors from mu. Deterministic in (seed, stream_id)
// and independent of `threads`.
SampleBatch sample(const GaussianMeasure& mu, std::int64_t n,
                   std::uint64_t seed, std::uint64_t stream_id = 0,
                   int threads = 1);

// The classical convolution mu1 * mu2: Gaussian with covariance C1 + C2.
// Requires equal dimensions.
GaussianMeasure classical_convolution(const GaussianMeasure& mu1,
                                      const GaussianMeasure& mu2);

// Sample the law of X + Y with X ~ mu1, Y ~ mu2 independent, i.e. the
// pushforward of mu1 x mu2 under addition. Its law equals
// classical_convolution(mu1, mu2); the sampler exists so tests can check
// that equality empirically.
SampleBatch pushforward_sum_sample(const GaussianMeasure& mu1,
                                   const GaussianMeasure& mu2, std::int64_t n,
                                   std::uint64_t seed, int threads = 1);

// Column-wise sample statistics with Monte Carlo error bars.
Eigen::VectorXd empirical_mean(const SampleBatch& batch);
Eigen::MatrixXd empirical_covariance(const SampleBatch& batch);
// Standard error of each empirical covariance entry.
Eigen::MatrixXd empirical_covariance_error(const SampleBatch& batch);

}  // namespace convo
