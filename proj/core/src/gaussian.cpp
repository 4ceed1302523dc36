#include "convo/gaussian.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

#include "convo/rng.hpp"
#include "convo/summation.hpp"
#include "convo/tolerances.hpp"
#include "parallel_util.hpp"

namespace convo {

namespace {

// Inverse of an SPD form through its Cholesky factor, symmetrized because
// floating point does not preserve symmetry exactly.
Eigen::MatrixXd spd_inverse(const QuadraticForm& form) {
  const Eigen::Index n = form.dim();
  Eigen::MatrixXd inv =
      form.cholesky().triangularView<Eigen::Lower>().solve(
          Eigen::MatrixXd::Identity(n, n));
  inv = form.cholesky().transpose().triangularView<Eigen::Upper>().solve(inv);
  return ((inv + inv.transpose()) / 2.0).eval();
}

void check_mutual_inverse(const Eigen::MatrixXd& covariance,
                          const Eigen::MatrixXd& precision) {
  const Eigen::Index n = covariance.rows();
  const double residual =
      (covariance * precision - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (!(residual <= tol::kInverseResidual)) {
    std::ostringstream msg;
    msg << "In convo::GaussianMeasure: covariance and precision are not "
        << "mutual inverses, ||C*B - I||_max = " << residual << " exceeds "
        << tol::kInverseResidual << " (form too ill-conditioned)";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

GaussianMeasure::GaussianMeasure(QuadraticForm precision,
                                 Eigen::MatrixXd covariance)
    : precision_(std::move(precision)), covariance_(std::move(covariance)) {
  check_mutual_inverse(covariance_, precision_.matrix());
  cov_chol_ = cholesky_factor(covariance_);
}

GaussianMeasure::GaussianMeasure(QuadraticForm precision)
    : precision_(std::move(precision)), covariance_(spd_inverse(precision_)) {
  check_mutual_inverse(covariance_, precision_.matrix());
  cov_chol_ = cholesky_factor(covariance_);
}

GaussianMeasure GaussianMeasure::from_covariance(Eigen::MatrixXd covariance) {
  QuadraticForm cov_form(std::move(covariance));  // validates SPD
  QuadraticForm precision(spd_inverse(cov_form));
  return GaussianMeasure(std::move(precision), cov_form.matrix());
}

GaussianMeasure GaussianMeasure::standard(int dim) {
  return GaussianMeasure(QuadraticForm::identity(dim),
                         Eigen::MatrixXd::Identity(dim, dim));
}

double GaussianMeasure::covariance_bilinear(const Eigen::VectorXd& f,
                                            const Eigen::VectorXd& g) const {
  if (f.size() != covariance_.rows() || g.size() != covariance_.rows()) {
    throw std::invalid_argument(
        "In convo::GaussianMeasure: functional dimension mismatch");
  }
  return f.dot(covariance_ * g);
}

SampleBatch sample(const GaussianMeasure& mu, std::int64_t n,
                   std::uint64_t seed, std::uint64_t stream_id, int threads) {
  if (n < 1) {
    throw std::invalid_argument("In convo::sample: n must be >= 1");
  }
  const int dim = mu.dim();
  SampleBatch batch;
  batch.seed = seed;
  batch.stream_id = stream_id;
  batch.values.resize(dim, n);
  const NormalStream stream(seed, stream_id);
  const Eigen::MatrixXd& color = mu.covariance_cholesky();
  detail::for_each_chunk(n, threads, [&](std::int64_t, std::int64_t lo,
                                         std::int64_t hi) {
    Eigen::VectorXd z(dim);
    for (std::int64_t i = lo; i < hi; ++i) {
      stream.fill_draw(static_cast<std::uint64_t>(i), 0, z);
      batch.values.col(i).noalias() = color * z;
    }
  });
  return batch;
}

GaussianMeasure classical_convolution(const GaussianMeasure& mu1,
                                      const GaussianMeasure& mu2) {
  if (mu1.dim() != mu2.dim()) {
    throw std::invalid_argument(
        "In convo::classical_convolution: dimension mismatch");
  }
  return GaussianMeasure::from_covariance(mu1.covariance() + mu2.covariance());
}

SampleBatch pushforward_sum_sample(const GaussianMeasure& mu1,
                                   const GaussianMeasure& mu2, std::int64_t n,
                                   std::uint64_t seed, int threads) {
  if (mu1.dim() != mu2.dim()) {
    throw std::invalid_argument(
        "In convo::pushforward_sum_sample: dimension mismatch");
  }
  if (n < 1) {
    throw std::invalid_argument(
        "In convo::pushforward_sum_sample: n must be >= 1");
  }
  const int dim = mu1.dim();
  SampleBatch batch;
  batch.seed = seed;
  batch.stream_id = 0;
  batch.values.resize(dim, n);
  // Two independent component streams per seed: stream 0 feeds mu1,
  // stream 1 feeds mu2.
  const NormalStream s1(seed, 0);
  const NormalStream s2(seed, 1);
  const Eigen::MatrixXd& c1 = mu1.covariance_cholesky();
  const Eigen::MatrixXd& c2 = mu2.covariance_cholesky();
  detail::for_each_chunk(n, threads, [&](std::int64_t, std::int64_t lo,
                                         std::int64_t hi) {
    Eigen::VectorXd z1(dim), z2(dim);
    for (std::int64_t i = lo; i < hi; ++i) {
      s1.fill_draw(static_cast<std::uint64_t>(i), 0, z1);
      s2.fill_draw(static_cast<std::uint64_t>(i), 0, z2);
      batch.values.col(i).noalias() = c1 * z1;
      batch.values.col(i).noalias() += c2 * z2;
    }
  });
  return batch;
}

Eigen::VectorXd empirical_mean(const SampleBatch& batch) {
  const int dim = batch.dim();
  const std::int64_t n = batch.size();
  Eigen::VectorXd m(dim);
  for (int i = 0; i < dim; ++i) {
    m[i] = pairwise_sum(n, [&](std::int64_t k) { return batch.values(i, k); }) /
           static_cast<double>(n);
  }
  return m;
}

Eigen::MatrixXd empirical_covariance(const SampleBatch& batch) {
  const int dim = batch.dim();
  const std::int64_t n = batch.size();
  if (n < 2) {
    throw std::invalid_argument(
        "In convo::empirical_covariance: need at least 2 draws");
  }
  const Eigen::VectorXd m = empirical_mean(batch);
  Eigen::MatrixXd c(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double s = pairwise_sum(n, [&](std::int64_t k) {
        return (batch.values(i, k) - m[i]) * (batch.values(j, k) - m[j]);
      });
      c(i, j) = c(j, i) = s / static_cast<double>(n - 1);
    }
  }
  return c;
}

Eigen::MatrixXd empirical_covariance_error(const SampleBatch& batch) {
  const int dim = batch.dim();
  const std::int64_t n = batch.size();
  if (n < 2) {
    throw std::invalid_argument(
        "In convo::empirical_covariance_error: need at least 2 draws");
  }
  const Eigen::VectorXd m = empirical_mean(batch);
  Eigen::MatrixXd se(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const auto stats = mean_and_error(n, [&](std::int64_t k) {
        return (batch.values(i, k) - m[i]) * (batch.values(j, k) - m[j]);
      });
      se(i, j) = se(j, i) = stats.std_error;
    }
  }
  return se;
}

}  // namespace convo
