#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "convo/moments.hpp"
#include "support/oracles.hpp"

namespace {

using convo::gaussian_product_moment;
using convo::GaussianMeasure;
using convo::isserlis_moment;
using convo::MomentSpec;

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("low moments in closed form") {
  const Eigen::MatrixXd c1 = 2.5 * Eigen::MatrixXd::Identity(1, 1);
  CHECK(gaussian_product_moment(c1, {}) == 1.0);
  CHECK(gaussian_product_moment(c1, {0}) == 0.0);
  CHECK(gaussian_product_moment(c1, {0, 0}) ==
        doctest::Approx(2.5).epsilon(1e-15));
  // E[x^4] = 3 sigma^4, E[x^6] = 15 sigma^6.
  CHECK(gaussian_product_moment(c1, {0, 0, 0, 0}) ==
        doctest::Approx(3.0 * 2.5 * 2.5).epsilon(1e-14));
  CHECK(gaussian_product_moment(c1, {0, 0, 0, 0, 0, 0}) ==
        doctest::Approx(15.0 * 2.5 * 2.5 * 2.5).epsilon(1e-14));
  CHECK(gaussian_product_moment(c1, {0, 0, 0}) == 0.0);

  Eigen::MatrixXd c2(2, 2);
  c2 << 1.0, 0.25, 0.25, 2.0;
  // E[x0 x1] = C01, E[x0^2 x1^2] = C00 C11 + 2 C01^2.
  CHECK(gaussian_product_moment(c2, {0, 1}) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(gaussian_product_moment(c2, {0, 0, 1, 1}) ==
        doctest::Approx(1.0 * 2.0 + 2.0 * 0.25 * 0.25).epsilon(1e-14));
}

TEST_CASE("recursion agrees with explicit pairing enumeration") {
  oracles::TestRng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = rng.integer(1, 4);
    const Eigen::MatrixXd cov = rng.spd(dim);
    const int degree = 2 * rng.integer(1, 4);
    std::vector<int> indices;
    for (int k = 0; k < degree; ++k) indices.push_back(rng.integer(0, dim - 1));

    // The library recursion runs on multiplicity vectors; the oracle
    // enumerates perfect matchings directly. Different algorithms, same
    // pair-partition sum.
    const double lib = gaussian_product_moment(cov, indices);
    Eigen::MatrixXd gram(degree, degree);
    for (int p = 0; p < degree; ++p) {
      for (int q = 0; q < degree; ++q) {
        gram(p, q) = cov(indices[static_cast<std::size_t>(p)],
                         indices[static_cast<std::size_t>(q)]);
      }
    }
    std::vector<int> positions(static_cast<std::size_t>(degree));
    for (int k = 0; k < degree; ++k) positions[static_cast<std::size_t>(k)] = k;
    const double oracle = oracles::pairing_moment(gram, positions);
    const double scale = std::max(1.0, std::abs(oracle));
    CHECK(std::abs(lib - oracle) / scale < 1e-12);
  }
}

TEST_CASE("degree thirty stays finite and positive") {
  // 15 squared factors of a standard normal: (30-1)!! pairings; the
  // memoized recursion must not blow up combinatorially.
  const Eigen::MatrixXd c = Eigen::MatrixXd::Identity(1, 1);
  const std::vector<int> indices(30, 0);
  const double m30 = gaussian_product_moment(c, indices);
  // (29)!! = 29 * 27 * ... * 1.
  double expected = 1.0;
  for (int k = 29; k >= 1; k -= 2) expected *= k;
  CHECK(m30 == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("measure-level wrapper validates its input") {
  const GaussianMeasure mu = GaussianMeasure::standard(2);
  CHECK(isserlis_moment(mu, MomentSpec{{0, 0}}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(isserlis_moment(mu, MomentSpec{{0, 1}}) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(isserlis_moment(mu, MomentSpec{{}}), std::invalid_argument);
  CHECK_THROWS_AS(isserlis_moment(mu, MomentSpec{{2}}), std::invalid_argument);
  CHECK_THROWS_AS(isserlis_moment(mu, MomentSpec{{-1}}),
                  std::invalid_argument);
}

}  // TEST_SUITE
