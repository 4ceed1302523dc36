#pragma once

#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

namespace convo {

using Rational = boost::rational<long long>;

namespace detail {

template <class Scalar>
constexpr bool is_rational_v = false;
template <>
inline constexpr bool is_rational_v<Rational> = true;

template <class Scalar>
Scalar scalar_abs(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

}  // namespace detail

// A probability law supported on {0, 1, ..., K}: probs()[k] = P(X = k).
// The scalar is either double (checked to tolerance) or Rational (checked
// exactly), so identities proved in exact arithmetic can be compared with
// their floating-point counterparts.
template <class Scalar>
class BasicDiscreteLaw {
 public:
  // Throws std::invalid_argument when probs is empty, has a negative entry
  // (the diagnostic names the offending point), or does not sum to one.
  explicit BasicDiscreteLaw(std::vector<Scalar> probs);

  int support_max() const { return static_cast<int>(probs_.size()) - 1; }
  const std::vector<Scalar>& probs() const { return probs_; }

  // P(X = k); zero outside the support.
  Scalar operator()(int k) const {
    if (k < 0 || k > support_max()) return Scalar(0);
    return probs_[static_cast<std::size_t>(k)];
  }

 private:
  std::vector<Scalar> probs_;
};

// Nonnegative weights on {0, ..., K} with no normalization constraint: the
// raw material of interactions and the closure of convolution on laws.
template <class Scalar>
class BasicWeightFunction {
 public:
  explicit BasicWeightFunction(std::vector<Scalar> weights);

  int support_max() const { return static_cast<int>(weights_.size()) - 1; }
  const std::vector<Scalar>& weights() const { return weights_; }

  Scalar operator()(int k) const {
    if (k < 0 || k > support_max()) return Scalar(0);
    return weights_[static_cast<std::size_t>(k)];
  }

 private:
  std::vector<Scalar> weights_;
};

using DiscreteLaw = BasicDiscreteLaw<double>;
using WeightFunction = BasicWeightFunction<double>;
using ExactDiscreteLaw = BasicDiscreteLaw<Rational>;
using ExactWeightFunction = BasicWeightFunction<Rational>;

// Convolution (f * g)(k) = sum_j f(j) g(k - j) on {0, ..., Kf + Kg}.
// Convolving two laws gives the law of an independent sum; anything else
// gives a weight function.
template <class Scalar>
BasicDiscreteLaw<Scalar> discrete_convolution(const BasicDiscreteLaw<Scalar>& f,
                                              const BasicDiscreteLaw<Scalar>& g);
template <class Scalar>
BasicWeightFunction<Scalar> discrete_convolution(
    const BasicWeightFunction<Scalar>& f, const BasicWeightFunction<Scalar>& g);
template <class Scalar>
BasicWeightFunction<Scalar> discrete_convolution(
    const BasicDiscreteLaw<Scalar>& f, const BasicWeightFunction<Scalar>& g);
template <class Scalar>
BasicWeightFunction<Scalar> discrete_convolution(
    const BasicWeightFunction<Scalar>& f, const BasicDiscreteLaw<Scalar>& g);

// Law reweighted point by point: p(k) proportional-as-given to
// p_free(k) * p_int(k). The product must already be normalized (tolerance
// kPointwiseSum for double, exact for Rational); the throw names the actual
// sum. Use mean_one_check to test a candidate first.
template <class Scalar>
BasicDiscreteLaw<Scalar> pointwise_interaction(
    const BasicDiscreteLaw<Scalar>& p_free,
    const BasicWeightFunction<Scalar>& p_int);

// sum_k p_free(k) p_int(k), the normalization the pointwise construction
// needs to equal one. Exposed so callers can diagnose near-misses.
template <class Scalar>
Scalar mean_one_check(const BasicDiscreteLaw<Scalar>& p_free,
                      const BasicWeightFunction<Scalar>& p_int);

// Law of the sum of independent draws from p_free and p_int: the
// convolution-style interaction. Always a law, no normalization caveat.
template <class Scalar>
BasicDiscreteLaw<Scalar> convolution_interaction(
    const BasicDiscreteLaw<Scalar>& p_free, const BasicDiscreteLaw<Scalar>& p_int);

// n-fold convolution power of `base` (law of the sum of n iid draws),
// computed by binary powering.
DiscreteLaw convolution_power(const DiscreteLaw& base, std::int64_t n);

double law_mean(const DiscreteLaw& law);
double law_variance(const DiscreteLaw& law);

// Kolmogorov distance between the standardized n-fold partial sum of `base`
// and the standard normal: sup_x |F_n(x) - Phi(x)|, taken over the jump
// points of F_n where the sup is attained. Exact up to the normal CDF, no
// sampling involved.
double partial_sum_clt_distance(const DiscreteLaw& base, std::int64_t n);

}  // namespace convo
