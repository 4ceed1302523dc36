#include "convo/discrete.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "convo/summation.hpp"
#include "convo/tolerances.hpp"

namespace convo {

namespace {

template <class Scalar>
Scalar sum_entries(const std::vector<Scalar>& xs) {
  if constexpr (detail::is_rational_v<Scalar>) {
    Scalar acc(0);
    for (const Scalar& x : xs) acc += x;
    return acc;
  } else {
    CompensatedSum acc;
    for (const Scalar& x : xs) acc.add(x);
    return acc.value();
  }
}

template <class Scalar>
void check_entries_nonnegative(const std::vector<Scalar>& xs,
                               const char* where) {
  for (std::size_t k = 0; k < xs.size(); ++k) {
    bool bad = xs[k] < Scalar(0);
    if constexpr (!detail::is_rational_v<Scalar>) {
      bad = bad || !std::isfinite(xs[k]);
    }
    if (bad) {
      std::ostringstream msg;
      msg << "In " << where << ": entry at point " << k << " is invalid";
      throw std::invalid_argument(msg.str());
    }
  }
}

template <class Scalar>
void check_normalized(const Scalar& sum, double slack, const char* where) {
  bool ok;
  if constexpr (detail::is_rational_v<Scalar>) {
    ok = (sum == Scalar(1));
  } else {
    ok = std::abs(sum - 1.0) <= slack;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "In " << where << ": probabilities sum to ";
    if constexpr (detail::is_rational_v<Scalar>) {
      msg << sum.numerator() << "/" << sum.denominator();
    } else {
      msg.precision(17);
      msg << sum;
    }
    msg << ", not 1";
    throw std::invalid_argument(msg.str());
  }
}

template <class Scalar>
std::vector<Scalar> convolve_vectors(const std::vector<Scalar>& f,
                                     const std::vector<Scalar>& g) {
  std::vector<Scalar> out(f.size() + g.size() - 1, Scalar(0));
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      out[i + j] += f[i] * g[j];
    }
  }
  return out;
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace

template <class Scalar>
BasicDiscreteLaw<Scalar>::BasicDiscreteLaw(std::vector<Scalar> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument(
        "In convo::BasicDiscreteLaw: support must be nonempty");
  }
  check_entries_nonnegative(probs_, "convo::BasicDiscreteLaw");
  check_normalized(sum_entries(probs_), tol::kLawSum,
                   "convo::BasicDiscreteLaw");
}

template <class Scalar>
BasicWeightFunction<Scalar>::BasicWeightFunction(std::vector<Scalar> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw std::invalid_argument(
        "In convo::BasicWeightFunction: support must be nonempty");
  }
  check_entries_nonnegative(weights_, "convo::BasicWeightFunction");
}

template <class Scalar>
BasicDiscreteLaw<Scalar> discrete_convolution(const BasicDiscreteLaw<Scalar>& f,
                                              const BasicDiscreteLaw<Scalar>& g) {
  return BasicDiscreteLaw<Scalar>(convolve_vectors(f.probs(), g.probs()));
}

template <class Scalar>
BasicWeightFunction<Scalar> discrete_convolution(
    const BasicWeightFunction<Scalar>& f, const BasicWeightFunction<Scalar>& g) {
  return BasicWeightFunction<Scalar>(convolve_vectors(f.weights(), g.weights()));
}

template <class Scalar>
BasicWeightFunction<Scalar> discrete_convolution(
    const BasicDiscreteLaw<Scalar>& f, const BasicWeightFunction<Scalar>& g) {
  return BasicWeightFunction<Scalar>(convolve_vectors(f.probs(), g.weights()));
}

template <class Scalar>
BasicWeightFunction<Scalar> discrete_convolution(
    const BasicWeightFunction<Scalar>& f, const BasicDiscreteLaw<Scalar>& g) {
  return BasicWeightFunction<Scalar>(convolve_vectors(f.weights(), g.probs()));
}

template <class Scalar>
Scalar mean_one_check(const BasicDiscreteLaw<Scalar>& p_free,
                      const BasicWeightFunction<Scalar>& p_int) {
  const int top = std::min(p_free.support_max(), p_int.support_max());
  std::vector<Scalar> terms;
  terms.reserve(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) terms.push_back(p_free(k) * p_int(k));
  return sum_entries(terms);
}

template <class Scalar>
BasicDiscreteLaw<Scalar> pointwise_interaction(
    const BasicDiscreteLaw<Scalar>& p_free,
    const BasicWeightFunction<Scalar>& p_int) {
  const Scalar sum = mean_one_check(p_free, p_int);
  if constexpr (detail::is_rational_v<Scalar>) {
    check_normalized(sum, 0.0, "convo::pointwise_interaction");
  } else {
    check_normalized(sum, tol::kPointwiseSum, "convo::pointwise_interaction");
  }
  const int top = std::min(p_free.support_max(), p_int.support_max());
  std::vector<Scalar> probs;
  probs.reserve(static_cast<std::size_t>(top) + 1);
  // Divide by the checked sum so the result is normalized exactly, not just
  // within the admission slack.
  for (int k = 0; k <= top; ++k) probs.push_back(p_free(k) * p_int(k) / sum);
  return BasicDiscreteLaw<Scalar>(std::move(probs));
}

template <class Scalar>
BasicDiscreteLaw<Scalar> convolution_interaction(
    const BasicDiscreteLaw<Scalar>& p_free,
    const BasicDiscreteLaw<Scalar>& p_int) {
  return discrete_convolution(p_free, p_int);
}

DiscreteLaw convolution_power(const DiscreteLaw& base, std::int64_t n) {
  if (n < 1) {
    throw std::invalid_argument(
        "In convo::convolution_power: n must be >= 1");
  }
  // Binary powering; every intermediate is itself a law.
  std::vector<DiscreteLaw> doublings = {base};
  std::int64_t pow = 1;
  while (pow * 2 <= n) {
    doublings.push_back(
        discrete_convolution(doublings.back(), doublings.back()));
    pow *= 2;
  }
  std::optional<DiscreteLaw> acc;
  std::int64_t remaining = n;
  for (std::size_t b = doublings.size(); b-- > 0;) {
    const std::int64_t w = std::int64_t(1) << b;
    if (remaining >= w) {
      remaining -= w;
      acc = acc ? discrete_convolution(*acc, doublings[b]) : doublings[b];
    }
  }
  return *acc;
}

double law_mean(const DiscreteLaw& law) {
  CompensatedSum acc;
  for (int k = 0; k <= law.support_max(); ++k) acc.add(k * law(k));
  return acc.value();
}

double law_variance(const DiscreteLaw& law) {
  const double m = law_mean(law);
  CompensatedSum acc;
  for (int k = 0; k <= law.support_max(); ++k) {
    acc.add((k - m) * (k - m) * law(k));
  }
  return acc.value();
}

double partial_sum_clt_distance(const DiscreteLaw& base, std::int64_t n) {
  const double v = law_variance(base);
  if (!(v > 0.0)) {
    throw std::invalid_argument(
        "In convo::partial_sum_clt_distance: base law has zero variance");
  }
  const DiscreteLaw sum_law = convolution_power(base, n);
  const double mean = static_cast<double>(n) * law_mean(base);
  const double sd = std::sqrt(static_cast<double>(n) * v);

  // F is a step function, so sup |F - Phi| is attained at a jump point,
  // approaching from the right (F_k) or from the left (F_{k-1}).
  double dist = 0.0;
  CompensatedSum cdf;
  double below = 0.0;
  for (int k = 0; k <= sum_law.support_max(); ++k) {
    cdf.add(sum_law(k));
    const double at = cdf.value();
    const double phi = standard_normal_cdf((k - mean) / sd);
    dist = std::max(dist, std::abs(at - phi));
    dist = std::max(dist, std::abs(below - phi));
    below = at;
  }
  return dist;
}

template class BasicDiscreteLaw<double>;
template class BasicDiscreteLaw<Rational>;
template class BasicWeightFunction<double>;
template class BasicWeightFunction<Rational>;

template DiscreteLaw discrete_convolution(const DiscreteLaw&, const DiscreteLaw&);
template WeightFunction discrete_convolution(const WeightFunction&,
                                             const WeightFunction&);
template WeightFunction discrete_convolution(const DiscreteLaw&,
                                             const WeightFunction&);
template WeightFunction discrete_convolution(const WeightFunction&,
                                             const DiscreteLaw&);
template ExactDiscreteLaw discrete_convolution(const ExactDiscreteLaw&,
                                               const ExactDiscreteLaw&);
template ExactWeightFunction discrete_convolution(const ExactWeightFunction&,
                                                  const ExactWeightFunction&);
template ExactWeightFunction discrete_convolution(const ExactDiscreteLaw&,
                                                  const ExactWeightFunction&);
template ExactWeightFunction discrete_convolution(const ExactWeightFunction&,
                                                  const ExactDiscreteLaw&);
template double mean_one_check(const DiscreteLaw&, const WeightFunction&);
template Rational mean_one_check(const ExactDiscreteLaw&,
                                 const ExactWeightFunction&);
template DiscreteLaw pointwise_interaction(const DiscreteLaw&,
                                           const WeightFunction&);
template ExactDiscreteLaw pointwise_interaction(const ExactDiscreteLaw&,
                                                const ExactWeightFunction&);
template DiscreteLaw convolution_interaction(const DiscreteLaw&,
                                             const DiscreteLaw&);
template ExactDiscreteLaw convolution_interaction(const ExactDiscreteLaw&,
                                                  const ExactDiscreteLaw&);

}  // namespace convo
