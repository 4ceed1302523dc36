#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace convo {

namespace detail {

template <class F>
double pairwise_sum_impl(std::int64_t lo, std::int64_t hi, F&& f) {
  const std::int64_t n = hi - lo;
  if (n <= 32) {
    double acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) acc += f(i);
    return acc;
  }
  const std::int64_t mid = lo + n / 2;
  return pairwise_sum_impl(lo, mid, f) + pairwise_sum_impl(mid, hi, f);
}

}  // namespace detail

// Sum f(0) + ... + f(n-1) over a fixed binary tree. The tree shape depends
// only on n, so the result is bit-identical no matter how the terms were
// produced (single thread, many threads, re-run).
template <class F>
double pairwise_sum(std::int64_t n, F&& f) {
  if (n <= 0) return 0.0;
  return detail::pairwise_sum_impl(0, n, f);
}

inline double pairwise_sum(std::span<const double> xs) {
  return pairwise_sum(static_cast<std::int64_t>(xs.size()),
                      [&](std::int64_t i) { return xs[static_cast<std::size_t>(i)]; });
}

// Compensated accumulator for running sums whose length is not known up
// front. Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

// Sample mean of f(0..n-1) with the standard Monte Carlo error estimate
// sd / sqrt(n). Uses pairwise summation for both passes, so the result is
// deterministic for a fixed sequence.
template <class F>
MeanAndError mean_and_error(std::int64_t n, F&& f) {
  MeanAndError out;
  out.n = n;
  if (n <= 0) return out;
  out.mean = pairwise_sum(n, f) / static_cast<double>(n);
  if (n == 1) return out;
  const double m = out.mean;
  const double ss = pairwise_sum(n, [&](std::int64_t i) {
    const double d = f(i) - m;
    return d * d;
  });
  out.std_error = std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n)));
  return out;
}

}  // namespace convo
