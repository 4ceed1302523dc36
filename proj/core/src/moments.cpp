#include "convo/moments.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace convo {

namespace {

// Multiplicity of each distinct coordinate in the product. The recursion
// state is this vector alone; the distinct coordinates themselves are fixed
// per call.
struct PairingContext {
  const Eigen::MatrixXd& cov;
  std::vector<int> coords;  // distinct coordinates
  std::map<std::vector<int>, double> memo;

  double eval(std::vector<int>& counts) {
    const int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total == 0) return 1.0;
    if (total % 2 != 0) return 0.0;
    if (auto it = memo.find(counts); it != memo.end()) return it->second;

    // Pair one occurrence of the first live coordinate with every possible
    // partner and recurse.
    std::size_t p = 0;
    while (counts[p] == 0) ++p;
    double acc = 0.0;
    if (counts[p] >= 2) {
      counts[p] -= 2;
      acc += static_cast<double>(counts[p] + 1) *
             cov(coords[p], coords[p]) * eval(counts);
      counts[p] += 2;
    }
    for (std::size_t q = p + 1; q < counts.size(); ++q) {
      if (counts[q] == 0) continue;
      counts[p] -= 1;
      counts[q] -= 1;
      acc += static_cast<double>(counts[q] + 1) *
             cov(coords[p], coords[q]) * eval(counts);
      counts[p] += 1;
      counts[q] += 1;
    }
    memo.emplace(counts, acc);
    return acc;
  }
};

}  // namespace

double gaussian_product_moment(const Eigen::MatrixXd& covariance,
                               const std::vector<int>& indices) {
  if (covariance.rows() != covariance.cols()) {
    throw std::invalid_argument(
        "In convo::gaussian_product_moment: covariance must be square");
  }
  if (indices.empty()) return 1.0;
  if (indices.size() % 2 != 0) return 0.0;

  PairingContext ctx{covariance, {}, {}};
  std::vector<int> counts;
  for (int idx : indices) {
    if (idx < 0 || idx >= covariance.rows()) {
      std::ostringstream msg;
      msg << "In convo::gaussian_product_moment: index " << idx
          << " out of range [0, " << covariance.rows() << ")";
      throw std::invalid_argument(msg.str());
    }
    bool seen = false;
    for (std::size_t k = 0; k < ctx.coords.size(); ++k) {
      if (ctx.coords[k] == idx) {
        ++counts[k];
        seen = true;
        break;
      }
    }
    if (!seen) {
      ctx.coords.push_back(idx);
      counts.push_back(1);
    }
  }
  return ctx.eval(counts);
}

double isserlis_moment(const GaussianMeasure& mu, const MomentSpec& spec) {
  if (spec.indices.empty()) {
    throw std::invalid_argument(
        "In convo::isserlis_moment: moment order must be nonempty");
  }
  for (int idx : spec.indices) {
    if (idx < 0 || idx >= mu.dim()) {
      std::ostringstream msg;
      msg << "In convo::isserlis_moment: index " << idx
          << " out of range [0, " << mu.dim() << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  return gaussian_product_moment(mu.covariance(), spec.indices);
}

}  // namespace convo
