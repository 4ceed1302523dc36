#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace convo {

// A batch of vector draws, one column per draw, together with the stream
// coordinates that produced it. `rejected` counts draws that a domain guard
// discarded and redrew; it is zero for unconstrained samplers.
struct SampleBatch {
  Eigen::MatrixXd values;  // dim x n
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t rejected = 0;

  int dim() const { return static_cast<int>(values.rows()); }
  std::int64_t size() const { return static_cast<std::int64_t>(values.cols()); }
};

}  // namespace convo
