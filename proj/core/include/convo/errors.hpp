#pragma once

#include <stdexcept>
#include <string>

namespace convo {

// Raised when a config document is malformed: bad type, missing field,
// unknown key, out-of-range value. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a mathematical admissibility condition fails: an interaction
// map that is not invertible where it must be, a determinant that drifts
// with the coordinates, an engine pushed past its validity caps. Maps to
// CLI exit code 3. `condition` is the number of the violated condition
// (1 = normalized inputs, 2 = endomorphism dimensions, 3 = invertibility,
// 4 = determinant constancy), or 0 when the failure is not one of the four.
class ConditionViolation : public std::runtime_error {
 public:
  ConditionViolation(int condition, const std::string& what)
      : std::runtime_error(what), condition_(condition) {}
  int condition() const { return condition_; }

 private:
  int condition_;
};

}  // namespace convo
