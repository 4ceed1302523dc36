#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace convo {

// A family of r real traceless dim_f x dim_f matrices T^1..T^r. These are
// the directions along which coupling coordinates tilt the field space:
// the interaction map is the exponential of their span.
struct GeneratorSet {
  // Structural validation only (square, matching dims, finite entries, at
  // least one generator). Tracelessness and independence are quality
  // checks, reported by validate_generators rather than thrown here.
  GeneratorSet(int dim_f, std::vector<Eigen::MatrixXd> generators);

  int r() const { return static_cast<int>(generators.size()); }

  int dim_f;
  std::vector<Eigen::MatrixXd> generators;
};

struct GeneratorCheck {
  int index = 0;
  double trace_abs = 0.0;
  bool traceless = false;
};

// Outcome of validate_generators: per-generator trace report plus the rank
// of the family viewed as vectors in R^(dim_f^2).
struct GeneratorValidation {
  std::vector<GeneratorCheck> checks;
  int rank = 0;
  bool independent = false;
  bool pass = false;

  nlohmann::json to_json() const;
};

GeneratorValidation validate_generators(const GeneratorSet& gens);

// Reads {"dim_f": d, "generators": [G, ...]} where each G is either a flat
// row-major list of d*d numbers or a list of d rows. Also accepts
// {"preset": name}. Throws ConfigError on malformed input.
GeneratorSet load_generator_set(const nlohmann::json& doc);

// Named presets usable in configs.
// "diag2": dim_f 2, single generator diag(1, -1).
// "zero2": dim_f 2, single zero generator (the trivial interaction).
GeneratorSet generator_preset(const std::string& name);

}  // namespace convo
