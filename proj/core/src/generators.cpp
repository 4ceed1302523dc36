#include "convo/generators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "convo/errors.hpp"
#include "convo/tolerances.hpp"

namespace convo {

GeneratorSet::GeneratorSet(int dim, std::vector<Eigen::MatrixXd> gens)
    : dim_f(dim), generators(std::move(gens)) {
  if (dim_f < 1) {
    throw std::invalid_argument("In convo::GeneratorSet: dim_f must be >= 1");
  }
  if (generators.empty()) {
    throw std::invalid_argument(
        "In convo::GeneratorSet: need at least one generator");
  }
  for (std::size_t a = 0; a < generators.size(); ++a) {
    const auto& g = generators[a];
    if (g.rows() != dim_f || g.cols() != dim_f) {
      std::ostringstream msg;
      msg << "In convo::GeneratorSet: generator " << a << " is " << g.rows()
          << "x" << g.cols() << ", expected " << dim_f << "x" << dim_f;
      throw std::invalid_argument(msg.str());
    }
    if (!g.allFinite()) {
      std::ostringstream msg;
      msg << "In convo::GeneratorSet: generator " << a
          << " has nonfinite entries";
      throw std::invalid_argument(msg.str());
    }
  }
}

nlohmann::json GeneratorValidation::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"index", c.index},
                           {"trace_abs", c.trace_abs},
                           {"traceless", c.traceless}});
  }
  return {{"generator_checks", checks_json},
          {"rank", rank},
          {"independent", independent},
          {"pass", pass}};
}

GeneratorValidation validate_generators(const GeneratorSet& gens) {
  GeneratorValidation out;
  bool all_traceless = true;
  for (int a = 0; a < gens.r(); ++a) {
    GeneratorCheck c;
    c.index = a;
    c.trace_abs = std::abs(gens.generators[static_cast<std::size_t>(a)].trace());
    c.traceless = c.trace_abs <= tol::kTraceless;
    all_traceless = all_traceless && c.traceless;
    out.checks.push_back(c);
  }

  // Rank of the family as vectors in R^(dim_f^2). The zero family is a
  // legitimate (trivial) interaction, so rank 0 with one generator only
  // fails independence when r > the span's dimension.
  const int d2 = gens.dim_f * gens.dim_f;
  Eigen::MatrixXd stacked(d2, gens.r());
  for (int a = 0; a < gens.r(); ++a) {
    stacked.col(a) =
        Eigen::Map<const Eigen::VectorXd>(
            gens.generators[static_cast<std::size_t>(a)].data(), d2);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
  qr.setThreshold(1e-12);
  out.rank = static_cast<int>(qr.rank());
  const bool all_zero = stacked.cwiseAbs().maxCoeff() == 0.0;
  out.independent = all_zero || out.rank == gens.r();
  out.pass = all_traceless && out.independent;
  return out;
}

namespace {

Eigen::MatrixXd parse_matrix(const nlohmann::json& node, int dim_f,
                             std::size_t which) {
  const auto fail = [&](const char* what) -> std::invalid_argument {
    std::ostringstream msg;
    msg << "In convo::load_generator_set: generator " << which << ": " << what;
    return std::invalid_argument(msg.str());
  };
  if (!node.is_array() || node.empty()) throw fail("expected an array");

  Eigen::MatrixXd m(dim_f, dim_f);
  if (node.front().is_array()) {
    // Nested rows.
    if (static_cast<int>(node.size()) != dim_f) throw fail("wrong row count");
    for (int i = 0; i < dim_f; ++i) {
      const auto& row = node[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != dim_f) {
        throw fail("wrong row length");
      }
      for (int j = 0; j < dim_f; ++j) {
        const auto& v = row[static_cast<std::size_t>(j)];
        if (!v.is_number()) throw fail("non-numeric entry");
        m(i, j) = v.get<double>();
      }
    }
  } else {
    // Flat row-major.
    if (static_cast<int>(node.size()) != dim_f * dim_f) {
      throw fail("flat matrix has wrong length");
    }
    for (int i = 0; i < dim_f; ++i) {
      for (int j = 0; j < dim_f; ++j) {
        const auto& v = node[static_cast<std::size_t>(i * dim_f + j)];
        if (!v.is_number()) throw fail("non-numeric entry");
        m(i, j) = v.get<double>();
      }
    }
  }
  return m;
}

}  // namespace

GeneratorSet load_generator_set(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("In convo::load_generator_set: expected an object");
  }
  if (doc.contains("preset")) {
    if (doc.size() != 1 || !doc["preset"].is_string()) {
      throw ConfigError(
          "In convo::load_generator_set: preset takes no other keys");
    }
    return generator_preset(doc["preset"].get<std::string>());
  }
  if (!doc.contains("dim_f") || !doc["dim_f"].is_number_integer()) {
    throw ConfigError("In convo::load_generator_set: missing integer dim_f");
  }
  if (!doc.contains("generators") || !doc["generators"].is_array() ||
      doc["generators"].empty()) {
    throw ConfigError(
        "In convo::load_generator_set: missing nonempty generators array");
  }
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "dim_f" && key != "generators") {
      throw ConfigError("In convo::load_generator_set: unknown key '" + key +
                        "'");
    }
  }
  const int dim_f = doc["dim_f"].get<int>();
  if (dim_f < 1) {
    throw ConfigError("In convo::load_generator_set: dim_f must be >= 1");
  }
  std::vector<Eigen::MatrixXd> gens;
  for (std::size_t a = 0; a < doc["generators"].size(); ++a) {
    try {
      gens.push_back(parse_matrix(doc["generators"][a], dim_f, a));
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
  }
  return GeneratorSet(dim_f, std::move(gens));
}

GeneratorSet generator_preset(const std::string& name) {
  if (name == "diag2") {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
    t(0, 0) = 1.0;
    t(1, 1) = -1.0;
    return GeneratorSet(2, {t});
  }
  if (name == "zero2") {
    return GeneratorSet(2, {Eigen::MatrixXd::Zero(2, 2)});
  }
  throw ConfigError("In convo::generator_preset: unknown preset '" + name +
                    "' (known: diag2, zero2)");
}

}  // namespace convo
