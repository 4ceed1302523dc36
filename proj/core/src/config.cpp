#include "convo/config.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "convo/errors.hpp"

namespace convo {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

void check_keys(const nlohmann::json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      fail(path, "unknown key '" + key + "'");
    }
  }
}

const nlohmann::json* find(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::int64_t require_int(const nlohmann::json& obj, const char* key,
                         const std::string& path, std::int64_t fallback,
                         std::int64_t min_value) {
  const nlohmann::json* node = find(obj, key);
  if (!node) return fallback;
  if (!node->is_number_integer()) fail(path + "." + key, "expected integer");
  const auto v = node->get<std::int64_t>();
  if (v < min_value) {
    std::ostringstream msg;
    msg << "must be >= " << min_value;
    fail(path + "." + key, msg.str());
  }
  return v;
}

// Row-major matrix, either nested rows or a flat array of dim*dim entries.
Eigen::MatrixXd parse_square_matrix(const nlohmann::json& node, int dim,
                                    const std::string& path) {
  if (!node.is_array() || node.empty()) fail(path, "expected a matrix");
  Eigen::MatrixXd m(dim, dim);
  if (node.front().is_array()) {
    if (static_cast<int>(node.size()) != dim) {
      std::ostringstream msg;
      msg << "expected " << dim << " rows";
      fail(path, msg.str());
    }
    for (int i = 0; i < dim; ++i) {
      const auto& row = node[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        std::ostringstream msg;
        msg << "row " << i << " must have " << dim << " entries";
        fail(path, msg.str());
      }
      for (int j = 0; j < dim; ++j) {
        const auto& v = row[static_cast<std::size_t>(j)];
        if (!v.is_number()) fail(path, "non-numeric entry");
        m(i, j) = v.get<double>();
      }
    }
    return m;
  }
  if (static_cast<int>(node.size()) != dim * dim) {
    std::ostringstream msg;
    msg << "flat matrix must have " << dim * dim << " entries";
    fail(path, msg.str());
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const auto& v = node[static_cast<std::size_t>(i * dim + j)];
      if (!v.is_number()) fail(path, "non-numeric entry");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

// A form entry is "identity", a matrix of precision entries, or an object
// selecting a scaled identity through either the precision or the
// covariance scale.
Eigen::MatrixXd parse_form(const nlohmann::json* node, int dim,
                           const std::string& path) {
  if (!node) return Eigen::MatrixXd::Identity(dim, dim);
  if (node->is_string()) {
    if (node->get<std::string>() == "identity") {
      return Eigen::MatrixXd::Identity(dim, dim);
    }
    fail(path, "unknown form name '" + node->get<std::string>() + "'");
  }
  if (node->is_array()) return parse_square_matrix(*node, dim, path);
  if (node->is_object()) {
    check_keys(*node, path, {"precision_scale", "covariance_scale"});
    if (node->size() != 1) {
      fail(path, "give exactly one of precision_scale, covariance_scale");
    }
    const bool is_precision = node->contains("precision_scale");
    const auto& v = is_precision ? (*node)["precision_scale"]
                                 : (*node)["covariance_scale"];
    if (!v.is_number()) fail(path, "scale must be a number");
    const double s = v.get<double>();
    if (!(s > 0.0)) fail(path, "scale must be positive");
    const double diag = is_precision ? s : 1.0 / s;
    return diag * Eigen::MatrixXd::Identity(dim, dim);
  }
  fail(path, "expected 'identity', a matrix, or a scale object");
}

// The generators value: a preset name, a list of matrices (sized by
// dims.dim_f), or the self-describing object form.
GeneratorSet parse_generators(const nlohmann::json& node, int dim_f) {
  if (node.is_string()) return generator_preset(node.get<std::string>());
  if (node.is_array()) {
    nlohmann::json wrapped;
    wrapped["dim_f"] = dim_f;
    wrapped["generators"] = node;
    return load_generator_set(wrapped);
  }
  if (node.is_object()) return load_generator_set(node);
  fail("generators", "expected a preset name, a matrix list, or an object");
}

std::vector<Functional> parse_functionals(const nlohmann::json& node,
                                          int dim_f) {
  if (!node.is_array() || node.empty()) {
    fail("functionals", "expected a nonempty array of coefficient vectors");
  }
  std::vector<Functional> fs;
  for (std::size_t k = 0; k < node.size(); ++k) {
    const auto& entry = node[k];
    const std::string path = "functionals[" + std::to_string(k) + "]";
    if (!entry.is_array() || static_cast<int>(entry.size()) != dim_f) {
      std::ostringstream msg;
      msg << "expected " << dim_f << " coefficients";
      fail(path, msg.str());
    }
    Eigen::VectorXd coeffs(dim_f);
    for (int j = 0; j < dim_f; ++j) {
      const auto& v = entry[static_cast<std::size_t>(j)];
      if (!v.is_number()) fail(path, "non-numeric coefficient");
      coeffs[j] = v.get<double>();
    }
    try {
      fs.emplace_back(std::move(coeffs));
    } catch (const std::invalid_argument& err) {
      fail(path, err.what());
    }
  }
  return fs;
}

EngineSettings parse_engine(const nlohmann::json* node, bool is_correlate,
                            std::int64_t min_n) {
  EngineSettings engine;
  if (is_correlate) {
    engine.run = {EngineKind::mc, EngineKind::semi_analytic,
                  EngineKind::quadrature, EngineKind::perturbative};
  }
  if (!node) return engine;
  if (!node->is_object()) fail("engine", "expected an object");
  check_keys(*node, "engine", {"n", "seed", "nodes", "order", "run"});

  if (const nlohmann::json* run = find(*node, "run")) {
    if (!is_correlate) fail("engine.run", "only applies to correlate");
    if (!run->is_array() || run->empty()) {
      fail("engine.run", "expected a nonempty array of engine names");
    }
    engine.run.clear();
    for (const auto& name : *run) {
      if (!name.is_string()) fail("engine.run", "engine names are strings");
      engine.run.push_back(engine_from_name(name.get<std::string>()));
    }
  }

  if (const nlohmann::json* n = find(*node, "n")) {
    if (n->is_number_integer()) {
      const auto v = n->get<std::int64_t>();
      if (v < min_n) {
        std::ostringstream msg;
        msg << "must be >= " << min_n;
        fail("engine.n", msg.str());
      }
      engine.n_mc = v;
      engine.n_semi = v;
    } else if (n->is_object()) {
      if (!is_correlate) {
        fail("engine.n", "per-engine counts only apply to correlate");
      }
      check_keys(*n, "engine.n", {"mc", "semi_analytic_mc"});
      engine.n_mc = require_int(*n, "mc", "engine.n", engine.n_mc, min_n);
      engine.n_semi =
          require_int(*n, "semi_analytic_mc", "engine.n", engine.n_semi,
                      min_n);
    } else {
      fail("engine.n", "expected an integer or per-engine object");
    }
  }

  engine.seed =
      static_cast<std::uint64_t>(require_int(*node, "seed", "engine", 1, 0));
  engine.nodes =
      static_cast<int>(require_int(*node, "nodes", "engine", engine.nodes, 1));
  engine.order =
      static_cast<int>(require_int(*node, "order", "engine", engine.order, 0));
  return engine;
}

bool engine_requested(const EngineSettings& engine, EngineKind kind) {
  for (EngineKind k : engine.run) {
    if (k == kind) return true;
  }
  return false;
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::validate:
      return "validate";
    case ExperimentKind::sample:
      return "sample";
    case ExperimentKind::correlate:
      return "correlate";
    case ExperimentKind::clt_demo:
      return "clt-demo";
    case ExperimentKind::convolution_demo:
      return "convolution-demo";
    case ExperimentKind::partition_check:
      return "partition-check";
  }
  return "unknown";
}

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "validate") return ExperimentKind::validate;
  if (name == "sample") return ExperimentKind::sample;
  if (name == "correlate") return ExperimentKind::correlate;
  if (name == "clt-demo") return ExperimentKind::clt_demo;
  if (name == "convolution-demo") return ExperimentKind::convolution_demo;
  if (name == "partition-check") return ExperimentKind::partition_check;
  throw ConfigError(
      "unknown experiment '" + name +
      "' (known: validate, sample, correlate, clt-demo, convolution-demo, "
      "partition-check)");
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  check_keys(doc, "config",
             {"spec_version", "experiment", "dims", "forms", "generators",
              "functionals", "engine", "law", "powers", "output"});

  ExperimentConfig cfg;
  cfg.spec_version =
      static_cast<int>(require_int(doc, "spec_version", "config", -1, 1));
  if (cfg.spec_version == -1) fail("config.spec_version", "required");
  if (cfg.spec_version != 1) fail("config.spec_version", "supported: 1");

  const nlohmann::json* experiment = find(doc, "experiment");
  if (!experiment || !experiment->is_string()) {
    fail("config.experiment", "required string");
  }
  cfg.experiment = experiment_from_name(experiment->get<std::string>());

  if (const nlohmann::json* output = find(doc, "output")) {
    if (!output->is_string()) fail("config.output", "expected string");
    cfg.output = output->get<std::string>();
  }

  // Domain blocks must match the experiment; a stray block is treated like
  // an unknown key. engine and output apply everywhere.
  const bool is_discrete = cfg.experiment == ExperimentKind::clt_demo;
  const bool is_convolution =
      cfg.experiment == ExperimentKind::convolution_demo;
  const bool is_correlate = cfg.experiment == ExperimentKind::correlate;
  const bool needs_generators = !is_discrete && !is_convolution;

  const std::set<std::string> relevant = [&]() -> std::set<std::string> {
    if (is_discrete) return {"law", "powers"};
    if (is_convolution) return {"dims", "forms"};
    if (is_correlate) return {"dims", "forms", "generators", "functionals"};
    return {"dims", "forms", "generators"};
  }();
  for (const char* block :
       {"dims", "forms", "generators", "functionals", "law", "powers"}) {
    if (doc.contains(block) && !relevant.contains(block)) {
      fail("config", std::string("block '") + block +
                         "' does not apply to " +
                         experiment_name(cfg.experiment));
    }
  }

  if (!is_discrete) {
    const nlohmann::json* dims = find(doc, "dims");
    if (!dims) fail("config.dims", "required for this experiment");
    if (!dims->is_object()) fail("dims", "expected an object");
    check_keys(*dims, "dims", {"dim_f", "r"});
    cfg.dim_f = static_cast<int>(require_int(*dims, "dim_f", "dims", 0, 1));
    if (cfg.dim_f == 0) fail("dims.dim_f", "required");
    if (is_convolution) {
      if (dims->contains("r")) {
        fail("dims.r", "does not apply to convolution-demo");
      }
    } else {
      cfg.r = static_cast<int>(require_int(*dims, "r", "dims", 0, 1));
      if (cfg.r == 0) fail("dims.r", "required");
    }

    const nlohmann::json* forms = find(doc, "forms");
    if (forms) {
      if (!forms->is_object()) fail("forms", "expected an object");
      check_keys(*forms, "forms", {"b_m", "b_g"});
    }
    // convolution-demo convolves the two configured forms, so both live on
    // the field space.
    const int b_g_dim = is_convolution ? cfg.dim_f : cfg.r;
    cfg.b_m = parse_form(forms ? find(*forms, "b_m") : nullptr, cfg.dim_f,
                         "forms.b_m");
    cfg.b_g = parse_form(forms ? find(*forms, "b_g") : nullptr, b_g_dim,
                         "forms.b_g");
  }

  if (needs_generators) {
    const nlohmann::json* gens = find(doc, "generators");
    if (!gens) fail("config.generators", "required for this experiment");
    GeneratorSet parsed = parse_generators(*gens, cfg.dim_f);
    if (parsed.dim_f != cfg.dim_f) {
      std::ostringstream msg;
      msg << "generator dimension " << parsed.dim_f
          << " does not match dims.dim_f " << cfg.dim_f;
      fail("generators", msg.str());
    }
    if (parsed.r() != cfg.r) {
      std::ostringstream msg;
      msg << "generator count " << parsed.r() << " does not match dims.r "
          << cfg.r;
      fail("generators", msg.str());
    }
    cfg.generators = std::move(parsed);
  }

  const std::int64_t min_n =
      cfg.experiment == ExperimentKind::partition_check ? 1 : 2;
  cfg.engine = parse_engine(find(doc, "engine"), is_correlate, min_n);

  if (is_correlate) {
    const nlohmann::json* fs = find(doc, "functionals");
    if (!fs) fail("config.functionals", "required for correlate");
    cfg.functionals = parse_functionals(*fs, cfg.dim_f);
    const bool needs_two =
        engine_requested(cfg.engine, EngineKind::quadrature) ||
        engine_requested(cfg.engine, EngineKind::perturbative);
    if (needs_two && cfg.functionals.size() != 2) {
      fail("functionals",
           "quadrature and perturbative engines are two-point only; give "
           "exactly 2 functionals or restrict engine.run");
    }
  }

  if (is_discrete) {
    cfg.law = {0.5, 0.5};
    cfg.powers = {4, 16, 64};
    if (const nlohmann::json* law = find(doc, "law")) {
      if (!law->is_array() || law->size() < 2) {
        fail("law", "expected an array of at least 2 probabilities");
      }
      cfg.law.clear();
      for (const auto& v : *law) {
        if (!v.is_number()) fail("law", "non-numeric entry");
        cfg.law.push_back(v.get<double>());
      }
    }
    if (const nlohmann::json* powers = find(doc, "powers")) {
      if (!powers->is_array() || powers->empty()) {
        fail("powers", "expected a nonempty array of counts");
      }
      cfg.powers.clear();
      for (const auto& v : *powers) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
          fail("powers", "counts must be integers >= 1");
        }
        cfg.powers.push_back(v.get<std::int64_t>());
      }
    }
  }

  // The canonical form drops the output path, which must not affect
  // results. Execution details like thread count never enter the document.
  cfg.canonical = doc;
  cfg.canonical.erase("output");

  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " +
                      err.what());
  }
  return parse_config(doc);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string config_digest(const nlohmann::json& canonical) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0')
      << fnv1a64(canonical.dump());
  return out.str();
}

}  // namespace convo
