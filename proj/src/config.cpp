#include "tlab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace tlab {

namespace {

using Json = nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::Parse, "config: " + what); }

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be a table/object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) fail("unknown key '" + item.key() + "' in " + where);
  }
}

double number(const Json& v, const std::string& key) {
  if (!v.is_number()) fail("'" + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const Json& v, const std::string& key) {
  if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::vector<double> numbers(const Json& v, const std::string& key) {
  if (!v.is_array()) fail("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const Json& x : v) out.push_back(number(x, key));
  return out;
}

SpaceSource parse_space(const Json& v) {
  reject_unknown(v, {"catalog", "n", "parameter", "weights", "file"}, "space entry");
  SpaceSource src;
  if (v.contains("file")) {
    if (v.contains("catalog")) fail("space entry has both 'file' and 'catalog'");
    if (!v["file"].is_string()) fail("'file' must be a string");
    src.file = v["file"].get<std::string>();
    return src;
  }
  if (!v.contains("catalog") || !v["catalog"].is_string()) fail("space entry needs 'catalog' or 'file'");
  const auto kind = catalog_kind_from_string(v["catalog"].get<std::string>());
  if (!kind) fail("unknown catalog space '" + v["catalog"].get<std::string>() + "'");
  CatalogSpec spec;
  spec.kind = *kind;
  if (v.contains("n")) spec.n = integer(v["n"], "n");
  if (v.contains("parameter")) spec.parameter = number(v["parameter"], "parameter");
  if (v.contains("weights")) spec.weights = numbers(v["weights"], "weights");
  if (spec.kind == CatalogKind::Path && !spec.weights.empty() && !v.contains("n")) {
    spec.n = static_cast<Index>(spec.weights.size()) + 1;
  }
  src.catalog = spec;
  return src;
}

RunConfig from_json(const Json& root) {
  reject_unknown(root,
                 {"spaces", "statements", "p", "alpha", "t_grid", "t_points", "hk_t_points", "random_functions",
                  "eigenpairs", "solver", "mean_policy", "output", "seed"},
                 "top level");
  RunConfig cfg;
  if (root.contains("spaces")) {
    if (!root["spaces"].is_array()) fail("'spaces' must be an array");
    for (const Json& s : root["spaces"]) cfg.spaces.push_back(parse_space(s));
  }
  if (root.contains("statements")) {
    if (!root["statements"].is_array()) fail("'statements' must be an array of ids");
    for (const Json& s : root["statements"]) {
      if (!s.is_string()) fail("statement ids must be strings");
      const auto st = statement_from_id(s.get<std::string>());
      if (!st) fail("unknown statement id '" + s.get<std::string>() + "'");
      cfg.statements.push_back(*st);
    }
  }
  if (root.contains("p")) cfg.p_values = numbers(root["p"], "p");
  for (double p : cfg.p_values)
    if (!(p >= 1.0)) fail("every p must be >= 1");
  if (root.contains("alpha")) cfg.alpha_values = numbers(root["alpha"], "alpha");
  for (double a : cfg.alpha_values)
    if (!(a > 0.0)) fail("every alpha must be positive");
  if (root.contains("t_grid")) {
    cfg.t_grid = numbers(root["t_grid"], "t_grid");
    for (double t : *cfg.t_grid)
      if (!(t > 0.0)) fail("t_grid entries must be positive");
  }
  auto positive_int = [&](const char* key, int& slot, int min) {
    if (!root.contains(key)) return;
    const std::int64_t v = integer(root[key], key);
    if (v < min || v > 1000000) fail(std::string("'") + key + "' out of range");
    slot = static_cast<int>(v);
  };
  positive_int("t_points", cfg.t_points, 1);
  positive_int("hk_t_points", cfg.hk_t_points, 1);
  positive_int("random_functions", cfg.random_functions, 0);
  positive_int("eigenpairs", cfg.eigenpairs, 1);
  if (root.contains("solver")) {
    const Json& s = root["solver"];
    reject_unknown(s, {"epsilon", "epsilon_decay", "max_iterations", "tolerance"}, "solver");
    if (s.contains("epsilon")) cfg.solver.epsilon = number(s["epsilon"], "epsilon");
    if (s.contains("epsilon_decay")) cfg.solver.epsilon_decay = number(s["epsilon_decay"], "epsilon_decay");
    if (s.contains("max_iterations")) {
      cfg.solver.max_iterations = static_cast<int>(integer(s["max_iterations"], "max_iterations"));
    }
    if (s.contains("tolerance")) cfg.solver.tolerance = number(s["tolerance"], "tolerance");
    if (cfg.solver.epsilon < 0.0 || !(cfg.solver.epsilon_decay > 0.0 && cfg.solver.epsilon_decay < 1.0) ||
        cfg.solver.max_iterations < 1 || !(cfg.solver.tolerance > 0.0)) {
      fail("invalid solver settings");
    }
  }
  if (root.contains("mean_policy")) {
    const Json& m = root["mean_policy"];
    if (m == "subtract") {
      cfg.mean_policy = MeanPolicy::Subtract;
    } else if (m == "reject") {
      cfg.mean_policy = MeanPolicy::Reject;
    } else {
      fail("'mean_policy' must be \"subtract\" or \"reject\"");
    }
  }
  if (root.contains("output")) {
    if (!root["output"].is_string()) fail("'output' must be a string");
    cfg.output = root["output"].get<std::string>();
  }
  if (root.contains("seed")) {
    const std::int64_t seed = integer(root["seed"], "seed");
    if (seed < 0) fail("'seed' must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  return cfg;
}

}  // namespace

MetricMeasureSpace SpaceSource::build() const {
  if (file) return load_space(*file);
  if (catalog) return build_catalog_space(*catalog);
  throw Error(ErrorCode::InvalidArgument, "empty space source");
}

std::string SpaceSource::describe() const {
  if (file) return file->string();
  if (catalog) return to_string(catalog->kind) + "(n=" + std::to_string(catalog->n) + ")";
  return "empty";
}

RunConfig parse_config(const std::string& text, bool toml) {
  Json root;
  if (toml) {
    try {
      const toml::table table = toml::parse(text);
      std::ostringstream os;
      os << toml::json_formatter{table};
      root = Json::parse(os.str());
    } catch (const toml::parse_error& e) {
      fail(std::string("TOML parse error: ") + std::string(e.description()));
    }
  } else {
    try {
      root = Json::parse(text);
    } catch (const Json::parse_error& e) {
      fail(std::string("JSON parse error: ") + e.what());
    }
  }
  return from_json(root);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.extension() == ".toml");
}

}  // namespace tlab
