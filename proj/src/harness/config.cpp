#include "ais/harness/config.hpp"

#include <algorithm>
#include <set>
#include <string_view>

#include "ais/harness/csv.hpp"

namespace ais::harness {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

template <typename T>
T get_required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return get_or<T>(j, key, T{}, where);
}

int get_int(const json& j, const char* key, int fallback, const std::string& where) {
  if (j.contains(key) && !j.at(key).is_number_integer()) {
    throw ConfigError(where + "." + key + ": expected an integer");
  }
  return get_or<int>(j, key, fallback, where);
}

idionet::Matrix matrix_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw ConfigError(where + ": rows must be non-empty arrays");
  idionet::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ConfigError(where + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ConfigError(where + ": non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

json matrix_to(const idionet::Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

BitPattern bits_from(const json& j, const char* key, const std::string& where) {
  const auto text = get_required<std::string>(j, key, where);
  try {
    return BitPattern::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

}  // namespace

json parse_json_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
}

std::filesystem::path RunConfigFile::input(const std::string& name) const {
  if (auto p = optional_input(name)) return *p;
  throw ConfigError(path.string() + ": inputs." + name + " is required for " + algorithm);
}

std::optional<std::filesystem::path> RunConfigFile::optional_input(const std::string& name) const {
  auto it = inputs.find(name);
  if (it == inputs.end()) return std::nullopt;
  return it->second;
}

RunConfigFile parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc, {"algorithm", "seed", "inputs", "output", "params"}, "config");
  RunConfigFile cfg;
  cfg.algorithm = get_required<std::string>(doc, "algorithm", "config");
  static const std::map<std::string, std::set<std::string>> allowed_inputs{
      {"negsel", {"self", "test"}},
      {"clonal", {"train", "test"}},
      {"idionet", {"scenario"}},
      {"dca", {"stream", "truth"}},
  };
  const auto allowed = allowed_inputs.find(cfg.algorithm);
  if (allowed == allowed_inputs.end()) {
    throw ConfigError("config: unknown algorithm '" + cfg.algorithm + "'");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("config.seed: expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path raw(p);
    return raw.is_absolute() ? raw : (base_dir / raw).lexically_normal();
  };
  if (doc.contains("inputs")) {
    require_object(doc["inputs"], "config.inputs");
    for (const auto& [key, value] : doc["inputs"].items()) {
      if (!allowed->second.count(key)) {
        throw ConfigError("config.inputs: unknown key '" + key + "' for " + cfg.algorithm);
      }
      if (!value.is_string()) throw ConfigError("config.inputs." + key + ": expected a path string");
      cfg.inputs[key] = resolve(value.get<std::string>());
    }
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("config.output: expected a path string");
    cfg.output = resolve(doc["output"].get<std::string>());
  }
  if (doc.contains("params")) {
    require_object(doc["params"], "config.params");
    cfg.params = doc["params"];
  }
  return cfg;
}

RunConfigFile load_run_config(const std::filesystem::path& path) {
  auto cfg = parse_run_config(parse_json_file(path), path.parent_path());
  cfg.path = path;
  return cfg;
}

NegSelParams negsel_params(const json& params, const Pattern& self_example) {
  const std::string where = "params";
  reject_unknown(params, {"n_candidates", "rule", "r", "radius", "activation_threshold", "distinct",
                          "lower", "upper", "coverage_samples"},
                 where);
  NegSelParams out;
  auto& cfg = out.cfg;
  cfg.n_candidates = get_int(params, "n_candidates", cfg.n_candidates, where);
  cfg.distinct = get_or<bool>(params, "distinct", false, where);
  out.coverage_samples = get_int(params, "coverage_samples", 0, where);
  if (out.coverage_samples < 0) throw ConfigError("params.coverage_samples: must be >= 0");

  const bool bits = std::holds_alternative<BitPattern>(self_example);
  const auto rule = get_or<std::string>(params, "rule", bits ? "r_contiguous" : "real_threshold", where);
  if (rule == "r_contiguous") {
    if (params.contains("radius")) throw ConfigError("params.radius: only valid for real_threshold");
    cfg.rule = negsel::RContiguousRule{get_int(params, "r", 4, where)};
  } else if (rule == "real_threshold") {
    if (params.contains("r")) throw ConfigError("params.r: only valid for r_contiguous");
    cfg.rule = negsel::RealThresholdRule{get_or<double>(params, "radius", 0.1, where)};
  } else {
    throw ConfigError("params.rule: expected r_contiguous or real_threshold");
  }
  if (params.contains("activation_threshold")) {
    cfg.activation_threshold = get_or<double>(params, "activation_threshold", 0.0, where);
  }
  if (bits) {
    if (params.contains("lower") || params.contains("upper")) {
      throw ConfigError("params.lower/upper: only valid for real-valued data");
    }
    cfg.space = BitSpace{std::get<BitPattern>(self_example).size()};
  } else {
    cfg.space = negsel::RealSpace{std::get<FeatureVector>(self_example).size(),
                                  get_or<double>(params, "lower", 0.0, where),
                                  get_or<double>(params, "upper", 1.0, where)};
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  return out;
}

ClonalParams clonal_params(const json& params) {
  const std::string where = "params";
  reject_unknown(params, {"mode", "objective", "dimension", "lower", "upper", "population_n",
                          "clone_factor", "mutation_scale", "replacement_count", "elitism",
                          "max_iterations", "stop_tolerance", "stall_iterations"},
                 where);
  ClonalParams out;
  const auto mode = get_or<std::string>(params, "mode", "optimize", where);
  if (mode == "optimize") {
    out.mode = ClonalMode::Optimize;
  } else if (mode == "classify") {
    out.mode = ClonalMode::Classify;
  } else {
    throw ConfigError("params.mode: expected optimize or classify");
  }
  out.objective = get_or<std::string>(params, "objective", out.objective, where);
  if (out.mode == ClonalMode::Optimize && !clonal::objective_by_name(out.objective)) {
    throw ConfigError("params.objective: unknown objective '" + out.objective + "'");
  }
  const int dim = get_int(params, "dimension", 2, where);
  if (dim < 1) throw ConfigError("params.dimension: must be >= 1");
  out.dimension = static_cast<std::size_t>(dim);
  out.lower = get_or<double>(params, "lower", out.lower, where);
  out.upper = get_or<double>(params, "upper", out.upper, where);
  auto& cfg = out.cfg;
  cfg.population_n = get_int(params, "population_n", cfg.population_n, where);
  cfg.clone_factor = get_or<double>(params, "clone_factor", cfg.clone_factor, where);
  cfg.mutation_scale = get_or<double>(params, "mutation_scale", cfg.mutation_scale, where);
  cfg.replacement_count = get_int(params, "replacement_count", cfg.replacement_count, where);
  cfg.elitism = get_or<bool>(params, "elitism", cfg.elitism, where);
  cfg.max_iterations = get_int(params, "max_iterations", cfg.max_iterations, where);
  cfg.stop_tolerance = get_or<double>(params, "stop_tolerance", cfg.stop_tolerance, where);
  cfg.stall_iterations = get_int(params, "stall_iterations", cfg.stall_iterations, where);
  try {
    cfg.validate();
    clonal::Bounds::cube(out.dimension, out.lower, out.upper).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  return out;
}

dca::DcaConfig dca_params(const json& params) {
  const std::string where = "params";
  reject_unknown(params, {"num_cells", "lifespan_schedule", "weights", "threshold", "score_flush_records"},
                 where);
  dca::DcaConfig cfg;
  const int cells = get_int(params, "num_cells", static_cast<int>(cfg.num_cells), where);
  if (cells < 1) throw ConfigError("params.num_cells: must be >= 1");
  cfg.num_cells = static_cast<std::size_t>(cells);
  cfg.lifespan_schedule = get_or<std::vector<double>>(params, "lifespan_schedule", cfg.lifespan_schedule, where);
  cfg.threshold = get_or<double>(params, "threshold", cfg.threshold, where);
  cfg.score_flush_records = get_or<bool>(params, "score_flush_records", cfg.score_flush_records, where);
  if (params.contains("weights")) {
    const auto& w = params["weights"];
    const std::string ww = "params.weights";
    reject_unknown(w, {"csm_pamp", "csm_danger", "csm_safe", "k_pamp", "k_danger", "k_safe"}, ww);
    auto& sw = cfg.weights;
    sw.csm_pamp = get_or<double>(w, "csm_pamp", sw.csm_pamp, ww);
    sw.csm_danger = get_or<double>(w, "csm_danger", sw.csm_danger, ww);
    sw.csm_safe = get_or<double>(w, "csm_safe", sw.csm_safe, ww);
    sw.k_pamp = get_or<double>(w, "k_pamp", sw.k_pamp, ww);
    sw.k_danger = get_or<double>(w, "k_danger", sw.k_danger, ww);
    sw.k_safe = get_or<double>(w, "k_safe", sw.k_safe, ww);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  return cfg;
}

idionet::Scenario parse_scenario(const json& doc) {
  const std::string where = "scenario";
  reject_unknown(doc, {"antibodies", "antigens", "match", "params", "P", "I", "presentations", "steps",
                       "idiotope_index"},
                 where);
  idionet::Scenario sc;
  if (!doc.contains("antibodies") || !doc["antibodies"].is_array()) {
    throw ConfigError("scenario.antibodies: expected an array");
  }
  for (std::size_t i = 0; i < doc["antibodies"].size(); ++i) {
    const auto& a = doc["antibodies"][i];
    const auto w = "scenario.antibodies[" + std::to_string(i) + "]";
    reject_unknown(a, {"paratope", "epitope", "concentration", "action"}, w);
    idionet::NetworkAntibody ab{bits_from(a, "paratope", w), bits_from(a, "epitope", w),
                                get_or<double>(a, "concentration", 0.5, w), std::nullopt};
    if (a.contains("action")) ab.action = get_or<std::string>(a, "action", "", w);
    sc.antibodies.push_back(std::move(ab));
  }
  if (doc.contains("antigens")) {
    if (!doc["antigens"].is_array()) throw ConfigError("scenario.antigens: expected an array");
    for (std::size_t j = 0; j < doc["antigens"].size(); ++j) {
      const auto& g = doc["antigens"][j];
      const auto w = "scenario.antigens[" + std::to_string(j) + "]";
      reject_unknown(g, {"epitope", "concentration"}, w);
      sc.antigens.push_back({bits_from(g, "epitope", w), get_or<double>(g, "concentration", 1.0, w)});
    }
  }
  if (doc.contains("match")) {
    const auto& m = doc["match"];
    reject_unknown(m, {"threshold", "mode", "min_overlap"}, "scenario.match");
    sc.match.threshold = get_int(m, "threshold", sc.match.threshold, "scenario.match");
    sc.match.min_overlap = get_int(m, "min_overlap", sc.match.min_overlap, "scenario.match");
    const auto mode = get_or<std::string>(m, "mode", "all_shifts", "scenario.match");
    if (mode == "all_shifts") {
      sc.match.mode = AlignmentMode::AllShiftedOverlaps;
    } else if (mode == "full_overlap") {
      sc.match.mode = AlignmentMode::FullOverlapOnly;
    } else {
      throw ConfigError("scenario.match.mode: expected all_shifts or full_overlap");
    }
  }
  if (doc.contains("params")) {
    const auto& p = doc["params"];
    reject_unknown(p, {"c", "k1", "k2", "dt", "squash_theta"}, "scenario.params");
    sc.params.c = get_or<double>(p, "c", sc.params.c, "scenario.params");
    sc.params.k1 = get_or<double>(p, "k1", sc.params.k1, "scenario.params");
    sc.params.k2 = get_or<double>(p, "k2", sc.params.k2, "scenario.params");
    sc.params.dt = get_or<double>(p, "dt", sc.params.dt, "scenario.params");
    sc.params.squash_theta = get_or<double>(p, "squash_theta", sc.params.squash_theta, "scenario.params");
  }
  if (!doc.contains("P") || !doc.contains("I")) throw ConfigError("scenario: P and I are required");
  sc.P = matrix_from(doc["P"], "scenario.P");
  sc.I = matrix_from(doc["I"], "scenario.I");
  sc.presentations = get_or<std::vector<std::size_t>>(doc, "presentations", {0}, where);
  sc.steps = get_int(doc, "steps", sc.steps, where);
  const auto index = get_or<std::string>(doc, "idiotope_index", "antigenic", where);
  if (index == "antigenic") {
    sc.idiotope_index = idionet::IdiotopeIndex::Antigenic;
  } else if (index == "printed") {
    sc.idiotope_index = idionet::IdiotopeIndex::Printed;
  } else {
    throw ConfigError("scenario.idiotope_index: expected antigenic or printed");
  }
  try {
    sc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return sc;
}

json scenario_to_json(const idionet::Scenario& sc) {
  json doc;
  doc["antibodies"] = json::array();
  for (const auto& ab : sc.antibodies) {
    json a{{"paratope", ab.paratope.str()}, {"epitope", ab.epitope.str()}, {"concentration", ab.concentration}};
    if (ab.action) a["action"] = *ab.action;
    doc["antibodies"].push_back(a);
  }
  doc["antigens"] = json::array();
  for (const auto& g : sc.antigens) {
    doc["antigens"].push_back({{"epitope", g.epitope.str()}, {"concentration", g.concentration}});
  }
  doc["match"] = {{"threshold", sc.match.threshold},
                  {"mode", sc.match.mode == AlignmentMode::AllShiftedOverlaps ? "all_shifts" : "full_overlap"},
                  {"min_overlap", sc.match.min_overlap}};
  doc["params"] = {{"c", sc.params.c},
                   {"k1", sc.params.k1},
                   {"k2", sc.params.k2},
                   {"dt", sc.params.dt},
                   {"squash_theta", sc.params.squash_theta}};
  doc["P"] = matrix_to(sc.P);
  doc["I"] = matrix_to(sc.I);
  doc["presentations"] = sc.presentations;
  doc["steps"] = sc.steps;
  doc["idiotope_index"] = sc.idiotope_index == idionet::IdiotopeIndex::Antigenic ? "antigenic" : "printed";
  return doc;
}

}  // namespace ais::harness
