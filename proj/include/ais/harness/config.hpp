#pragma once

// JSON run configuration.
//
//   {
//     "algorithm": "negsel" | "clonal" | "idionet" | "dca",
//     "seed": 42,
//     "inputs": { "<name>": "<path>", ... },
//     "output": "<directory>",
//     "params": { ... }
//   }
//
// Relative paths resolve against the directory holding the config file.
// Unknown keys anywhere are rejected.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ais/clonal.hpp"
#include "ais/dca.hpp"
#include "ais/idionet.hpp"
#include "ais/negsel.hpp"

namespace ais::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfigFile {
  std::filesystem::path path;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::filesystem::path> inputs;
  std::optional<std::filesystem::path> output;
  nlohmann::json params = nlohmann::json::object();

  /// Resolved path of a required input.
  std::filesystem::path input(const std::string& name) const;
  std::optional<std::filesystem::path> optional_input(const std::string& name) const;
};

RunConfigFile load_run_config(const std::filesystem::path& path);
RunConfigFile parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

struct NegSelParams {
  negsel::NegSelConfig cfg;
  int coverage_samples = 0;
};

/// The pattern space follows the self data: bit width, or dimension with
/// lower/upper bounds taken from params.
NegSelParams negsel_params(const nlohmann::json& params, const Pattern& self_example);

enum class ClonalMode { Optimize, Classify };

struct ClonalParams {
  ClonalMode mode = ClonalMode::Optimize;
  clonal::ClonalConfig cfg;
  std::string objective = "sphere";
  std::size_t dimension = 2;
  double lower = -5.0;
  double upper = 5.0;
};

ClonalParams clonal_params(const nlohmann::json& params);

dca::DcaConfig dca_params(const nlohmann::json& params);

/// Idiotypic network scenario document.
idionet::Scenario parse_scenario(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const idionet::Scenario& scenario);

nlohmann::json parse_json_file(const std::filesystem::path& path);

}  // namespace ais::harness
