#include "ais/harness/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "ais/harness/config.hpp"
#include "ais/harness/csv.hpp"
#include "ais/harness/datasets.hpp"
#include "ais/harness/metrics.hpp"
#include "ais/harness/reports.hpp"
#include "ais/harness/scenarios.hpp"
#include "ais/rng.hpp"

namespace ais::harness {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

void configure_logging() {
  static const auto logger = [] {
    auto l = std::make_shared<spdlog::logger>("ais-kit", std::make_shared<spdlog::sinks::stderr_sink_st>());
    l->set_pattern("[%l] %v");
    spdlog::set_default_logger(l);
    return l;
  }();
  const char* env = std::getenv("AIS_KIT_LOG");
  const std::string level = env ? env : "";
  if (level.empty()) {
    logger->set_level(spdlog::level::warn);
  } else if (level == "quiet") {
    logger->set_level(spdlog::level::off);
  } else if (level == "info") {
    logger->set_level(spdlog::level::info);
  } else if (level == "trace") {
    logger->set_level(spdlog::level::trace);
  } else {
    throw ConfigError("AIS_KIT_LOG must be quiet, info or trace (got '" + level + "')");
  }
}

struct Run {
  RunConfigFile file;
  std::uint64_t seed = 0;
  fs::path out_dir;
};

Run prepare(const Common& common, const std::string& algorithm) {
  Run run;
  run.file = load_run_config(common.config);
  if (run.file.algorithm != algorithm) {
    throw ConfigError(common.config + ": algorithm is '" + run.file.algorithm + "', expected '" + algorithm + "'");
  }
  run.seed = common.seed_given ? common.seed : run.file.seed.value_or(0);
  if (!common.out.empty()) {
    run.out_dir = common.out;
  } else if (run.file.output) {
    run.out_dir = *run.file.output;
  } else {
    throw ConfigError(common.config + ": no output directory (set \"output\" or pass --out)");
  }
  for (const auto& [name, path] : run.file.inputs) {
    if (!fs::exists(path)) throw ConfigError(common.config + ": inputs." + name + " not found: " + path.string());
  }
  spdlog::info("{}: config {}, seed {}, output {}", algorithm, common.config, run.seed, run.out_dir.string());
  return run;
}

void write_json(const fs::path& path, const json& doc, std::ostream& out) {
  write_text(path, dump_json(doc));
  out << path.string() << "\n";
}

void write_file(const fs::path& path, const std::string& text, std::ostream& out) {
  write_text(path, text);
  out << path.string() << "\n";
}

std::vector<bool> anomalous_flags(const LabeledDataset& data) {
  std::vector<bool> flags;
  for (const auto& item : data.items) flags.push_back(*item.label == Label::Anomalous);
  return flags;
}

int run_negsel(const Common& common, std::ostream& out) {
  const auto run = prepare(common, "negsel");
  const auto self = load_dataset(run.file.input("self"));
  auto params = negsel_params(run.file.params, self.items.front().pattern);
  params.cfg.seed = run.seed;
  const negsel::SelfProfile profile(self.patterns());
  const auto detectors = negsel::build_detectors(params.cfg, profile);
  spdlog::info("negsel: {} of {} candidates survived censoring", detectors.size(), params.cfg.n_candidates);

  json summary{{"algorithm", "negsel"},
               {"seed", run.seed},
               {"self_size", profile.size()},
               {"candidates", params.cfg.n_candidates},
               {"detectors", detectors.size()}};
  if (params.coverage_samples > 0) {
    summary["coverage"] = negsel::coverage_estimate(detectors, profile, params.cfg, params.coverage_samples);
  }
  write_file(run.out_dir / "detectors.csv", detectors_csv(detectors), out);

  if (const auto test_path = run.file.optional_input("test")) {
    const auto test = load_dataset(*test_path);
    if (detectors.empty()) throw std::runtime_error("negsel: no detector survived censoring");
    std::vector<negsel::Classification> results;
    for (const auto& item : test.items) results.push_back(negsel::classify(item.pattern, detectors, params.cfg));
    write_file(run.out_dir / "classification.csv", classification_csv(results), out);
    const auto flagged = std::count_if(results.begin(), results.end(), [](const auto& c) { return c.anomalous; });
    summary["test_size"] = results.size();
    summary["flagged_anomalous"] = flagged;
    if (test.fully_labeled()) {
      std::vector<bool> predicted;
      for (const auto& c : results) predicted.push_back(c.anomalous);
      summary["metrics"] = metrics_json(evaluate(predicted, anomalous_flags(test)));
    }
  }
  write_json(run.out_dir / "summary.json", summary, out);
  return 0;
}

int run_clonal(const Common& common, std::ostream& out) {
  const auto run = prepare(common, "clonal");
  auto params = clonal_params(run.file.params);
  params.cfg.seed = run.seed;
  json summary{{"algorithm", "clonal"}, {"seed", run.seed}};

  if (params.mode == ClonalMode::Optimize) {
    const auto objective = *clonal::objective_by_name(params.objective);
    const auto bounds = clonal::Bounds::cube(params.dimension, params.lower, params.upper);
    Rng rng(derive_seed(run.seed, "clonal.optimize"));
    const auto trace = clonal::optimize(objective, bounds, params.cfg, rng);
    write_file(run.out_dir / "trace.csv", trace_csv(trace), out);
    summary["mode"] = "optimize";
    summary["objective"] = params.objective;
    summary["iterations"] = trace.back().iteration;
    summary["best_value"] = trace.back().best_value;
    summary["best_vector"] = trace.back().best_vector;
    spdlog::info("clonal: best {} after {} iterations", trace.back().best_value, trace.back().iteration);
  } else {
    const auto train = load_class_dataset(run.file.input("train"));
    const auto dim = train.features.front().size();
    if (run.file.params.contains("dimension") && params.dimension != dim) {
      throw ConfigError("params.dimension: does not match the training data width");
    }
    std::set<int> class_set(train.classes.begin(), train.classes.end());
    const std::vector<int> classes(class_set.begin(), class_set.end());
    clonal::ClonalClassifier clf(params.cfg, clonal::Bounds::cube(dim, params.lower, params.upper), classes);
    std::vector<Pattern> items;
    for (const auto& row : train.features) items.push_back(FeatureVector(row));
    const int epochs = clf.train(items, train.classes);
    summary["mode"] = "classify";
    summary["epochs"] = epochs;
    summary["classes"] = classes;
    if (const auto test_path = run.file.optional_input("test")) {
      const auto test = load_class_dataset(*test_path);
      if (test.features.front().size() != dim) throw DataError(test_path->string() + ": feature width differs from training data");
      std::ostringstream csv;
      csv << "index,class,predicted\n";
      std::size_t correct = 0;
      for (std::size_t i = 0; i < test.features.size(); ++i) {
        const int predicted = clf.predict(FeatureVector(test.features[i]));
        correct += predicted == test.classes[i];
        csv << i << "," << test.classes[i] << "," << predicted << "\n";
      }
      write_file(run.out_dir / "predictions.csv", csv.str(), out);
      summary["test_size"] = test.features.size();
      summary["accuracy"] = static_cast<double>(correct) / static_cast<double>(test.features.size());
    }
  }
  write_json(run.out_dir / "summary.json", summary, out);
  return 0;
}

int run_idionet(const Common& common, std::ostream& out) {
  const auto run = prepare(common, "idionet");
  if (!run.file.params.empty()) throw ConfigError("params: idionet takes its parameters from the scenario file");
  const auto scenario = parse_scenario(parse_json_file(run.file.input("scenario")));
  const auto result = idionet::run_scenario(scenario);
  write_file(run.out_dir / "trajectory.csv", trajectory_csv(result), out);

  json final_p = json::array();
  for (Eigen::Index r = 0; r < result.final_P.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < result.final_P.cols(); ++c) row.push_back(result.final_P(r, c));
    final_p.push_back(row);
  }
  json summary{{"algorithm", "idionet"}, {"steps", scenario.steps}, {"final_P", final_p}};
  const auto differences = std::count_if(result.rows.begin(), result.rows.end(),
                                         [](const auto& row) { return row.idiotypic_difference; });
  summary["idiotypic_differences"] = differences;
  if (!result.rows.empty()) {
    const auto& last = result.rows.back();
    summary["final_selected"] = last.selected;
    summary["final_concentrations"] = last.x;
    if (const auto& action = scenario.antibodies[last.selected].action) summary["final_action"] = *action;
  }
  write_json(run.out_dir / "summary.json", summary, out);
  return 0;
}

std::map<std::string, Label> predictions_from_report(const json& report, const fs::path& path) {
  if (!report.contains("classifications")) throw DataError(path.string() + ": not a dca report");
  std::map<std::string, Label> out;
  for (const auto& c : report["classifications"]) {
    const auto label = c.at("label").get<std::string>();
    if (label == "unscored") continue;
    out[c.at("antigen_type").get<std::string>()] = parse_label(label);
  }
  return out;
}

std::map<std::string, Label> load_predictions(const fs::path& path) {
  if (path.extension() == ".json") {
    try {
      return predictions_from_report(json::parse(read_text(path)), path);
    } catch (const json::exception& e) {
      throw DataError(path.string() + ": " + e.what());
    }
  }
  std::map<std::string, Label> out;
  for (auto& row : load_truth(path)) out[row.key] = row.label;
  return out;
}

Metrics score_against(const std::map<std::string, Label>& predictions, const fs::path& truth_path) {
  std::vector<bool> predicted, actual;
  for (const auto& row : load_truth(truth_path)) {
    const auto it = predictions.find(row.key);
    if (it == predictions.end()) throw DataError(truth_path.string() + ": no prediction for '" + row.key + "'");
    predicted.push_back(it->second == Label::Anomalous);
    actual.push_back(row.label == Label::Anomalous);
  }
  return evaluate(predicted, actual);
}

int run_dca(const Common& common, std::ostream& out) {
  const auto run = prepare(common, "dca");
  const auto cfg = dca_params(run.file.params);
  const auto stream = load_stream(run.file.input("stream"));
  const auto result = dca::run(stream, cfg);
  spdlog::info("dca: {} events, {} presentation records", stream.size(), result.records.size());
  const auto report = dca_report(result, cfg);
  write_json(run.out_dir / "report.json", report, out);
  if (const auto truth = run.file.optional_input("truth")) {
    write_json(run.out_dir / "metrics.json", metrics_json(score_against(predictions_from_report(report, "report"), *truth)),
               out);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ais-kit: artificial immune system algorithms"};
  app.name("ais-kit");
  app.require_subcommand(1);

  Common common;
  const auto add_run = [&](const std::string& name, const std::string& description) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", common.config, "JSON run configuration")->required();
    sub->add_option("--seed", common.seed, "root seed (overrides the config)");
    sub->add_option("--out", common.out, "output directory (overrides the config)");
    return sub;
  };
  auto* negsel_cmd = add_run("negsel", "negative selection: censor detectors, classify a test set");
  auto* clonal_cmd = add_run("clonal", "clonal selection: optimise an objective or train a classifier");
  auto* idionet_cmd = add_run("idionet", "idiotypic network scenario");
  auto* dca_cmd = add_run("dca", "dendritic cell algorithm over a signal/antigen stream");

  std::string scenario_name;
  auto* generate_cmd = app.add_subcommand("generate", "write a synthetic scenario with ground truth");
  generate_cmd->add_option("name", scenario_name, "negsel-bits | clonal-class | sphere-opt | dca-canonical")
      ->required();
  generate_cmd->add_option("--seed", common.seed, "root seed");
  generate_cmd->add_option("--out", common.out, "output directory")->required();

  std::string predictions_path, truth_path;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "confusion metrics of predictions against ground truth");
  evaluate_cmd->add_option("predictions", predictions_path, "classification CSV or dca report JSON")->required();
  evaluate_cmd->add_option("truth", truth_path, "truth CSV (key,label)")->required();
  evaluate_cmd->add_option("--out", common.out, "directory for metrics.json");

  if (argc <= 1) {
    err << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  for (auto* sub : app.get_subcommands()) {
    if (auto* seed = sub->get_option_no_throw("--seed")) common.seed_given = seed->count() > 0;
  }

  try {
    configure_logging();
    if (negsel_cmd->parsed()) return run_negsel(common, out);
    if (clonal_cmd->parsed()) return run_clonal(common, out);
    if (idionet_cmd->parsed()) return run_idionet(common, out);
    if (dca_cmd->parsed()) return run_dca(common, out);
    if (generate_cmd->parsed()) {
      const auto names = scenario_names();
      if (std::find(names.begin(), names.end(), scenario_name) == names.end()) {
        throw ConfigError("unknown scenario '" + scenario_name + "'");
      }
      for (const auto& path : generate_scenario(scenario_name, common.seed, common.out)) out << path.string() << "\n";
      return 0;
    }
    if (evaluate_cmd->parsed()) {
      const auto metrics = metrics_json(score_against(load_predictions(predictions_path), truth_path));
      if (common.out.empty()) {
        out << dump_json(metrics);
      } else {
        write_json(fs::path(common.out) / "metrics.json", metrics, out);
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ais::harness
