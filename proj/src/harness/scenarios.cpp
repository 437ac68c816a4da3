#include "ais/harness/scenarios.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "ais/harness/csv.hpp"
#include "ais/harness/reports.hpp"
#include "ais/rng.hpp"

namespace ais::harness {
namespace {

using nlohmann::json;

constexpr std::size_t kSelfSize = 32;
constexpr int kMixedEvents = 30;
constexpr int kSettleFrames = 12;

// Lifespans fall in [20, 40] and every settle frame carries csm >= 4, so a
// settle run of 12 frames expires every cell at least once.
constexpr double kLifespanLo = 20.0;
constexpr double kLifespanHi = 40.0;

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

BitPattern bits_of(std::size_t value, std::size_t length) {
  std::vector<std::uint8_t> bits(length);
  for (std::size_t i = 0; i < length; ++i) bits[i] = (value >> (length - 1 - i)) & 1U;
  return BitPattern(std::move(bits));
}

json config_doc(const std::string& algorithm, std::uint64_t seed, json inputs, json params) {
  return {{"algorithm", algorithm}, {"seed", seed}, {"inputs", std::move(inputs)}, {"output", "results"},
          {"params", std::move(params)}};
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"negsel-bits", "clonal-class", "sphere-opt", "dca-canonical"};
}

NegselBitsScenario negsel_bits_scenario(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "scenario.negsel-bits"));
  NegselBitsScenario sc;
  const std::size_t space = std::size_t{1} << sc.length;
  const auto chosen = sample_without_replacement(space, kSelfSize, rng);
  std::vector<bool> is_self(space, false);
  for (auto v : chosen) {
    is_self[v] = true;
    sc.self.items.push_back({bits_of(v, sc.length), Label::Normal});
  }
  for (std::size_t v = 0; v < space; ++v) {
    sc.test.items.push_back({bits_of(v, sc.length), is_self[v] ? Label::Normal : Label::Anomalous});
  }
  sc.self.provenance = "negsel-bits self set";
  sc.test.provenance = "negsel-bits exhaustive test set";
  return sc;
}

ClonalClassScenario clonal_class_scenario(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "scenario.clonal-class"));
  const double centers[3][2] = {{0.0, 0.0}, {4.0, 0.0}, {2.0, 3.5}};
  constexpr double sigma = 0.6;
  constexpr int per_class = 20;
  ClonalClassScenario sc;
  for (auto* set : {&sc.train, &sc.test}) {
    for (int i = 0; i < per_class; ++i) {
      for (int c = 0; c < 3; ++c) {
        set->features.push_back({centers[c][0] + sigma * rng.normal(), centers[c][1] + sigma * rng.normal()});
        set->classes.push_back(c);
      }
    }
  }
  sc.train.provenance = "clonal-class training blobs";
  sc.test.provenance = "clonal-class test blobs";
  return sc;
}

DcaScenario dca_canonical_scenario(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "scenario.dca-canonical"));
  DcaScenario sc;
  sc.config.num_cells = 4;
  sc.config.lifespan_schedule.clear();
  for (int i = 0; i < 4; ++i) sc.config.lifespan_schedule.push_back(rng.uniform(kLifespanLo, kLifespanHi));

  std::int64_t t = 0;
  const auto safe_frame = [&] { return dca::SignalFrame{0.0, 0.0, rng.uniform(2.0, 6.0)}; };
  const auto pamp_frame = [&] { return dca::SignalFrame{rng.uniform(2.0, 6.0), rng.uniform(0.0, 1.0), 0.0}; };
  const auto mixed = [&](const std::string& type, auto frame) {
    for (int i = 0; i < kMixedEvents; ++i) {
      const bool antigen = i == 0 || rng.bernoulli(0.5);
      if (antigen) {
        sc.stream.push_back({t++, dca::AntigenEvent{type}});
      } else {
        sc.stream.push_back({t++, frame()});
      }
    }
  };
  const auto settle = [&](auto frame) {
    for (int i = 0; i < kSettleFrames; ++i) sc.stream.push_back({t++, frame()});
  };
  mixed(sc.safe_type, safe_frame);
  settle(safe_frame);
  settle(pamp_frame);
  mixed(sc.pamp_type, pamp_frame);
  settle(pamp_frame);
  return sc;
}

std::vector<std::filesystem::path> generate_scenario(const std::string& name, std::uint64_t seed,
                                                     const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::string& file, const std::string& content) {
    write_text(out_dir / file, content);
    written.push_back(out_dir / file);
  };

  if (name == "negsel-bits") {
    const auto sc = negsel_bits_scenario(seed);
    write_dataset(out_dir / "self.csv", sc.self);
    written.push_back(out_dir / "self.csv");
    write_dataset(out_dir / "test.csv", sc.test);
    written.push_back(out_dir / "test.csv");
    std::string truth = "pattern_index,label\n";
    for (std::size_t i = 0; i < sc.test.items.size(); ++i) {
      truth += std::to_string(i) + "," + to_string(*sc.test.items[i].label) + "\n";
    }
    emit("truth.csv", truth);
    emit("negsel.json", dump_json(config_doc("negsel", seed, {{"self", "self.csv"}, {"test", "test.csv"}},
                                             {{"n_candidates", 200},
                                              {"rule", "r_contiguous"},
                                              {"r", 6},
                                              {"distinct", true},
                                              {"coverage_samples", 2000}})));
  } else if (name == "clonal-class") {
    const auto sc = clonal_class_scenario(seed);
    write_class_dataset(out_dir / "train.csv", sc.train);
    written.push_back(out_dir / "train.csv");
    write_class_dataset(out_dir / "test.csv", sc.test);
    written.push_back(out_dir / "test.csv");
    emit("clonal.json", dump_json(config_doc("clonal", seed, {{"train", "train.csv"}, {"test", "test.csv"}},
                                             {{"mode", "classify"},
                                              {"lower", -2.0},
                                              {"upper", 6.0},
                                              {"population_n", 30},
                                              {"clone_factor", 0.5},
                                              {"mutation_scale", 0.5},
                                              {"replacement_count", 2},
                                              {"max_iterations", 10}})));
  } else if (name == "sphere-opt") {
    emit("clonal.json", dump_json(config_doc("clonal", seed, json::object(),
                                             {{"mode", "optimize"},
                                              {"objective", "sphere"},
                                              {"dimension", 2},
                                              {"lower", -5.0},
                                              {"upper", 5.0},
                                              {"population_n", 20},
                                              {"max_iterations", 200}})));
    emit("truth.json", dump_json({{"objective", "sphere"}, {"optimum", {0.0, 0.0}}, {"value", 0.0}}));
  } else if (name == "dca-canonical") {
    const auto sc = dca_canonical_scenario(seed);
    write_stream(out_dir / "stream.csv", sc.stream);
    written.push_back(out_dir / "stream.csv");
    emit("truth.csv", "antigen_type,label\n" + sc.safe_type + ",normal\n" + sc.pamp_type + ",anomalous\n");
    emit("dca.json", dump_json(config_doc("dca", seed, {{"stream", "stream.csv"}, {"truth", "truth.csv"}},
                                          {{"num_cells", sc.config.num_cells},
                                           {"lifespan_schedule", sc.config.lifespan_schedule}})));
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "'");
  }
  return written;
}

}  // namespace ais::harness
