#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>

#include "ais/harness/config.hpp"
#include "ais/harness/csv.hpp"
#include "ais/harness/datasets.hpp"
#include "ais/harness/metrics.hpp"
#include "ais/harness/scenarios.hpp"
#include "oracles.hpp"

using namespace ais;
using namespace ais::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::path(AIS_TEST_TMP) / "harness" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& path, const std::string& text) {
  write_text(path, text);
  return path;
}

}  // namespace

TEST_CASE("dataset loading: empty file and single row and malformed rows") {
  const auto dir = scratch("load");
  CHECK_THROWS_AS(load_dataset(write(dir / "empty.csv", "")), DataError);
  CHECK_THROWS_AS(load_stream(write(dir / "empty_stream.csv", "")), DataError);
  CHECK_THROWS_AS(load_class_dataset(write(dir / "blank.csv", "\n\n")), DataError);
  CHECK_THROWS_AS(load_dataset(dir / "missing.csv"), DataError);

  const auto one = load_dataset(write(dir / "one.csv", "bits,label\n0101,anomalous\n"));
  REQUIRE(one.items.size() == 1);
  CHECK(std::get<BitPattern>(one.items[0].pattern).str() == "0101");
  CHECK(one.items[0].label == Label::Anomalous);

  const auto real = load_dataset(write(dir / "real.csv", "a,b\n0.5,1e-3\n"));
  CHECK(std::get<FeatureVector>(real.items[0].pattern).values() == std::vector<double>{0.5, 1e-3});
  CHECK_FALSE(real.items[0].label.has_value());

  const auto bad_number = write(dir / "bad.csv", "a,b\n1,2\n\n3,x\n");
  try {
    load_dataset(bad_number);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("bad.csv:4:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_dataset(write(dir / "ragged.csv", "a,b\n1\n")), DataError);
  CHECK_THROWS_AS(load_dataset(write(dir / "mixed.csv", "bits\n01\n011\n")), DataError);
  CHECK_THROWS_AS(load_dataset(write(dir / "label.csv", "bits,label\n01,weird\n")), DataError);
  CHECK_THROWS_AS(load_dataset(write(dir / "notbits.csv", "bits\n012\n")), DataError);
}

TEST_CASE("stream loading validates schema and order") {
  const auto dir = scratch("stream");
  const std::string header = "time_index,kind,antigen_type,pamp,danger,safe\n";
  const auto ok = load_stream(write(dir / "ok.csv", header + "0,antigen,A,,,\n1,signal,,1,0,2.5\n"));
  REQUIRE(ok.size() == 2);
  CHECK(std::get<dca::AntigenEvent>(ok[0].payload).type_id == "A");
  CHECK(std::get<dca::SignalFrame>(ok[1].payload).safe == 2.5);

  CHECK_THROWS_AS(load_stream(write(dir / "hdr.csv", "t,kind\n0,antigen\n")), DataError);
  CHECK_THROWS_AS(load_stream(write(dir / "kind.csv", header + "0,cookie,,,,\n")), DataError);
  CHECK_THROWS_AS(load_stream(write(dir / "neg.csv", header + "0,signal,,-1,0,0\n")), DataError);
  CHECK_THROWS_AS(load_stream(write(dir / "mix.csv", header + "0,antigen,A,1,,\n")), DataError);
  CHECK_THROWS_AS(load_stream(write(dir / "notype.csv", header + "0,antigen,,,,\n")), DataError);
  try {
    load_stream(write(dir / "order.csv", header + "5,antigen,A,,,\n3,antigen,A,,,\n"));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("order.csv:3:") != std::string::npos);
  }
}

TEST_CASE("write-then-read round trips") {
  const auto dir = scratch("roundtrip");
  const auto negsel = negsel_bits_scenario(11);
  write_dataset(dir / "test.csv", negsel.test);
  const auto test = load_dataset(dir / "test.csv");
  REQUIRE(test.items.size() == negsel.test.items.size());
  for (std::size_t i = 0; i < test.items.size(); ++i) {
    CHECK(test.items[i].pattern == negsel.test.items[i].pattern);
    CHECK(test.items[i].label == negsel.test.items[i].label);
  }

  const auto blobs = clonal_class_scenario(11);
  write_class_dataset(dir / "train.csv", blobs.train);
  const auto train = load_class_dataset(dir / "train.csv");
  CHECK(train.features == blobs.train.features);
  CHECK(train.classes == blobs.train.classes);

  const auto dca = dca_canonical_scenario(11);
  write_stream(dir / "stream.csv", dca.stream);
  const auto stream = load_stream(dir / "stream.csv");
  REQUIRE(stream.size() == dca.stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    CHECK(stream[i].time_index == dca.stream[i].time_index);
    if (const auto* f = std::get_if<dca::SignalFrame>(&dca.stream[i].payload)) {
      const auto& g = std::get<dca::SignalFrame>(stream[i].payload);
      CHECK(g.pamp == f->pamp);
      CHECK(g.danger == f->danger);
      CHECK(g.safe == f->safe);
    } else {
      CHECK(std::get<dca::AntigenEvent>(stream[i].payload).type_id ==
            std::get<dca::AntigenEvent>(dca.stream[i].payload).type_id);
    }
  }

  LabeledDataset reals;
  reals.items = {{FeatureVector{0.1, 1.0 / 3.0}, Label::Normal}, {FeatureVector{-2.5e-300, 7.0}, Label::Anomalous}};
  write_dataset(dir / "reals.csv", reals);
  const auto back = load_dataset(dir / "reals.csv");
  CHECK(back.items[0].pattern == reals.items[0].pattern);
  CHECK(back.items[1].pattern == reals.items[1].pattern);
}

TEST_CASE("generate_scenario is byte-identical per seed") {
  for (const auto& name : scenario_names()) {
    const auto a = generate_scenario(name, 5, scratch(name + "_a"));
    const auto b = generate_scenario(name, 5, scratch(name + "_b"));
    const auto c = generate_scenario(name, 6, scratch(name + "_c"));
    REQUIRE(a.size() == b.size());
    bool any_difference = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].filename() == b[i].filename());
      CHECK(read_text(a[i]) == read_text(b[i]));
      any_difference |= read_text(a[i]) != read_text(c[i]);
    }
    CHECK(any_difference);
  }
  CHECK_THROWS_AS(generate_scenario("nope", 1, scratch("nope")), std::invalid_argument);
}

TEST_CASE("negsel-bits partitions the l=8 space exhaustively and disjointly") {
  const auto all = oracle::all_bit_strings(8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sc = negsel_bits_scenario(seed);
    REQUIRE(sc.test.items.size() == all.size());
    std::set<std::string> self;
    for (const auto& item : sc.self.items) self.insert(std::get<BitPattern>(item.pattern).str());
    CHECK(self.size() == sc.self.items.size());
    std::set<std::string> normal, anomalous;
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto s = std::get<BitPattern>(sc.test.items[i].pattern).str();
      CHECK(s == all[i]);
      (sc.test.items[i].label == Label::Normal ? normal : anomalous).insert(s);
    }
    CHECK(normal == self);
    CHECK(normal.size() + anomalous.size() == all.size());
    for (const auto& s : normal) CHECK_FALSE(anomalous.count(s));
  }
}

TEST_CASE("dca-canonical: two antigen types in disjoint contexts and sign separated") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sc = dca_canonical_scenario(seed);
    std::set<std::string> types;
    std::map<std::string, std::pair<std::size_t, std::size_t>> span;
    for (std::size_t i = 0; i < sc.stream.size(); ++i) {
      if (const auto* a = std::get_if<dca::AntigenEvent>(&sc.stream[i].payload)) {
        types.insert(a->type_id);
        auto [it, fresh] = span.try_emplace(a->type_id, i, i);
        if (!fresh) it->second.second = i;
      }
    }
    CHECK(types == std::set<std::string>{sc.safe_type, sc.pamp_type});
    const auto a_last = span.at(sc.safe_type).second;
    const auto b_first = span.at(sc.pamp_type).first;
    CHECK(a_last < b_first);
    for (std::size_t i = 0; i < sc.stream.size(); ++i) {
      const auto* f = std::get_if<dca::SignalFrame>(&sc.stream[i].payload);
      if (!f) continue;
      if (i < b_first - 12) {
        CHECK((f->pamp == 0.0 && f->danger == 0.0 && f->safe > 0.0));
      } else {
        CHECK((f->pamp > 0.0 && f->safe == 0.0));
      }
    }
    const auto report = dca::run(sc.stream, sc.config);
    CHECK(*report.scores.at(sc.safe_type).k_a < 0.0);
    CHECK(*report.scores.at(sc.pamp_type).k_a > 0.0);
  }
}

TEST_CASE("evaluate") {
  const std::vector<bool> truth{true, false, true, false};
  const auto perfect = evaluate(truth, truth);
  CHECK(perfect.true_positive_rate == 1.0);
  CHECK(perfect.false_positive_rate == 0.0);
  CHECK(perfect.accuracy == 1.0);

  const auto alarmist = evaluate(std::vector<bool>(5, true), std::vector<bool>(5, false));
  CHECK(alarmist.false_positive_rate == 1.0);
  CHECK(alarmist.true_positive_rate == 1.0);
  CHECK(alarmist.accuracy == 0.0);

  // 20 items counted by hand:
  //   predicted: 1 1 0 0 1 0 1 1 0 0 1 0 0 1 1 0 0 0 1 0
  //   actual:    1 0 0 1 1 0 1 0 0 0 1 1 0 1 0 0 1 0 1 0
  //   TP = 6 (idx 0,4,6,10,13,18)  FP = 3 (1,7,14)  FN = 3 (3,11,17)  TN = 8
  const std::string p = "11001011001001100010";
  const std::string a = "10011010001101000110";
  std::vector<bool> predicted, actual;
  for (std::size_t i = 0; i < 20; ++i) {
    predicted.push_back(p[i] == '1');
    actual.push_back(a[i] == '1');
  }
  const auto m = evaluate(predicted, actual);
  CHECK(m.true_positive == 6);
  CHECK(m.false_positive == 3);
  CHECK(m.false_negative == 3);
  CHECK(m.true_negative == 8);
  CHECK(m.total() == 20);
  CHECK(m.true_positive_rate == doctest::Approx(6.0 / 9.0));
  CHECK(m.false_positive_rate == doctest::Approx(3.0 / 11.0));
  CHECK(m.accuracy == doctest::Approx(14.0 / 20.0));

  CHECK_THROWS_AS(evaluate({true}, {true, false}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate({}, {}), std::invalid_argument);
}

TEST_CASE("run configuration files") {
  const auto dir = scratch("config");
  const auto cfg = load_run_config(write(dir / "dca.json", R"({
    "algorithm": "dca", "seed": 4,
    "inputs": {"stream": "data/stream.csv", "truth": "/abs/truth.csv"},
    "output": "out", "params": {"num_cells": 3}
  })"));
  CHECK(cfg.algorithm == "dca");
  CHECK(cfg.seed == 4u);
  CHECK(cfg.input("stream") == (dir / "data/stream.csv").lexically_normal());
  CHECK(cfg.input("truth") == fs::path("/abs/truth.csv"));
  CHECK(*cfg.output == (dir / "out").lexically_normal());
  CHECK(dca_params(cfg.params).num_cells == 3);
  CHECK_THROWS_AS(cfg.input("nothing"), ConfigError);

  const auto base = fs::path("/tmp");
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"algorithm":"dca","colour":1})"), base), ConfigError);
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"algorithm":"warp"})"), base), ConfigError);
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"seed":1})"), base), ConfigError);
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"algorithm":"dca","seed":-1})"), base), ConfigError);
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"algorithm":"dca","inputs":{"self":"x"}})"), base),
                  ConfigError);
  CHECK_THROWS_AS(dca_params(nlohmann::json::parse(R"({"num_cells": 0})")), ConfigError);
  CHECK_THROWS_AS(dca_params(nlohmann::json::parse(R"({"weights": {"k_safe": 0}})")), ConfigError);
  CHECK_THROWS_AS(dca_params(nlohmann::json::parse(R"({"weights": {"bogus": 1}})")), ConfigError);
  CHECK_THROWS_AS(clonal_params(nlohmann::json::parse(R"({"population_n": "many"})")), ConfigError);
  CHECK_THROWS_AS(clonal_params(nlohmann::json::parse(R"({"objective": "ackley"})")), ConfigError);
  CHECK_THROWS_AS(clonal_params(nlohmann::json::parse(R"({"replacement_count": 25})")), ConfigError);
  CHECK_THROWS_AS(load_run_config(write(dir / "broken.json", "{")), ConfigError);

  const auto ns = negsel_params(nlohmann::json::parse(R"({"r": 3, "n_candidates": 7})"),
                                Pattern{BitPattern::parse("010101")});
  CHECK(std::get<negsel::RContiguousRule>(ns.cfg.rule).r == 3);
  CHECK(std::get<BitSpace>(ns.cfg.space).length == 6);
  CHECK_THROWS_AS(negsel_params(nlohmann::json::parse(R"({"r": 9})"), Pattern{BitPattern::parse("0101")}),
                  ConfigError);
  CHECK_THROWS_AS(negsel_params(nlohmann::json::parse(R"({"radius": 0.2})"), Pattern{BitPattern::parse("0101")}),
                  ConfigError);
}

TEST_CASE("idionet scenario documents round trip") {
  const auto doc = parse_json_file(fs::path(AIS_DATA_DIR) / "idionet_scenario.json");
  const auto sc = parse_scenario(doc);
  CHECK(sc.antibodies.size() == 4);
  CHECK(sc.antibodies[1].action == "turn_left");
  const auto again = parse_scenario(scenario_to_json(sc));
  CHECK(again.P == sc.P);
  CHECK(again.I == sc.I);
  CHECK(again.presentations == sc.presentations);
  CHECK(again.params.k1 == sc.params.k1);
  CHECK(again.match.threshold == sc.match.threshold);
  CHECK(scenario_to_json(again) == scenario_to_json(sc));

  auto broken = doc;
  broken["P"][0][0] = 1.5;
  CHECK_THROWS_AS(parse_scenario(broken), ConfigError);
  broken = doc;
  broken["extra"] = true;
  CHECK_THROWS_AS(parse_scenario(broken), ConfigError);
}
