#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ais/dca.hpp"
#include "ais/rng.hpp"
#include "oracles.hpp"

using namespace ais;
using namespace ais::dca;

namespace {

StreamEvent antigen(std::int64_t t, const std::string& type) { return {t, AntigenEvent{type}}; }
StreamEvent signal(std::int64_t t, double p, double d, double s) { return {t, SignalFrame{p, d, s}}; }

// A arrives around safe frames, B around pamp frames.
std::vector<StreamEvent> canonical_stream() {
  const std::string pattern = "AASAASASASBBPBBPBPBP";
  std::vector<StreamEvent> stream;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto t = static_cast<std::int64_t>(i);
    switch (pattern[i]) {
      case 'S': stream.push_back(signal(t, 0, 0, 5)); break;
      case 'P': stream.push_back(signal(t, 5, 0, 0)); break;
      default: stream.push_back(antigen(t, std::string(1, pattern[i])));
    }
  }
  return stream;
}

DcaConfig canonical_config() {
  DcaConfig cfg;
  cfg.num_cells = 2;
  cfg.lifespan_schedule = {15, 25};
  return cfg;
}

std::vector<StreamEvent> random_stream(Rng& rng, std::size_t length) {
  std::vector<StreamEvent> stream;
  for (std::size_t i = 0; i < length; ++i) {
    const auto t = static_cast<std::int64_t>(i);
    if (rng.bernoulli(0.5)) {
      stream.push_back(antigen(t, std::string(1, static_cast<char>('a' + rng.below(4)))));
    } else {
      stream.push_back(signal(t, rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3)));
    }
  }
  return stream;
}

}  // namespace

TEST_CASE("signal_transform") {
  const SignalWeights w;
  const auto zero = signal_transform({0, 0, 0}, w);
  CHECK(zero.csm == 0.0);
  CHECK(zero.k == 0.0);
  // csm = 2*0 + 1*0 + 2*10, k = 2*0 + 1*0 - 3*10
  const auto safe = signal_transform({0, 0, 10}, w);
  CHECK(safe.csm == 20.0);
  CHECK(safe.k == -30.0);
  const auto pamp = signal_transform({10, 0, 0}, w);
  CHECK(pamp.csm == 20.0);
  CHECK(pamp.k == 20.0);
  CHECK_THROWS_AS(signal_transform({-1, 0, 0}, w), std::invalid_argument);
  CHECK_THROWS_AS(signal_transform({0, std::nan(""), 0}, w), std::invalid_argument);
}

TEST_CASE("assign_antigen") {
  CHECK(assign_antigen(5, 3) == 2);
  CHECK(assign_antigen(3, 3) == 0);

  DcaConfig cfg;
  cfg.num_cells = 4;
  Population pop(cfg);
  // counters 1..10 -> slots 1,2,3,0,1,2,3,0,1,2
  std::vector<std::size_t> slots;
  for (int i = 0; i < 10; ++i) slots.push_back(pop.add_antigen({"x"}));
  CHECK(slots.front() == 1);
  std::vector<std::int64_t> sizes;
  for (const auto& cell : pop.cells()) sizes.push_back(cell.antigen_store.at("x"));
  CHECK(sizes == std::vector<std::int64_t>{2, 3, 3, 2});
  std::vector<std::int64_t> sorted = sizes;
  std::sort(sorted.rbegin(), sorted.rend());
  CHECK(sorted == std::vector<std::int64_t>{3, 3, 2, 2});
  CHECK(pop.antigen_counter() == 10);
}

TEST_CASE("apply_signal hand traces") {
  DcaConfig cfg;
  cfg.num_cells = 1;
  cfg.lifespan_schedule = {10};
  {
    Population pop(cfg);
    pop.add_antigen({"a"});
    const auto none = pop.apply_signal({0, 0, 0}, 0);
    CHECK(none.empty());
    CHECK(pop.cells()[0].lifespan == 10.0);
    // csm 0 with k != 0 needs zero csm weights on a positive signal.
    DcaConfig zero_csm = cfg;
    zero_csm.weights.csm_pamp = 0;
    Population flat(zero_csm);
    CHECK(flat.apply_signal({1, 0, 0}, 0).empty());
    CHECK(flat.cells()[0].lifespan == 10.0);
    CHECK(flat.cells()[0].k == 2.0);
  }
  {
    // 10 - 4 - 4 - 4 <= 0
    Population pop(cfg);
    pop.add_antigen({"a"});
    CHECK(pop.apply_signal({2, 0, 0}, 1).empty());
    CHECK(pop.apply_signal({2, 0, 0}, 2).empty());
    const auto third = pop.apply_signal({2, 0, 0}, 3);
    REQUIRE(third.size() == 1);
    CHECK(third[0].iterations == 3);
    CHECK(third[0].k == 12.0);
    CHECK(third[0].time_index == 3);
    CHECK(third[0].antigen_counts.at("a") == 1);
    CHECK(pop.cells()[0].iterations == 0);
    CHECK(pop.cells()[0].antigen_store.empty());
  }
  {
    DcaConfig two;
    two.num_cells = 2;
    two.lifespan_schedule = {5, 9};
    Population pop(two);
    const auto first = pop.apply_signal({2.5, 0, 0}, 1);
    REQUIRE(first.size() == 1);
    CHECK(first[0].cell_slot == 0);
    const auto second = pop.apply_signal({2.5, 0, 0}, 2);
    REQUIRE(second.size() == 1);
    CHECK(second[0].cell_slot == 1);
  }
}

TEST_CASE("reset_cell follows the cyclic schedule") {
  DcaConfig single;
  single.lifespan_schedule = {7};
  DendriticCell cell;
  for (int i = 0; i < 4; ++i) {
    cell = reset_cell(cell, 0, single);
    CHECK(cell.lifespan == 7.0);
  }

  DcaConfig alt;
  alt.lifespan_schedule = {5, 9};
  DendriticCell c;
  std::vector<double> seen;
  for (int i = 0; i < 4; ++i) {
    c = reset_cell(c, 0, alt);
    seen.push_back(c.lifespan);
  }
  CHECK(seen == std::vector<double>{9, 5, 9, 5});

  DendriticCell busy;
  busy.antigen_store["a"] = 3;
  busy.k = 4;
  busy.iterations = 2;
  const auto fresh = reset_cell(busy, 0, alt);
  CHECK(fresh.antigen_store.empty());
  CHECK(fresh.k == 0.0);
  CHECK(fresh.iterations == 0);
}

TEST_CASE("full-run replay with schedule 3-7-11") {
  // One cell, csm = 1 per frame (safe 0.5). Hand ledger of lifespans:
  // 3 -> presents on frame 3; 7 -> frame 10; 11 -> frame 21; 3 -> frame 24.
  DcaConfig cfg;
  cfg.num_cells = 1;
  cfg.lifespan_schedule = {3, 7, 11};
  std::vector<StreamEvent> stream;
  for (std::int64_t t = 1; t <= 24; ++t) {
    stream.push_back(antigen(t, "a"));
    stream.push_back(signal(t, 0, 0, 0.5));
  }
  const auto report = run(stream, cfg);
  std::vector<std::int64_t> times, iterations;
  std::vector<double> lifespans;
  for (const auto& rec : report.records) {
    if (rec.flush) continue;
    times.push_back(rec.time_index);
    iterations.push_back(rec.iterations);
    lifespans.push_back(rec.lifespan);
  }
  CHECK(times == std::vector<std::int64_t>{3, 10, 21, 24});
  CHECK(iterations == std::vector<std::int64_t>{3, 7, 11, 3});
  CHECK(lifespans == std::vector<double>{3, 7, 11, 3});
  CHECK(report.records.size() == 4);  // nothing left for a flush
}

TEST_CASE("anomaly_scores") {
  CHECK(anomaly_scores({}).empty());

  PresentationRecord single;
  single.k = -7.5;
  single.antigen_counts = {{"a", 4}};
  const auto one = anomaly_scores({single});
  CHECK(one.at("a") == -7.5);

  std::vector<PresentationRecord> negative(3);
  for (std::size_t i = 0; i < 3; ++i) {
    negative[i].k = -1.0 - static_cast<double>(i);
    negative[i].antigen_counts = {{"a", 1}, {"b", static_cast<std::int64_t>(i + 1)}};
  }
  for (const auto& [type, k] : anomaly_scores(negative)) CHECK(k < 0.0);

  std::vector<PresentationRecord> mixed(3);
  mixed[0].k = 4;
  mixed[0].antigen_counts = {{"a", 2}, {"b", 1}};
  mixed[1].k = -6;
  mixed[1].antigen_counts = {{"b", 3}};
  mixed[2].k = 1.5;
  mixed[2].antigen_counts = {{"a", 5}, {"b", 2}};
  std::vector<std::tuple<double, std::string, long long>> triples;
  for (const auto& rec : mixed) {
    for (const auto& [type, count] : rec.antigen_counts) triples.emplace_back(rec.k, type, count);
  }
  const auto expected = oracle::flat_sum_scores(triples);
  const auto got = anomaly_scores(mixed);
  REQUIRE(got.size() == expected.size());
  for (const auto& [type, k] : expected) CHECK(got.at(type) == doctest::Approx(k).epsilon(1e-14));

  mixed[2].flush = true;
  CHECK(anomaly_scores(mixed).at("a") == 4.0);
  CHECK(anomaly_scores(mixed, true).at("a") == doctest::Approx(got.at("a")));
}

TEST_CASE("run: degenerate streams") {
  const auto empty = run({}, DcaConfig{});
  CHECK(empty.records.empty());
  CHECK(empty.scores.empty());
  CHECK(empty.antigen_total == 0);

  const std::vector<StreamEvent> quiet{antigen(0, "a"), signal(1, 0, 0, 0), antigen(2, "b"),
                                       signal(3, 0, 0, 0)};
  const auto report = run(quiet, DcaConfig{});
  REQUIRE(report.records.size() == 2);
  for (const auto& rec : report.records) CHECK(rec.flush);
  CHECK_FALSE(report.scores.at("a").k_a.has_value());
  CHECK_FALSE(report.scores.at("a").anomalous.has_value());
  CHECK(report.scores.at("a").ingested == 1);
  CHECK(report.scores.at("a").presented == 0);

  DcaConfig scoring;
  scoring.score_flush_records = true;
  CHECK(run(quiet, scoring).scores.at("a").k_a == 0.0);

  CHECK_THROWS_AS(run({signal(5, 1, 0, 0), signal(4, 1, 0, 0)}, DcaConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(run({antigen(0, "")}, DcaConfig{}), std::invalid_argument);
  DcaConfig bad;
  bad.lifespan_schedule = {0};
  CHECK_THROWS_AS(run({}, bad), std::invalid_argument);
}

TEST_CASE("canonical 20-event stream hand trace") {
  const auto report = run(canonical_stream(), canonical_config());
  struct Expected {
    std::int64_t t;
    std::size_t slot;
    double k;
    std::map<std::string, std::int64_t> counts;
    std::int64_t iterations;
  };
  const std::vector<Expected> expected{
      {5, 0, -30, {{"A", 2}}, 2},
      {7, 1, -45, {{"A", 3}}, 3},
      {12, 0, -20, {{"A", 1}, {"B", 1}}, 3},
      {12, 1, -5, {{"B", 1}}, 2},
      {17, 0, 20, {{"B", 1}}, 2},
      {19, 1, 30, {{"B", 2}}, 3},
  };
  REQUIRE(report.records.size() == expected.size() + 1);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& rec = report.records[i];
    CHECK_FALSE(rec.flush);
    CHECK(rec.time_index == expected[i].t);
    CHECK(rec.cell_slot == expected[i].slot);
    CHECK(rec.k == expected[i].k);
    CHECK(rec.antigen_counts == expected[i].counts);
    CHECK(rec.iterations == expected[i].iterations);
  }
  const auto& leftover = report.records.back();
  CHECK(leftover.flush);
  CHECK(leftover.cell_slot == 0);
  CHECK(leftover.antigen_counts == std::map<std::string, std::int64_t>{{"B", 1}});

  // (-30*2 - 45*3 - 20*1) / 6 and (-20 - 5 + 20 + 30*2) / 5
  CHECK(*report.scores.at("A").k_a == doctest::Approx(-215.0 / 6.0).epsilon(1e-15));
  CHECK(*report.scores.at("B").k_a == 11.0);
  CHECK_FALSE(*report.scores.at("A").anomalous);
  CHECK(*report.scores.at("B").anomalous);
  CHECK(report.antigen_total == 12);
  CHECK(report.signal_frames == 8);
}

TEST_CASE("run properties on random streams") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    DcaConfig cfg;
    cfg.num_cells = 1 + rng.below(5);
    cfg.lifespan_schedule.clear();
    for (std::size_t i = 0, n = 1 + rng.below(4); i < n; ++i) cfg.lifespan_schedule.push_back(rng.uniform(1, 20));
    const auto stream = random_stream(rng, 200);
    const auto report = run(stream, cfg);

    // Conservation.
    std::map<std::string, std::int64_t> presented;
    for (const auto& rec : report.records) {
      for (const auto& [type, count] : rec.antigen_counts) presented[type] += count;
    }
    std::map<std::string, std::int64_t> ingested;
    for (const auto& ev : stream) {
      if (const auto* a = std::get_if<AntigenEvent>(&ev.payload)) ++ingested[a->type_id];
    }
    CHECK(presented == ingested);

    // Lifespan accounting.
    for (const auto& rec : report.records) {
      if (rec.flush) continue;
      const auto it = std::find_if(stream.begin(), stream.end(), [&](const StreamEvent& ev) {
        return ev.time_index == rec.time_index;
      });
      REQUIRE(it != stream.end());
      const auto final_csm = signal_transform(std::get<SignalFrame>(it->payload), cfg.weights).csm;
      CHECK(rec.csm_accumulated >= rec.lifespan);
      CHECK(rec.csm_accumulated < rec.lifespan + final_csm);
    }

    // Determinism.
    const auto again = run(stream, cfg);
    REQUIRE(again.records.size() == report.records.size());
    for (std::size_t i = 0; i < again.records.size(); ++i) {
      CHECK(again.records[i].k == report.records[i].k);
      CHECK(again.records[i].antigen_counts == report.records[i].antigen_counts);
    }
  }
}

TEST_CASE("static population size and pamp-only frames never lower k") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    DcaConfig cfg;
    cfg.num_cells = 3;
    cfg.lifespan_schedule = {1e9};
    const auto stream = random_stream(rng, 60);
    const auto insert_at = rng.below(stream.size());
    const double pamp = rng.uniform(0.1, 5);

    Population base(cfg), boosted(cfg);
    for (std::size_t i = 0; i < stream.size(); ++i) {
      if (i == insert_at) boosted.apply_signal({pamp, 0, 0}, stream[i].time_index);
      for (auto* pop : {&base, &boosted}) {
        if (const auto* a = std::get_if<AntigenEvent>(&stream[i].payload)) {
          pop->add_antigen(*a);
        } else {
          pop->apply_signal(std::get<SignalFrame>(stream[i].payload), stream[i].time_index);
        }
        CHECK(pop->cells().size() == cfg.num_cells);
      }
    }
    for (std::size_t slot = 0; slot < cfg.num_cells; ++slot) {
      CHECK(boosted.cells()[slot].k >= base.cells()[slot].k);
      CHECK(boosted.cells()[slot].k - base.cells()[slot].k ==
            doctest::Approx(cfg.weights.k_pamp * pamp));
    }
    const auto a = base.flush(100);
    const auto b = boosted.flush(100);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].k >= a[i].k);
  }
}
