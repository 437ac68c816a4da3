#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "ais/negsel.hpp"
#include "ais/rng.hpp"
#include "oracles.hpp"

using namespace ais;
using namespace ais::negsel;

namespace {

std::vector<Detector> detectors_from(const std::vector<std::string>& strings, int r) {
  std::vector<Detector> out;
  for (const auto& s : strings) {
    out.push_back(Detector{BitPattern::parse(s), RContiguousRule{r}, static_cast<int>(out.size())});
  }
  return out;
}

SelfProfile profile_from(const std::vector<std::string>& strings) {
  std::vector<Pattern> patterns;
  for (const auto& s : strings) patterns.emplace_back(BitPattern::parse(s));
  return SelfProfile(std::move(patterns));
}

std::vector<std::string> random_self(std::uint64_t seed, int length, std::size_t count) {
  Rng rng(seed);
  const auto all = oracle::all_bit_strings(length);
  std::set<std::string> picked;
  while (picked.size() < count) picked.insert(all[rng.below(all.size())]);
  return {picked.begin(), picked.end()};
}

std::vector<std::string> strings_of(const std::vector<Detector>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(std::get<BitPattern>(d.pattern).str());
  return out;
}

}  // namespace

TEST_CASE("generate_candidates validation and determinism") {
  NegSelConfig cfg;
  cfg.n_candidates = 0;
  CHECK_THROWS_AS(generate_candidates(cfg), std::invalid_argument);

  cfg.n_candidates = 50;
  cfg.seed = 42;
  const auto a = generate_candidates(cfg);
  const auto b = generate_candidates(cfg);
  REQUIRE(a.size() == 50);
  CHECK(strings_of(a) == strings_of(b));
  cfg.seed = 43;
  CHECK(strings_of(generate_candidates(cfg)) != strings_of(a));

  cfg.rule = RContiguousRule{9};
  CHECK_THROWS_AS(generate_candidates(cfg), std::invalid_argument);
  cfg.rule = RealThresholdRule{0.1};
  CHECK_THROWS_AS(generate_candidates(cfg), std::invalid_argument);
}

TEST_CASE("distinct sampling of all 8-bit strings yields each string once") {
  NegSelConfig cfg;
  cfg.space = BitSpace{8};
  cfg.n_candidates = 256;
  cfg.distinct = true;
  cfg.seed = 3;
  const auto strings = strings_of(generate_candidates(cfg));
  const std::set<std::string> unique(strings.begin(), strings.end());
  const auto all = oracle::all_bit_strings(8);
  CHECK(strings.size() == 256);
  CHECK(unique == std::set<std::string>(all.begin(), all.end()));

  cfg.n_candidates = 257;
  CHECK_THROWS_AS(generate_candidates(cfg), std::invalid_argument);
}

TEST_CASE("censor removes detectors matching self") {
  const auto self = profile_from({"00", "01"});
  const auto survivors = censor(detectors_from({"00", "10", "11"}, 2), self);
  CHECK(strings_of(survivors) == std::vector<std::string>{"10", "11"});
  CHECK(survivors[0].id == 1);
  CHECK(survivors[1].id == 2);

  CHECK_THROWS_AS(SelfProfile({}), std::invalid_argument);
  CHECK_THROWS_AS(SelfProfile({Pattern{BitPattern::parse("01")}, Pattern{BitPattern::parse("011")}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(censor(detectors_from({"000"}, 2), self), std::invalid_argument);
}

TEST_CASE("censor and classify agree with the exhaustive l=6 r=3 oracle") {
  const auto all = oracle::all_bit_strings(6);
  NegSelConfig cfg;
  cfg.space = BitSpace{6};
  cfg.rule = RContiguousRule{3};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto self_strings = random_self(seed, 6, 8);
    const auto self = profile_from(self_strings);
    const auto survivors = censor(detectors_from(all, 3), self);
    const auto expected = oracle::censor_survivors(all, self_strings, 3);
    REQUIRE(strings_of(survivors) == expected);

    for (const auto& d : survivors) {
      for (const auto& s : self.patterns()) REQUIRE_FALSE(detector_matches(d, s));
    }

    const auto coverage = oracle::coverage_map(expected, 6, 3);
    if (survivors.empty()) {
      CHECK_THROWS_AS(classify(Pattern{BitPattern::parse(all[0])}, survivors, cfg), std::invalid_argument);
      for (const auto& [s, covered] : coverage) CHECK_FALSE(covered);
      continue;
    }
    for (const auto& s : all) {
      const auto c = classify(Pattern{BitPattern::parse(s)}, survivors, cfg);
      REQUIRE(c.anomalous == coverage.at(s));
      const bool is_self =
          std::find(self_strings.begin(), self_strings.end(), s) != self_strings.end();
      if (is_self) REQUIRE_FALSE(c.anomalous);
    }
  }
}

TEST_CASE("classify reports the activating detector") {
  NegSelConfig cfg;
  cfg.space = BitSpace{4};
  cfg.rule = RContiguousRule{4};
  const auto detectors = detectors_from({"0000", "1011"}, 4);
  const auto hit = classify(Pattern{BitPattern::parse("1011")}, detectors, cfg);
  CHECK(hit.anomalous);
  CHECK(hit.detector_id == 1);
  CHECK(hit.affinity == 1.0);
  const auto miss = classify(Pattern{BitPattern::parse("1111")}, detectors, cfg);
  CHECK_FALSE(miss.anomalous);
  CHECK_FALSE(miss.detector_id.has_value());

  CHECK_THROWS_AS(classify(Pattern{BitPattern::parse("1011")}, {}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(classify(Pattern{FeatureVector{1.0, 0.0, 1.0, 1.0}}, detectors, cfg),
                  std::invalid_argument);
}

TEST_CASE("survivor count is non-increasing in nested self sets") {
  const auto all = oracle::all_bit_strings(7);
  Rng rng(17);
  std::vector<std::string> order = all;
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  const auto candidates = detectors_from(all, 4);
  std::size_t previous = candidates.size();
  for (std::size_t size = 1; size <= 24; ++size) {
    const auto self = profile_from({order.begin(), order.begin() + static_cast<long>(size)});
    const auto n = censor(candidates, self).size();
    CHECK(n <= previous);
    previous = n;
  }
}

TEST_CASE("coverage_estimate") {
  NegSelConfig cfg;
  cfg.space = BitSpace{4};
  cfg.rule = RContiguousRule{4};
  const auto self_strings = std::vector<std::string>{"0000", "0101", "1111"};
  const auto self = profile_from(self_strings);
  CHECK(coverage_estimate({}, self, cfg, 100) == 0.0);

  std::vector<std::string> nonself;
  for (const auto& s : oracle::all_bit_strings(4)) {
    if (std::find(self_strings.begin(), self_strings.end(), s) == self_strings.end()) {
      nonself.push_back(s);
    }
  }
  CHECK(coverage_estimate(detectors_from(nonself, 4), self, cfg, 500) == 1.0);
  CHECK_THROWS_AS(coverage_estimate(detectors_from(nonself, 4), self, cfg, 0),
                  std::invalid_argument);
}

TEST_CASE("coverage_estimate is within 0.05 of exhaustive enumeration for l=8 r=4") {
  NegSelConfig cfg;
  cfg.space = BitSpace{8};
  cfg.rule = RContiguousRule{4};
  cfg.n_candidates = 40;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    cfg.seed = seed;
    const auto self_strings = random_self(seed + 100, 8, 30);
    const auto self = profile_from(self_strings);
    const auto detectors = build_detectors(cfg, self);
    const double exact = oracle::exhaustive_coverage(strings_of(detectors), self_strings, 8, 4);
    const double estimate = coverage_estimate(detectors, self, cfg, 4000);
    CHECK(std::abs(estimate - exact) <= 0.05);
    CHECK(coverage_estimate(detectors, self, cfg, 4000) == estimate);
  }
}

TEST_CASE("real-valued detectors never flag the censoring self set") {
  NegSelConfig cfg;
  cfg.space = RealSpace{2, 0.0, 1.0};
  cfg.rule = RealThresholdRule{0.1};
  cfg.n_candidates = 400;
  cfg.seed = 8;
  Rng rng(4);
  std::vector<Pattern> self_patterns;
  for (int i = 0; i < 30; ++i) {
    self_patterns.emplace_back(FeatureVector{rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)});
  }
  const SelfProfile self(self_patterns);
  const auto detectors = build_detectors(cfg, self);
  REQUIRE_FALSE(detectors.empty());
  for (const auto& s : self.patterns()) CHECK_FALSE(classify(s, detectors, cfg).anomalous);
  const auto far = classify(Pattern{FeatureVector{0.02, 0.97}}, detectors, cfg);
  CHECK(far.affinity > 0.0);
  const double cov = coverage_estimate(detectors, self, cfg, 500);
  CHECK(cov > 0.5);
  CHECK(cov <= 1.0);

  cfg.activation_threshold = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
