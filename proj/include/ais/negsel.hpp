#pragma once

// Negative selection: random detectors are censored against a self profile
// and the survivors flag anything they match as anomalous.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ais/affinity.hpp"

namespace ais::negsel {

/// Bit detectors: match when at least r consecutive positions agree.
struct RContiguousRule {
  int r = 1;
};

/// Real detectors: match within a fixed Euclidean radius.
struct RealThresholdRule {
  double radius = 0.1;
};

using MatchRule = std::variant<RContiguousRule, RealThresholdRule>;

struct Detector {
  Pattern pattern;
  MatchRule rule;
  int id = 0;
};

/// Hypercube [lower, upper]^dimension.
struct RealSpace {
  std::size_t dimension = 2;
  double lower = 0.0;
  double upper = 1.0;
};

using PatternSpace = std::variant<BitSpace, RealSpace>;

Representation representation_of(const PatternSpace& space);

/// Non-empty, homogeneous set of patterns that defines normal behaviour.
class SelfProfile {
 public:
  explicit SelfProfile(std::vector<Pattern> patterns);

  const std::vector<Pattern>& patterns() const { return patterns_; }
  std::size_t size() const { return patterns_.size(); }
  Representation representation() const { return representation_; }
  /// Bit length or real dimension shared by every member.
  std::size_t width() const { return width_; }

 private:
  std::vector<Pattern> patterns_;
  Representation representation_;
  std::size_t width_;
};

struct NegSelConfig {
  int n_candidates = 100;
  PatternSpace space = BitSpace{};
  MatchRule rule = RContiguousRule{4};
  /// Real rule only: affinity a detector must exceed to activate. Unset means
  /// 1 / (1 + radius), which activates exactly inside the censoring radius.
  std::optional<double> activation_threshold;
  /// Reject duplicate candidates while sampling.
  bool distinct = false;
  std::uint64_t seed = 0;

  void validate() const;
  double effective_activation_threshold() const;
};

/// Censoring rule: does the detector recognise this pattern?
bool detector_matches(const Detector& detector, const Pattern& pattern);

/// Affinity in [0, 1]. Real rule: 1 / (1 + distance). Bit rule: longest
/// agreeing run divided by the length.
double detector_affinity(const Detector& detector, const Pattern& pattern);

/// Draws exactly cfg.n_candidates detectors uniformly over the pattern space.
/// Ids are 0..n-1 in draw order.
std::vector<Detector> generate_candidates(const NegSelConfig& cfg);

/// Keeps, in order, the candidates that match no self pattern.
std::vector<Detector> censor(const std::vector<Detector>& candidates, const SelfProfile& self);

/// generate_candidates followed by censor.
std::vector<Detector> build_detectors(const NegSelConfig& cfg, const SelfProfile& self);

struct Classification {
  bool anomalous = false;
  /// Nearest activating detector; empty when the pattern is normal.
  std::optional<int> detector_id;
  /// Affinity of the nearest activating detector, or the best affinity seen
  /// when nothing activated.
  double affinity = 0.0;
};

/// Bit rules activate on a boolean r-contiguous match; real rules activate
/// when affinity exceeds the activation threshold. Ties go to the lowest id.
Classification classify(const Pattern& pattern, const std::vector<Detector>& detectors,
                        const NegSelConfig& cfg);

/// Monte-Carlo fraction of non-self space matched by at least one detector.
///
/// Samples are drawn uniformly from cfg.space (seeded from cfg.seed); samples
/// inside the self region are discarded until `sample_budget` non-self
/// samples are collected or 64 * sample_budget draws have been made.
double coverage_estimate(const std::vector<Detector>& detectors, const SelfProfile& self,
                         const NegSelConfig& cfg, int sample_budget);

}  // namespace ais::negsel
