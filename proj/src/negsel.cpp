#include "ais/negsel.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "ais/rng.hpp"

namespace ais::negsel {
namespace {

std::size_t width_of(const Pattern& p) {
  return std::visit([](const auto& v) { return v.size(); }, p);
}

Pattern sample_pattern(const PatternSpace& space, Rng& rng) {
  if (const auto* bits = std::get_if<BitSpace>(&space)) {
    return BitPattern::random(bits->length, rng);
  }
  const auto& real = std::get<RealSpace>(space);
  std::vector<double> values(real.dimension);
  for (auto& v : values) v = rng.uniform(real.lower, real.upper);
  return FeatureVector(std::move(values));
}

std::size_t space_width(const PatternSpace& space) {
  if (const auto* bits = std::get_if<BitSpace>(&space)) return bits->length;
  return std::get<RealSpace>(space).dimension;
}

void require_compatible(const Detector& d, const Pattern& p) {
  if (d.pattern.index() != p.index()) {
    throw std::invalid_argument("negsel: representation mismatch between detector " +
                                std::to_string(d.id) + " and pattern");
  }
  if (std::holds_alternative<RContiguousRule>(d.rule) !=
      std::holds_alternative<BitPattern>(d.pattern)) {
    throw std::invalid_argument("negsel: detector " + std::to_string(d.id) +
                                " has a rule that does not fit its representation");
  }
}

}  // namespace

Representation representation_of(const PatternSpace& space) {
  return std::holds_alternative<BitSpace>(space) ? Representation::Bits : Representation::Real;
}

SelfProfile::SelfProfile(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {
  if (patterns_.empty()) throw std::invalid_argument("SelfProfile: empty self set");
  representation_ = ais::representation_of(patterns_.front());
  width_ = width_of(patterns_.front());
  if (width_ == 0) throw std::invalid_argument("SelfProfile: zero-width pattern");
  for (const auto& p : patterns_) {
    if (ais::representation_of(p) != representation_ || width_of(p) != width_) {
      throw std::invalid_argument("SelfProfile: patterns are not homogeneous");
    }
    if (const auto* fv = std::get_if<FeatureVector>(&p); fv && !fv->all_finite()) {
      throw std::invalid_argument("SelfProfile: non-finite feature value");
    }
  }
}

void NegSelConfig::validate() const {
  if (n_candidates < 1) throw std::invalid_argument("NegSelConfig: n_candidates must be >= 1");
  if (const auto* bits = std::get_if<BitSpace>(&space)) {
    const auto* rule_r = std::get_if<RContiguousRule>(&rule);
    if (bits->length == 0) throw std::invalid_argument("NegSelConfig: bit length must be >= 1");
    if (!rule_r) throw std::invalid_argument("NegSelConfig: bit space requires an r-contiguous rule");
    if (rule_r->r < 1 || rule_r->r > static_cast<int>(bits->length)) {
      throw std::invalid_argument("NegSelConfig: r must lie in [1, l]");
    }
    if (distinct && bits->length < 63 &&
        static_cast<std::uint64_t>(n_candidates) > (std::uint64_t{1} << bits->length)) {
      throw std::invalid_argument(
          "NegSelConfig: distinct sampling asks for more detectors than strings exist");
    }
  } else {
    const auto& real = std::get<RealSpace>(space);
    const auto* rule_t = std::get_if<RealThresholdRule>(&rule);
    if (real.dimension == 0) throw std::invalid_argument("NegSelConfig: dimension must be >= 1");
    if (!(real.lower < real.upper) || !std::isfinite(real.lower) || !std::isfinite(real.upper)) {
      throw std::invalid_argument("NegSelConfig: real space needs finite lower < upper");
    }
    if (!rule_t) throw std::invalid_argument("NegSelConfig: real space requires a radius rule");
    if (!(rule_t->radius > 0.0) || !std::isfinite(rule_t->radius)) {
      throw std::invalid_argument("NegSelConfig: radius must be positive and finite");
    }
    if (activation_threshold) {
      const double floor = 1.0 / (1.0 + rule_t->radius);
      if (!(*activation_threshold >= floor && *activation_threshold < 1.0)) {
        throw std::invalid_argument(
            "NegSelConfig: activation_threshold must lie in [1/(1+radius), 1)");
      }
    }
  }
}

double NegSelConfig::effective_activation_threshold() const {
  if (activation_threshold) return *activation_threshold;
  if (const auto* rule_t = std::get_if<RealThresholdRule>(&rule)) {
    return affinity_from_distance(rule_t->radius);
  }
  return 0.0;
}

bool detector_matches(const Detector& detector, const Pattern& pattern) {
  require_compatible(detector, pattern);
  if (const auto* r = std::get_if<RContiguousRule>(&detector.rule)) {
    return r_contiguous_match(std::get<BitPattern>(detector.pattern),
                              std::get<BitPattern>(pattern), r->r);
  }
  const double radius = std::get<RealThresholdRule>(detector.rule).radius;
  return euclidean_distance(std::get<FeatureVector>(detector.pattern),
                            std::get<FeatureVector>(pattern)) <= radius;
}

double detector_affinity(const Detector& detector, const Pattern& pattern) {
  require_compatible(detector, pattern);
  if (const auto* bits = std::get_if<BitPattern>(&detector.pattern)) {
    const auto run = longest_agreeing_run(*bits, std::get<BitPattern>(pattern));
    return static_cast<double>(run) / static_cast<double>(bits->size());
  }
  return affinity_from_distance(euclidean_distance(std::get<FeatureVector>(detector.pattern),
                                                   std::get<FeatureVector>(pattern)));
}

std::vector<Detector> generate_candidates(const NegSelConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, "negsel.candidates"));
  std::vector<Detector> out;
  out.reserve(static_cast<std::size_t>(cfg.n_candidates));
  std::set<std::string> seen;
  while (static_cast<int>(out.size()) < cfg.n_candidates) {
    Pattern p = sample_pattern(cfg.space, rng);
    if (cfg.distinct && !seen.insert(pattern_to_string(p)).second) continue;
    out.push_back(Detector{std::move(p), cfg.rule, static_cast<int>(out.size())});
  }
  return out;
}

std::vector<Detector> censor(const std::vector<Detector>& candidates, const SelfProfile& self) {
  std::vector<Detector> survivors;
  for (const auto& d : candidates) {
    if (ais::representation_of(d.pattern) != self.representation() ||
        width_of(d.pattern) != self.width()) {
      throw std::invalid_argument("censor: detector " + std::to_string(d.id) +
                                  " does not match the self profile representation");
    }
    bool hits_self = false;
    for (const auto& s : self.patterns()) {
      if (detector_matches(d, s)) {
        hits_self = true;
        break;
      }
    }
    if (!hits_self) survivors.push_back(d);
  }
  return survivors;
}

std::vector<Detector> build_detectors(const NegSelConfig& cfg, const SelfProfile& self) {
  if (representation_of(cfg.space) != self.representation() ||
      space_width(cfg.space) != self.width()) {
    throw std::invalid_argument("build_detectors: config space does not fit the self profile");
  }
  return censor(generate_candidates(cfg), self);
}

Classification classify(const Pattern& pattern, const std::vector<Detector>& detectors,
                        const NegSelConfig& cfg) {
  if (detectors.empty()) throw std::invalid_argument("classify: empty detector set");
  Classification result;
  double best_any = -1.0;
  double best_active = -1.0;
  const double threshold = cfg.effective_activation_threshold();
  for (const auto& d : detectors) {
    const double a = detector_affinity(d, pattern);
    best_any = std::max(best_any, a);
    const bool active = std::holds_alternative<RContiguousRule>(d.rule)
                            ? detector_matches(d, pattern)
                            : a > threshold;
    if (active && a > best_active) {
      best_active = a;
      result.detector_id = d.id;
    }
  }
  result.anomalous = result.detector_id.has_value();
  result.affinity = result.anomalous ? best_active : best_any;
  return result;
}

double coverage_estimate(const std::vector<Detector>& detectors, const SelfProfile& self,
                         const NegSelConfig& cfg, int sample_budget) {
  if (sample_budget < 1) throw std::invalid_argument("coverage_estimate: sample_budget must be >= 1");
  if (detectors.empty()) return 0.0;
  cfg.validate();
  if (representation_of(cfg.space) != self.representation()) {
    throw std::invalid_argument("coverage_estimate: config space does not fit the self profile");
  }
  // Bit self space is the set of self strings; real self space is the union of
  // radius balls around self members.
  auto in_self = [&](const Pattern& p) {
    for (const auto& s : self.patterns()) {
      if (const auto* rule_t = std::get_if<RealThresholdRule>(&cfg.rule)) {
        if (euclidean_distance(std::get<FeatureVector>(s), std::get<FeatureVector>(p)) <=
            rule_t->radius) {
          return true;
        }
      } else if (s == p) {
        return true;
      }
    }
    return false;
  };

  Rng rng(derive_seed(cfg.seed, "negsel.coverage"));
  const long long max_draws = 64LL * sample_budget;
  long long nonself = 0;
  long long covered = 0;
  for (long long draw = 0; draw < max_draws && nonself < sample_budget; ++draw) {
    const Pattern p = sample_pattern(cfg.space, rng);
    if (in_self(p)) continue;
    ++nonself;
    for (const auto& d : detectors) {
      if (detector_matches(d, p)) {
        ++covered;
        break;
      }
    }
  }
  if (nonself == 0) return 0.0;
  return static_cast<double>(covered) / static_cast<double>(nonself);
}

}  // namespace ais::negsel
