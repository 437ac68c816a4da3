#include "ais/clonal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ais::clonal {
namespace {

void check_objective_value(double v) {
  if (!std::isfinite(v)) throw std::domain_error("optimize: objective returned a non-finite value");
}

void clamp_to_space(Antibody& ab, const SearchSpace& space) {
  if (const auto* bounds = std::get_if<Bounds>(&space)) {
    bounds->clamp(std::get<FeatureVector>(ab.receptor));
  }
}

std::size_t best_index(std::span<const double> values, bool maximize) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (maximize ? values[i] > values[best] : values[i] < values[best]) best = i;
  }
  return best;
}

// Shared body of the classification and training steps, operating on the
// repertoire slots listed in `members`.
StepOutcome step_over(const Pattern& antigen, const std::vector<std::size_t>& members,
                      int replacements, Repertoire& repertoire, const ClonalConfig& cfg,
                      Rng& rng) {
  auto& abs = repertoire.antibodies;
  std::vector<double> affinity(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) {
    auto& ab = abs[members[m]];
    ab.affinity = affinity_from_distance(pattern_distance(antigen, ab.receptor));
    affinity[m] = ab.affinity;
  }
  const std::size_t parent_pos = best_index(affinity, true);
  const std::size_t parent = members[parent_pos];
  const double a_star = normalize_affinities(affinity)[parent_pos];

  const int n_clones = clone_count(1, cfg);
  std::vector<Antibody> clones;
  clones.reserve(static_cast<std::size_t>(n_clones));
  std::vector<double> clone_affinity;
  clone_affinity.reserve(clones.capacity());
  for (int c = 0; c < n_clones; ++c) {
    Antibody clone = mutate_clone(abs[parent], a_star, cfg, rng);
    clamp_to_space(clone, repertoire.space);
    clone.affinity = affinity_from_distance(pattern_distance(antigen, clone.receptor));
    clone_affinity.push_back(clone.affinity);
    clones.push_back(std::move(clone));
  }
  const std::size_t best_clone = best_index(clone_affinity, true);

  StepOutcome outcome;
  outcome.parent = parent;
  outcome.assigned_class = abs[parent].class_label;
  for (auto idx : members) ++abs[idx].age;
  if (!cfg.elitism || clones[best_clone].affinity > abs[parent].affinity) {
    abs[parent].receptor = std::move(clones[best_clone].receptor);
    abs[parent].affinity = clones[best_clone].affinity;
    abs[parent].age = 0;
    outcome.promoted = true;
  }
  outcome.best_affinity = abs[parent].affinity;

  std::vector<std::size_t> others;
  for (auto idx : members) {
    if (idx != parent) others.push_back(idx);
  }
  std::stable_sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
    return abs[a].affinity < abs[b].affinity;
  });
  const auto n_replace = std::min<std::size_t>(static_cast<std::size_t>(replacements), others.size());
  for (std::size_t k = 0; k < n_replace; ++k) {
    auto& slot = abs[others[k]];
    slot.receptor = random_receptor(repertoire.space, rng);
    slot.affinity = affinity_from_distance(pattern_distance(antigen, slot.receptor));
    slot.age = 0;
    outcome.replaced.push_back(others[k]);
  }
  return outcome;
}

}  // namespace

Bounds Bounds::cube(std::size_t dimension, double lo, double hi) {
  return Bounds{std::vector<double>(dimension, lo), std::vector<double>(dimension, hi)};
}

void Bounds::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("Bounds: lower/upper must be non-empty and of equal size");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] <= upper[i])) {
      throw std::invalid_argument("Bounds: need finite lower <= upper in every dimension");
    }
  }
}

void Bounds::clamp(FeatureVector& v) const {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], lower[i], upper[i]);
}

void ClonalConfig::validate() const {
  if (population_n < 1) throw std::invalid_argument("ClonalConfig: population_n must be >= 1");
  if (!(clone_factor > 0.0) || !std::isfinite(clone_factor)) {
    throw std::invalid_argument("ClonalConfig: clone_factor must be > 0");
  }
  if (!(mutation_scale >= 0.0) || !std::isfinite(mutation_scale)) {
    throw std::invalid_argument("ClonalConfig: mutation_scale must be >= 0");
  }
  if (replacement_count < 0 || replacement_count >= population_n) {
    throw std::invalid_argument("ClonalConfig: replacement_count must satisfy 0 <= d < population_n");
  }
  if (max_iterations < 1) throw std::invalid_argument("ClonalConfig: max_iterations must be >= 1");
  if (!(stop_tolerance >= 0.0)) throw std::invalid_argument("ClonalConfig: stop_tolerance must be >= 0");
  if (stall_iterations < 1) throw std::invalid_argument("ClonalConfig: stall_iterations must be >= 1");
}

Nearest select_nearest(const Pattern& antigen, std::span<const Antibody> repertoire) {
  if (repertoire.empty()) throw std::invalid_argument("select_nearest: empty repertoire");
  Nearest best{0, affinity_from_distance(pattern_distance(antigen, repertoire[0].receptor))};
  for (std::size_t i = 1; i < repertoire.size(); ++i) {
    const double a = affinity_from_distance(pattern_distance(antigen, repertoire[i].receptor));
    if (a > best.affinity) best = Nearest{i, a};
  }
  return best;
}

int clone_count(int rank, const ClonalConfig& cfg) {
  if (rank < 1) throw std::invalid_argument("clone_count: rank must be >= 1");
  const double raw = cfg.clone_factor * cfg.population_n / rank;
  return std::max(1, static_cast<int>(std::lround(raw)));
}

double mutation_strength(double normalized_affinity, const ClonalConfig& cfg) {
  return cfg.mutation_scale * std::exp(-normalized_affinity);
}

Antibody mutate_clone(const Antibody& clone, double normalized_affinity, const ClonalConfig& cfg,
                      Rng& rng) {
  if (!(normalized_affinity >= 0.0 && normalized_affinity <= 1.0)) {
    throw std::invalid_argument("mutate_clone: normalized affinity must lie in [0, 1]");
  }
  Antibody out = clone;
  const double strength = mutation_strength(normalized_affinity, cfg);
  if (auto* v = std::get_if<FeatureVector>(&out.receptor)) {
    for (std::size_t i = 0; i < v->size(); ++i) (*v)[i] += strength * rng.normal();
  } else {
    auto& bits = std::get<BitPattern>(out.receptor);
    const double flip_p = std::clamp(strength, 0.0, 0.5);
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (rng.uniform() < flip_p) bits.flip(i);
    }
  }
  return out;
}

std::vector<double> normalize_affinities(std::span<const double> affinities) {
  std::vector<double> out(affinities.size(), 0.5);
  if (affinities.empty()) return out;
  const auto [lo, hi] = std::minmax_element(affinities.begin(), affinities.end());
  const double span = *hi - *lo;
  if (!(span > 0.0)) return out;
  for (std::size_t i = 0; i < affinities.size(); ++i) out[i] = (affinities[i] - *lo) / span;
  return out;
}

Pattern random_receptor(const SearchSpace& space, Rng& rng) {
  if (const auto* bits = std::get_if<BitSpace>(&space)) {
    return BitPattern::random(bits->length, rng);
  }
  const auto& bounds = std::get<Bounds>(space);
  std::vector<double> values(bounds.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
  }
  return FeatureVector(std::move(values));
}

Repertoire random_repertoire(const SearchSpace& space, const std::vector<int>& labels,
                             const ClonalConfig& cfg, Rng& rng) {
  cfg.validate();
  if (const auto* bounds = std::get_if<Bounds>(&space)) bounds->validate();
  Repertoire rep{{}, space};
  rep.antibodies.reserve(static_cast<std::size_t>(cfg.population_n));
  for (int i = 0; i < cfg.population_n; ++i) {
    Antibody ab;
    ab.receptor = random_receptor(space, rng);
    if (!labels.empty()) ab.class_label = labels[static_cast<std::size_t>(i) % labels.size()];
    rep.antibodies.push_back(std::move(ab));
  }
  return rep;
}

StepOutcome clonalg_classify_step(const Pattern& antigen, Repertoire& repertoire,
                                  const ClonalConfig& cfg, Rng& rng) {
  if (repertoire.antibodies.empty()) {
    throw std::invalid_argument("clonalg_classify_step: empty repertoire");
  }
  cfg.validate();
  std::vector<std::size_t> members(repertoire.antibodies.size());
  std::iota(members.begin(), members.end(), std::size_t{0});
  return step_over(antigen, members, cfg.replacement_count, repertoire, cfg, rng);
}

StepOutcome clonalg_train_step(const Pattern& antigen, int label, Repertoire& repertoire,
                               const ClonalConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < repertoire.antibodies.size(); ++i) {
    if (repertoire.antibodies[i].class_label == label) members.push_back(i);
  }
  if (members.empty()) {
    throw std::invalid_argument("clonalg_train_step: no antibody carries class " +
                                std::to_string(label));
  }
  return step_over(antigen, members, cfg.replacement_count, repertoire, cfg, rng);
}

ClonalClassifier::ClonalClassifier(ClonalConfig cfg, SearchSpace space, std::vector<int> classes)
    : cfg_(cfg),
      classes_(std::move(classes)),
      rng_(derive_seed(cfg.seed, "clonal.classifier")) {
  if (classes_.empty()) throw std::invalid_argument("ClonalClassifier: no classes");
  if (static_cast<std::size_t>(cfg_.population_n) < classes_.size()) {
    throw std::invalid_argument("ClonalClassifier: population_n smaller than the number of classes");
  }
  repertoire_ = random_repertoire(space, classes_, cfg_, rng_);
}

int ClonalClassifier::train(const std::vector<Pattern>& items, const std::vector<int>& labels) {
  if (items.empty() || items.size() != labels.size()) {
    throw std::invalid_argument("ClonalClassifier::train: need equally many items and labels");
  }
  std::vector<double> epoch_mean;
  int epoch = 0;
  while (epoch < cfg_.max_iterations) {
    double total = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      total += clonalg_train_step(items[i], labels[i], repertoire_, cfg_, rng_).best_affinity;
    }
    epoch_mean.push_back(total / static_cast<double>(items.size()));
    ++epoch;
    const auto window = static_cast<std::size_t>(cfg_.stall_iterations);
    if (cfg_.stop_tolerance > 0.0 && epoch_mean.size() > window &&
        epoch_mean.back() - epoch_mean[epoch_mean.size() - 1 - window] < cfg_.stop_tolerance) {
      break;
    }
  }
  return epoch;
}

int ClonalClassifier::predict(const Pattern& antigen) const {
  const auto nearest = select_nearest(antigen, repertoire_.antibodies);
  return *repertoire_.antibodies[nearest.index].class_label;
}

std::vector<TracePoint> optimize(const Objective& objective, const Bounds& bounds,
                                 const ClonalConfig& cfg, Rng& rng) {
  cfg.validate();
  bounds.validate();
  const SearchSpace space = bounds;
  const auto n = static_cast<std::size_t>(cfg.population_n);

  std::vector<Antibody> population(n);
  std::vector<double> value(n);
  auto evaluate = [&](const Antibody& ab) {
    const double v = objective(std::get<FeatureVector>(ab.receptor).values());
    check_objective_value(v);
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    population[i].receptor = random_receptor(space, rng);
    value[i] = evaluate(population[i]);
  }

  auto ranking = [&] {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    return order;
  };
  std::vector<TracePoint> trace;
  auto record = [&](int iteration) {
    const std::size_t b = best_index(value, false);
    trace.push_back({iteration, value[b], std::get<FeatureVector>(population[b].receptor).values()});
  };
  record(0);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const auto order = ranking();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t parent = order[k];
      const int rank = static_cast<int>(k) + 1;
      const double a_star =
          n == 1 ? 0.5 : static_cast<double>(n - k - 1) / static_cast<double>(n - 1);
      population[parent].affinity = -value[parent];
      double best_value = 0.0;
      std::optional<Antibody> best_clone;
      for (int c = 0, nc = clone_count(rank, cfg); c < nc; ++c) {
        Antibody clone = mutate_clone(population[parent], a_star, cfg, rng);
        clamp_to_space(clone, space);
        const double v = evaluate(clone);
        if (!best_clone || v < best_value) {
          best_value = v;
          best_clone = std::move(clone);
        }
      }
      ++population[parent].age;
      if (!cfg.elitism || best_value < value[parent]) {
        population[parent].receptor = std::move(best_clone->receptor);
        population[parent].age = 0;
        value[parent] = best_value;
      }
    }

    const auto after = ranking();
    for (int r = 0; r < cfg.replacement_count; ++r) {
      const std::size_t slot = after[n - 1 - static_cast<std::size_t>(r)];
      population[slot].receptor = random_receptor(space, rng);
      population[slot].age = 0;
      value[slot] = evaluate(population[slot]);
    }
    record(it);

    const auto window = static_cast<std::size_t>(cfg.stall_iterations);
    if (cfg.stop_tolerance > 0.0 && trace.size() > window &&
        trace[trace.size() - 1 - window].best_value - trace.back().best_value <
            cfg.stop_tolerance) {
      break;
    }
  }
  return trace;
}

std::optional<Objective> objective_by_name(std::string_view name) {
  if (name == "sphere") {
    return Objective([](const std::vector<double>& x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    });
  }
  if (name == "rosenbrock") {
    return Objective([](const std::vector<double>& x) {
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
      }
      return s;
    });
  }
  if (name == "rastrigin") {
    return Objective([](const std::vector<double>& x) {
      constexpr double kTwoPi = 6.283185307179586476925286766559;
      double s = 10.0 * static_cast<double>(x.size());
      for (double v : x) s += v * v - 10.0 * std::cos(kTwoPi * v);
      return s;
    });
  }
  return std::nullopt;
}

std::vector<std::string> objective_names() { return {"rastrigin", "rosenbrock", "sphere"}; }

}  // namespace ais::clonal
