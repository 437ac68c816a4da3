#pragma once

// Clonal selection (CLONALG family): match, clone, hypermutate, replace.
// Two drivers share the same operators: supervised classification of
// antigens and minimisation of a real-valued objective.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ais/affinity.hpp"
#include "ais/rng.hpp"

namespace ais::clonal {

/// Per-dimension box constraints.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static Bounds cube(std::size_t dimension, double lo, double hi);
  std::size_t size() const { return lower.size(); }
  void validate() const;
  void clamp(FeatureVector& v) const;
};

/// Where fresh random antibodies are drawn from.
using SearchSpace = std::variant<BitSpace, Bounds>;

struct Antibody {
  Pattern receptor;
  std::optional<int> class_label;
  /// Affinity to the most recently presented antigen.
  double affinity = 0.0;
  /// Iterations survived without being replaced.
  int age = 0;
};

struct Repertoire {
  std::vector<Antibody> antibodies;
  SearchSpace space;
};

struct ClonalConfig {
  int population_n = 20;
  /// beta: clones per rank scale with beta * population_n / rank.
  double clone_factor = 1.0;
  /// rho: mutation strength at normalised affinity 0.
  double mutation_scale = 1.0;
  /// d: worst antibodies replaced by fresh random ones each cycle.
  int replacement_count = 2;
  /// Keep a parent unless its best clone is strictly better.
  bool elitism = true;
  int max_iterations = 200;
  std::uint64_t seed = 0;
  /// Stop once the best value improves by less than this over
  /// `stall_iterations` iterations. 0 disables early stopping.
  double stop_tolerance = 0.0;
  int stall_iterations = 25;

  void validate() const;
};

struct Nearest {
  std::size_t index = 0;
  double affinity = 0.0;
};

/// Maximal-affinity antibody under 1 / (1 + distance); ties go to the lowest index.
Nearest select_nearest(const Pattern& antigen, std::span<const Antibody> repertoire);

/// round(beta * population_n / rank), never below 1.
int clone_count(int rank, const ClonalConfig& cfg);

/// rho * exp(-a*): the per-component standard deviation in real mode and the
/// per-bit flip probability (clamped to [0, 0.5]) in bit mode.
double mutation_strength(double normalized_affinity, const ClonalConfig& cfg);

/// Hypermutation. Real mode adds N(0, (rho e^-a*)^2) to every component (two
/// uniforms per component); bit mode draws one uniform per bit and flips when
/// it falls below the flip probability. Bounds are applied by the caller.
Antibody mutate_clone(const Antibody& clone, double normalized_affinity, const ClonalConfig& cfg,
                      Rng& rng);

/// Min-max normalisation to [0, 1]; all-equal input maps to 0.5.
std::vector<double> normalize_affinities(std::span<const double> affinities);

/// Uniform random receptor from the space.
Pattern random_receptor(const SearchSpace& space, Rng& rng);

/// population_n random antibodies; labels, when given, are dealt round-robin.
Repertoire random_repertoire(const SearchSpace& space, const std::vector<int>& labels,
                             const ClonalConfig& cfg, Rng& rng);

struct StepOutcome {
  std::optional<int> assigned_class;
  /// Slot of the selected (nearest) antibody.
  std::size_t parent = 0;
  /// Affinity held by that slot after the step.
  double best_affinity = 0.0;
  bool promoted = false;
  std::vector<std::size_t> replaced;
};

/// One pass of the cycle for a single antigen:
///   1. score every antibody against the antigen and pick the nearest;
///   2. make clone_count(1) clones of it and mutate them at the parent's
///      min-max normalised affinity (clone by clone, in order);
///   3. the best clone (lowest index on ties) replaces the parent if it is
///      strictly better, or unconditionally without elitism;
///   4. the d lowest-affinity antibodies other than the parent (lowest index
///      first on ties) are replaced in that order by fresh random receptors
///      that keep the slot's class label.
/// Returns the parent's class, which every clone inherits.
StepOutcome clonalg_classify_step(const Pattern& antigen, Repertoire& repertoire,
                                  const ClonalConfig& cfg, Rng& rng);

/// Same cycle restricted to the antibodies carrying `label`; d is capped at
/// the class size minus one.
StepOutcome clonalg_train_step(const Pattern& antigen, int label, Repertoire& repertoire,
                               const ClonalConfig& cfg, Rng& rng);

/// Supervised classifier over a labelled repertoire.
class ClonalClassifier {
 public:
  ClonalClassifier(ClonalConfig cfg, SearchSpace space, std::vector<int> classes);

  /// Presents every training item once per epoch (max_iterations epochs).
  /// Returns the number of epochs actually run.
  int train(const std::vector<Pattern>& items, const std::vector<int>& labels);

  /// Class of the nearest antibody; the repertoire is not modified.
  int predict(const Pattern& antigen) const;

  const Repertoire& repertoire() const { return repertoire_; }

 private:
  ClonalConfig cfg_;
  std::vector<int> classes_;
  Rng rng_;
  Repertoire repertoire_;
};

using Objective = std::function<double(const std::vector<double>&)>;

struct TracePoint {
  int iteration = 0;
  double best_value = 0.0;
  std::vector<double> best_vector;
};

/// Minimises `objective` inside `bounds`. Iteration 0 is the initial random
/// population; each later iteration clones every antibody by rank
/// (clone_count(rank)), mutates clones at the rank-normalised affinity
/// (N - rank) / (N - 1), keeps the best clone per parent, then replaces the
/// d worst antibodies (never the current best).
std::vector<TracePoint> optimize(const Objective& objective, const Bounds& bounds,
                                 const ClonalConfig& cfg, Rng& rng);

/// Built-in benchmark objectives: "sphere", "rosenbrock", "rastrigin".
std::optional<Objective> objective_by_name(std::string_view name);
std::vector<std::string> objective_names();

}  // namespace ais::clonal
