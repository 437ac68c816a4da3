#pragma once

// Deterministic Dendritic Cell Algorithm.
//
// A static population of cells samples antigen round-robin (global antigen
// counter modulo the number of cells). Every signal frame is turned into a
// costimulation value (csm) and a context value k once; each cell's lifespan
// is reduced by csm and k is accumulated. A cell whose lifespan reaches zero
// presents its antigen together with its k and is reset with the next
// lifespan from its schedule. Antigen types are scored by the
// presentation-weighted mean k; positive means anomalous.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ais::dca {

using AntigenType = std::string;

struct AntigenEvent {
  AntigenType type_id;
};

struct SignalFrame {
  double pamp = 0.0;
  double danger = 0.0;
  double safe = 0.0;

  void validate() const;
};

struct StreamEvent {
  std::int64_t time_index = 0;
  std::variant<AntigenEvent, SignalFrame> payload;
};

/// csm = w_p pamp + w_d danger + w_s safe
/// k   = v_p pamp + v_d danger - v_s safe
struct SignalWeights {
  double csm_pamp = 2.0;
  double csm_danger = 1.0;
  double csm_safe = 2.0;
  double k_pamp = 2.0;
  double k_danger = 1.0;
  double k_safe = 3.0;

  void validate() const;
};

struct OutputSignals {
  double csm = 0.0;
  double k = 0.0;
};

OutputSignals signal_transform(const SignalFrame& frame, const SignalWeights& weights);

struct DcaConfig {
  std::size_t num_cells = 10;
  /// Slot i starts at schedule[i % size]; each reset moves the slot one entry
  /// further along the schedule (cyclically).
  std::vector<double> lifespan_schedule{100.0};
  SignalWeights weights;
  /// A type is anomalous when K_a exceeds this value.
  double threshold = 0.0;
  /// Whether end-of-stream flush presentations contribute to K_a.
  bool score_flush_records = false;

  void validate() const;
};

struct DendriticCell {
  std::map<AntigenType, std::int64_t> antigen_store;
  double lifespan = 0.0;
  double k = 0.0;
  std::int64_t iterations = 0;
  /// Sum of csm applied since the last reset.
  double csm_accumulated = 0.0;
  /// Position in the lifespan schedule.
  std::size_t schedule_cursor = 0;
};

struct PresentationRecord {
  std::size_t cell_slot = 0;
  double k = 0.0;
  std::map<AntigenType, std::int64_t> antigen_counts;
  std::int64_t iterations = 0;
  /// Lifespan the cell was given at its last reset.
  double lifespan = 0.0;
  double csm_accumulated = 0.0;
  std::int64_t time_index = 0;
  /// Forced presentation at end of stream.
  bool flush = false;
};

/// Slot that receives the antigen with this (already incremented) counter value.
std::size_t assign_antigen(std::uint64_t antigen_counter, std::size_t num_cells);

/// Empty store, k = 0, no iterations, lifespan = next schedule entry.
DendriticCell reset_cell(const DendriticCell& cell, std::size_t slot, const DcaConfig& cfg);

class Population {
 public:
  explicit Population(DcaConfig cfg);

  /// Increments the antigen counter and stores the antigen in the selected
  /// cell. Returns the slot.
  std::size_t add_antigen(const AntigenEvent& event);

  /// Applies one frame to every cell in slot order; returns the presentations
  /// it triggered, in slot order.
  std::vector<PresentationRecord> apply_signal(const SignalFrame& frame, std::int64_t time_index);

  /// Presents every cell still holding antigen (tagged as flush records).
  std::vector<PresentationRecord> flush(std::int64_t time_index);

  const std::vector<DendriticCell>& cells() const { return cells_; }
  std::uint64_t antigen_counter() const { return antigen_counter_; }
  const DcaConfig& config() const { return cfg_; }

 private:
  PresentationRecord present(std::size_t slot, std::int64_t time_index, bool flush) const;

  DcaConfig cfg_;
  std::vector<DendriticCell> cells_;
  std::uint64_t antigen_counter_ = 0;
};

/// K_a = sum_m k_m count_{m,a} / sum_m count_{m,a}. Types absent from every
/// counted record are left out.
std::map<AntigenType, double> anomaly_scores(const std::vector<PresentationRecord>& records,
                                             bool include_flush = false);

struct TypeScore {
  /// Empty when the type was never presented.
  std::optional<double> k_a;
  std::int64_t ingested = 0;
  std::int64_t presented = 0;
  std::optional<bool> anomalous;
};

struct RunReport {
  std::vector<PresentationRecord> records;
  std::map<AntigenType, TypeScore> scores;
  std::int64_t antigen_total = 0;
  std::int64_t signal_frames = 0;
};

/// Processes an ordered event stream (non-decreasing time_index) and scores
/// every antigen type seen.
RunReport run(const std::vector<StreamEvent>& stream, const DcaConfig& cfg);

}  // namespace ais::dca
