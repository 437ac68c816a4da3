#include "ais/dca.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ais::dca {
namespace {

bool non_negative_finite(double v) { return std::isfinite(v) && v >= 0.0; }

double scheduled_lifespan(const DcaConfig& cfg, std::size_t cursor) {
  return cfg.lifespan_schedule[cursor % cfg.lifespan_schedule.size()];
}

}  // namespace

void SignalFrame::validate() const {
  if (!non_negative_finite(pamp) || !non_negative_finite(danger) || !non_negative_finite(safe)) {
    throw std::invalid_argument("SignalFrame: signals must be finite and non-negative");
  }
}

void SignalWeights::validate() const {
  for (double w : {csm_pamp, csm_danger, csm_safe, k_pamp, k_danger, k_safe}) {
    if (!non_negative_finite(w)) {
      throw std::invalid_argument("SignalWeights: weights must be finite and non-negative");
    }
  }
  if (!(k_safe > 0.0)) throw std::invalid_argument("SignalWeights: safe context weight must be > 0");
}

OutputSignals signal_transform(const SignalFrame& frame, const SignalWeights& w) {
  frame.validate();
  return OutputSignals{
      w.csm_pamp * frame.pamp + w.csm_danger * frame.danger + w.csm_safe * frame.safe,
      w.k_pamp * frame.pamp + w.k_danger * frame.danger - w.k_safe * frame.safe};
}

void DcaConfig::validate() const {
  if (num_cells < 1) throw std::invalid_argument("DcaConfig: num_cells must be >= 1");
  if (lifespan_schedule.empty()) throw std::invalid_argument("DcaConfig: empty lifespan schedule");
  for (double l : lifespan_schedule) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("DcaConfig: lifespans must be finite and > 0");
    }
  }
  weights.validate();
  if (!std::isfinite(threshold)) throw std::invalid_argument("DcaConfig: threshold must be finite");
}

std::size_t assign_antigen(std::uint64_t antigen_counter, std::size_t num_cells) {
  if (num_cells == 0) throw std::invalid_argument("assign_antigen: no cells");
  return static_cast<std::size_t>(antigen_counter % num_cells);
}

DendriticCell reset_cell(const DendriticCell& cell, std::size_t /*slot*/, const DcaConfig& cfg) {
  DendriticCell fresh;
  fresh.schedule_cursor = cell.schedule_cursor + 1;
  fresh.lifespan = scheduled_lifespan(cfg, fresh.schedule_cursor);
  return fresh;
}

Population::Population(DcaConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  cells_.resize(cfg_.num_cells);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    cells_[i].schedule_cursor = i;
    cells_[i].lifespan = scheduled_lifespan(cfg_, i);
  }
}

std::size_t Population::add_antigen(const AntigenEvent& event) {
  ++antigen_counter_;
  const std::size_t slot = assign_antigen(antigen_counter_, cells_.size());
  ++cells_[slot].antigen_store[event.type_id];
  return slot;
}

PresentationRecord Population::present(std::size_t slot, std::int64_t time_index,
                                       bool flush) const {
  const auto& cell = cells_[slot];
  PresentationRecord rec;
  rec.cell_slot = slot;
  rec.k = cell.k;
  rec.antigen_counts = cell.antigen_store;
  rec.iterations = cell.iterations;
  rec.lifespan = scheduled_lifespan(cfg_, cell.schedule_cursor);
  rec.csm_accumulated = cell.csm_accumulated;
  rec.time_index = time_index;
  rec.flush = flush;
  return rec;
}

std::vector<PresentationRecord> Population::apply_signal(const SignalFrame& frame,
                                                         std::int64_t time_index) {
  const auto out_signals = signal_transform(frame, cfg_.weights);
  std::vector<PresentationRecord> records;
  for (std::size_t slot = 0; slot < cells_.size(); ++slot) {
    auto& cell = cells_[slot];
    cell.lifespan -= out_signals.csm;
    cell.k += out_signals.k;
    cell.csm_accumulated += out_signals.csm;
    ++cell.iterations;
    if (cell.lifespan <= 0.0) {
      records.push_back(present(slot, time_index, false));
      cell = reset_cell(cell, slot, cfg_);
    }
  }
  return records;
}

std::vector<PresentationRecord> Population::flush(std::int64_t time_index) {
  std::vector<PresentationRecord> records;
  for (std::size_t slot = 0; slot < cells_.size(); ++slot) {
    if (cells_[slot].antigen_store.empty()) continue;
    records.push_back(present(slot, time_index, true));
    cells_[slot] = reset_cell(cells_[slot], slot, cfg_);
  }
  return records;
}

std::map<AntigenType, double> anomaly_scores(const std::vector<PresentationRecord>& records,
                                             bool include_flush) {
  std::map<AntigenType, double> weighted_k;
  std::map<AntigenType, std::int64_t> counts;
  for (const auto& rec : records) {
    if (rec.flush && !include_flush) continue;
    for (const auto& [type, count] : rec.antigen_counts) {
      if (count <= 0) continue;
      weighted_k[type] += rec.k * static_cast<double>(count);
      counts[type] += count;
    }
  }
  std::map<AntigenType, double> scores;
  for (const auto& [type, total] : counts) {
    scores[type] = weighted_k[type] / static_cast<double>(total);
  }
  return scores;
}

RunReport run(const std::vector<StreamEvent>& stream, const DcaConfig& cfg) {
  Population population(cfg);
  RunReport report;
  std::int64_t last_time = 0;
  for (std::size_t idx = 0; idx < stream.size(); ++idx) {
    const auto& event = stream[idx];
    if (idx > 0 && event.time_index < last_time) {
      throw std::invalid_argument("dca::run: event " + std::to_string(idx) +
                                  " is out of order (time_index " +
                                  std::to_string(event.time_index) + " after " +
                                  std::to_string(last_time) + ")");
    }
    last_time = event.time_index;
    if (const auto* antigen = std::get_if<AntigenEvent>(&event.payload)) {
      if (antigen->type_id.empty()) {
        throw std::invalid_argument("dca::run: event " + std::to_string(idx) +
                                    " has an empty antigen type");
      }
      population.add_antigen(*antigen);
      ++report.scores[antigen->type_id].ingested;
      ++report.antigen_total;
    } else {
      auto presented = population.apply_signal(std::get<SignalFrame>(event.payload),
                                               event.time_index);
      ++report.signal_frames;
      report.records.insert(report.records.end(), presented.begin(), presented.end());
    }
  }
  auto flushed = population.flush(last_time);
  report.records.insert(report.records.end(), flushed.begin(), flushed.end());

  const auto scores = anomaly_scores(report.records, cfg.score_flush_records);
  for (const auto& rec : report.records) {
    if (rec.flush && !cfg.score_flush_records) continue;
    for (const auto& [type, count] : rec.antigen_counts) report.scores[type].presented += count;
  }
  for (auto& [type, score] : report.scores) {
    if (auto it = scores.find(type); it != scores.end()) {
      score.k_a = it->second;
      score.anomalous = it->second > cfg.threshold;
    }
  }
  return report;
}

}  // namespace ais::dca
