#include "ais/harness/reports.hpp"

#include <sstream>

#include "ais/harness/csv.hpp"

namespace ais::harness {

using nlohmann::json;

std::string classification_csv(const std::vector<negsel::Classification>& results) {
  std::ostringstream out;
  out << "pattern_index,label,detector_id,affinity\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& c = results[i];
    out << i << "," << (c.anomalous ? "anomalous" : "normal") << ",";
    if (c.detector_id) out << *c.detector_id;
    out << "," << format_double(c.affinity) << "\n";
  }
  return out.str();
}

std::string detectors_csv(const std::vector<negsel::Detector>& detectors) {
  std::ostringstream out;
  out << "detector_id,pattern\n";
  for (const auto& d : detectors) out << d.id << "," << pattern_to_string(d.pattern) << "\n";
  return out.str();
}

std::string trace_csv(const std::vector<clonal::TracePoint>& trace) {
  std::ostringstream out;
  out << "iteration,best_value";
  const auto dim = trace.empty() ? 0 : trace.front().best_vector.size();
  for (std::size_t i = 0; i < dim; ++i) out << ",x" << i + 1;
  out << "\n";
  for (const auto& p : trace) {
    out << p.iteration << "," << format_double(p.best_value);
    for (double v : p.best_vector) out << "," << format_double(v);
    out << "\n";
  }
  return out.str();
}

std::string trajectory_csv(const idionet::ScenarioResult& result) {
  std::ostringstream out;
  out << "t";
  const auto n = result.rows.empty() ? 0 : result.rows.front().x.size();
  for (std::size_t i = 0; i < n; ++i) out << ",x_" << i + 1;
  out << ",selected,antigenic,idiotypic_difference\n";
  for (const auto& row : result.rows) {
    out << row.t;
    for (double x : row.x) out << "," << format_double(x);
    out << "," << row.selected << "," << row.antigenic << "," << (row.idiotypic_difference ? 1 : 0) << "\n";
  }
  return out.str();
}

json dca_report(const dca::RunReport& report, const dca::DcaConfig& cfg) {
  json records = json::array();
  for (const auto& rec : report.records) {
    records.push_back({{"cell_slot", rec.cell_slot},
                       {"k", rec.k},
                       {"antigen_counts", rec.antigen_counts},
                       {"iterations", rec.iterations},
                       {"lifespan", rec.lifespan},
                       {"csm_accumulated", rec.csm_accumulated},
                       {"time_index", rec.time_index},
                       {"flush", rec.flush}});
  }
  json scores = json::object();
  json classifications = json::array();
  for (const auto& [type, s] : report.scores) {
    scores[type] = {{"k_a", s.k_a ? json(*s.k_a) : json(nullptr)},
                    {"ingested", s.ingested},
                    {"presented", s.presented}};
    json c{{"antigen_type", type}};
    if (s.anomalous) {
      c["label"] = *s.anomalous ? "anomalous" : "normal";
    } else {
      c["label"] = "unscored";
    }
    classifications.push_back(c);
  }
  const auto& w = cfg.weights;
  json config{{"num_cells", cfg.num_cells},
              {"lifespan_schedule", cfg.lifespan_schedule},
              {"threshold", cfg.threshold},
              {"score_flush_records", cfg.score_flush_records},
              {"weights",
               {{"csm_pamp", w.csm_pamp},
                {"csm_danger", w.csm_danger},
                {"csm_safe", w.csm_safe},
                {"k_pamp", w.k_pamp},
                {"k_danger", w.k_danger},
                {"k_safe", w.k_safe}}}};
  return {{"records", records},
          {"scores", scores},
          {"classifications", classifications},
          {"antigen_total", report.antigen_total},
          {"signal_frames", report.signal_frames},
          {"config", config}};
}

json metrics_json(const Metrics& m) {
  return {{"true_positive", m.true_positive},
          {"false_positive", m.false_positive},
          {"true_negative", m.true_negative},
          {"false_negative", m.false_negative},
          {"true_positive_rate", m.true_positive_rate},
          {"false_positive_rate", m.false_positive_rate},
          {"accuracy", m.accuracy}};
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace ais::harness
