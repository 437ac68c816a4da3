#pragma once

// Output files. CSV numbers use the shortest round-trip form and JSON is
// pretty-printed with sorted keys, so identical runs give identical bytes.

#include <string>
#include <vector>

#include <json.hpp>

#include "ais/clonal.hpp"
#include "ais/dca.hpp"
#include "ais/harness/datasets.hpp"
#include "ais/harness/metrics.hpp"
#include "ais/idionet.hpp"
#include "ais/negsel.hpp"

namespace ais::harness {

/// `pattern_index,label,detector_id,affinity`; detector_id is empty for normal patterns.
std::string classification_csv(const std::vector<negsel::Classification>& results);

/// `detector_id,pattern`
std::string detectors_csv(const std::vector<negsel::Detector>& detectors);

/// `iteration,best_value,x1..xd`
std::string trace_csv(const std::vector<clonal::TracePoint>& trace);

/// `t,x_1..x_N,selected,antigenic,idiotypic_difference`
std::string trajectory_csv(const idionet::ScenarioResult& result);

/// Presentation records, K_a table, per-type classification and the config echo.
nlohmann::json dca_report(const dca::RunReport& report, const dca::DcaConfig& cfg);

nlohmann::json metrics_json(const Metrics& m);

/// Two-space indent plus a trailing newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace ais::harness
