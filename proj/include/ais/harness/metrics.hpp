#pragma once

#include <cstddef>
#include <vector>

namespace ais::harness {

/// Confusion counts with anomalous as the positive class.
struct Metrics {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_negative = 0;
  /// 1 when there are no positives.
  double true_positive_rate = 0.0;
  /// 0 when there are no negatives.
  double false_positive_rate = 0.0;
  double accuracy = 0.0;

  std::size_t total() const { return true_positive + false_positive + true_negative + false_negative; }
};

/// Throws std::invalid_argument on length mismatch or empty input.
Metrics evaluate(const std::vector<bool>& predicted_anomalous, const std::vector<bool>& actual_anomalous);

}  // namespace ais::harness
