#include "ais/harness/metrics.hpp"

#include <stdexcept>

namespace ais::harness {

Metrics evaluate(const std::vector<bool>& predicted, const std::vector<bool>& actual) {
  if (predicted.size() != actual.size()) {
    throw std::invalid_argument("evaluate: " + std::to_string(predicted.size()) + " predictions for " +
                                std::to_string(actual.size()) + " labels");
  }
  if (predicted.empty()) throw std::invalid_argument("evaluate: nothing to evaluate");
  Metrics m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (actual[i]) {
      ++(predicted[i] ? m.true_positive : m.false_negative);
    } else {
      ++(predicted[i] ? m.false_positive : m.true_negative);
    }
  }
  const auto positives = m.true_positive + m.false_negative;
  const auto negatives = m.false_positive + m.true_negative;
  m.true_positive_rate = positives ? static_cast<double>(m.true_positive) / static_cast<double>(positives) : 1.0;
  m.false_positive_rate = negatives ? static_cast<double>(m.false_positive) / static_cast<double>(negatives) : 0.0;
  m.accuracy = static_cast<double>(m.true_positive + m.true_negative) / static_cast<double>(m.total());
  return m;
}

}  // namespace ais::harness
