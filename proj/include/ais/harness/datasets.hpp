#pragma once

// Dataset and stream file formats.
//
//   patterns:  `bits[,label]` or `<d numeric columns>[,label]`, label in {normal, anomalous}
//   classes:   `<d numeric columns>,class`
//   stream:    `time_index,kind,antigen_type,pamp,danger,safe`, kind in {antigen, signal}
//   truth:     `antigen_type,label`

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ais/affinity.hpp"
#include "ais/dca.hpp"

namespace ais::harness {

enum class Label { Normal, Anomalous };

Label parse_label(const std::string& text);
std::string to_string(Label label);

struct LabeledItem {
  Pattern pattern;
  std::optional<Label> label;
};

struct LabeledDataset {
  std::vector<LabeledItem> items;
  std::string provenance;

  /// Non-empty, one representation, one width.
  void validate() const;
  std::vector<Pattern> patterns() const;
  bool fully_labeled() const;
};

LabeledDataset load_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const LabeledDataset& data);

struct ClassDataset {
  std::vector<std::vector<double>> features;
  std::vector<int> classes;
  std::string provenance;

  void validate() const;
};

ClassDataset load_class_dataset(const std::filesystem::path& path);
void write_class_dataset(const std::filesystem::path& path, const ClassDataset& data);

std::vector<dca::StreamEvent> load_stream(const std::filesystem::path& path);
void write_stream(const std::filesystem::path& path, const std::vector<dca::StreamEvent>& stream);

struct TruthRow {
  std::string key;
  Label label;
};

/// `<key>,label` where the key column is the first one.
std::vector<TruthRow> load_truth(const std::filesystem::path& path);

}  // namespace ais::harness
