#include "ais/harness/datasets.hpp"

#include <set>
#include <sstream>

#include "ais/harness/csv.hpp"

namespace ais::harness {

Label parse_label(const std::string& text) {
  if (text == "normal") return Label::Normal;
  if (text == "anomalous") return Label::Anomalous;
  throw DataError("unknown label '" + text + "' (expected normal or anomalous)");
}

std::string to_string(Label label) { return label == Label::Normal ? "normal" : "anomalous"; }

void LabeledDataset::validate() const {
  if (items.empty()) throw DataError("dataset is empty");
  const auto rep = representation_of(items.front().pattern);
  const auto width = std::visit([](const auto& p) { return p.size(); }, items.front().pattern);
  for (const auto& item : items) {
    if (representation_of(item.pattern) != rep) throw DataError("dataset mixes representations");
    if (std::visit([](const auto& p) { return p.size(); }, item.pattern) != width) {
      throw DataError("dataset patterns differ in width");
    }
  }
}

std::vector<Pattern> LabeledDataset::patterns() const {
  std::vector<Pattern> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(item.pattern);
  return out;
}

bool LabeledDataset::fully_labeled() const {
  for (const auto& item : items) {
    if (!item.label) return false;
  }
  return true;
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  if (table.rows.empty()) throw DataError(path.string() + ": no data rows");
  const auto label_col = table.find_column("label");
  const auto bits_col = table.find_column("bits");
  std::vector<std::size_t> value_cols;
  if (!bits_col) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c != label_col) value_cols.push_back(c);
    }
    if (value_cols.empty()) throw DataError(path.string() + ":1: no pattern columns");
  }

  LabeledDataset data;
  data.provenance = path.filename().string();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    LabeledItem item;
    if (bits_col) {
      try {
        item.pattern = BitPattern::parse(table.rows[r][*bits_col]);
      } catch (const std::exception& e) {
        table.fail(r, e.what());
      }
    } else {
      std::vector<double> values;
      for (auto c : value_cols) values.push_back(table.number(r, c));
      item.pattern = FeatureVector(std::move(values));
    }
    if (label_col && !table.rows[r][*label_col].empty()) {
      try {
        item.label = parse_label(table.rows[r][*label_col]);
      } catch (const DataError& e) {
        table.fail(r, e.what());
      }
    }
    data.items.push_back(std::move(item));
  }
  try {
    data.validate();
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return data;
}

void write_dataset(const std::filesystem::path& path, const LabeledDataset& data) {
  data.validate();
  const bool labeled = data.fully_labeled();
  std::ostringstream out;
  if (std::holds_alternative<BitPattern>(data.items.front().pattern)) {
    out << "bits";
  } else {
    const auto d = std::get<FeatureVector>(data.items.front().pattern).size();
    for (std::size_t i = 0; i < d; ++i) out << (i ? "," : "") << "x" << i + 1;
  }
  if (labeled) out << ",label";
  out << "\n";
  for (const auto& item : data.items) {
    if (const auto* bits = std::get_if<BitPattern>(&item.pattern)) {
      out << bits->str();
    } else {
      const auto& v = std::get<FeatureVector>(item.pattern);
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_double(v[i]);
    }
    if (labeled) out << "," << to_string(*item.label);
    out << "\n";
  }
  write_text(path, out.str());
}

void ClassDataset::validate() const {
  if (features.empty()) throw DataError("class dataset is empty");
  if (features.size() != classes.size()) throw DataError("class dataset: feature/class count mismatch");
  for (const auto& row : features) {
    if (row.size() != features.front().size() || row.empty()) {
      throw DataError("class dataset: inconsistent feature width");
    }
  }
}

ClassDataset load_class_dataset(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  if (table.rows.empty()) throw DataError(path.string() + ": no data rows");
  const auto class_col = table.column("class");
  ClassDataset data;
  data.provenance = path.filename().string();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<double> row;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c != class_col) row.push_back(table.number(r, c));
    }
    data.features.push_back(std::move(row));
    data.classes.push_back(static_cast<int>(table.integer(r, class_col)));
  }
  if (data.features.front().empty()) throw DataError(path.string() + ":1: no feature columns");
  return data;
}

void write_class_dataset(const std::filesystem::path& path, const ClassDataset& data) {
  data.validate();
  std::ostringstream out;
  for (std::size_t i = 0; i < data.features.front().size(); ++i) out << "x" << i + 1 << ",";
  out << "class\n";
  for (std::size_t r = 0; r < data.features.size(); ++r) {
    for (double v : data.features[r]) out << format_double(v) << ",";
    out << data.classes[r] << "\n";
  }
  write_text(path, out.str());
}

std::vector<dca::StreamEvent> load_stream(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  const std::vector<std::string> expected{"time_index", "kind", "antigen_type", "pamp", "danger", "safe"};
  if (table.header != expected) {
    throw DataError(path.string() + ":1: expected header time_index,kind,antigen_type,pamp,danger,safe");
  }
  std::vector<dca::StreamEvent> stream;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    dca::StreamEvent ev;
    ev.time_index = table.integer(r, 0);
    if (row[1] == "antigen") {
      if (row[2].empty()) table.fail(r, "antigen row without antigen_type");
      if (!row[3].empty() || !row[4].empty() || !row[5].empty()) {
        table.fail(r, "antigen row must leave signal columns empty");
      }
      ev.payload = dca::AntigenEvent{row[2]};
    } else if (row[1] == "signal") {
      if (!row[2].empty()) table.fail(r, "signal row must leave antigen_type empty");
      dca::SignalFrame frame{table.number(r, 3), table.number(r, 4), table.number(r, 5)};
      try {
        frame.validate();
      } catch (const std::exception& e) {
        table.fail(r, e.what());
      }
      ev.payload = frame;
    } else {
      table.fail(r, "unknown kind '" + row[1] + "'");
    }
    if (!stream.empty() && ev.time_index < stream.back().time_index) {
      table.fail(r, "time_index goes backwards");
    }
    stream.push_back(std::move(ev));
  }
  if (stream.empty()) throw DataError(path.string() + ": no events");
  return stream;
}

void write_stream(const std::filesystem::path& path, const std::vector<dca::StreamEvent>& stream) {
  std::ostringstream out;
  out << "time_index,kind,antigen_type,pamp,danger,safe\n";
  for (const auto& ev : stream) {
    out << ev.time_index << ",";
    if (const auto* a = std::get_if<dca::AntigenEvent>(&ev.payload)) {
      out << "antigen," << a->type_id << ",,,\n";
    } else {
      const auto& f = std::get<dca::SignalFrame>(ev.payload);
      out << "signal,," << format_double(f.pamp) << "," << format_double(f.danger) << ","
          << format_double(f.safe) << "\n";
    }
  }
  write_text(path, out.str());
}

std::vector<TruthRow> load_truth(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  const auto label_col = table.column("label");
  if (table.header.size() < 2 || label_col == 0) {
    throw DataError(path.string() + ":1: expected a key column followed by label");
  }
  std::vector<TruthRow> out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    TruthRow row{table.rows[r][0], Label::Normal};
    if (!seen.insert(row.key).second) table.fail(r, "duplicate key '" + row.key + "'");
    try {
      row.label = parse_label(table.rows[r][label_col]);
    } catch (const DataError& e) {
      table.fail(r, e.what());
    }
    out.push_back(std::move(row));
  }
  if (out.empty()) throw DataError(path.string() + ": no data rows");
  return out;
}

}  // namespace ais::harness
