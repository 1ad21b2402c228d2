#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "monitor/core/schema.hpp"

namespace monitor {

// The training-distribution sample drift tests compare against, plus the
// perturbation source for explanations. Immutable once loaded.
struct ReferenceSet {
  FeatureSchema schema;
  std::vector<Record> records;
  // Optional per-record model outputs, enabling label-shift baselines.
  std::vector<std::vector<double>> model_outputs;

  std::size_t size() const { return records.size(); }
};

namespace csv {

// Shortest round-trip decimal form.
inline std::string format_number(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace csv

// Loads a header-first CSV whose columns equal the schema feature names in
// order. Fails fast on the first invalid row, naming its 1-based index.
inline ReferenceSet load_reference_set(const std::string& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open reference file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("IoError", "empty reference file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = csv::split_line(line);
  if (header.size() != schema.size())
    throw Error("HeaderMismatch", "header has " + std::to_string(header.size()) +
                                      " columns, schema has " + std::to_string(schema.size()));
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != schema.at(i).name)
      throw Error("HeaderMismatch", "column " + std::to_string(i) + " is '" + header[i] +
                                        "', expected '" + schema.at(i).name + "'");

  ReferenceSet ref;
  ref.schema = schema;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    auto cells = csv::split_line(line);
    std::vector<RawValue> raw;
    raw.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size() && i < schema.size(); ++i) {
      if (schema.at(i).kind == FeatureKind::Numerical) {
        double v = 0.0;
        auto res = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
        if (res.ec != std::errc{} || res.ptr != cells[i].data() + cells[i].size())
          throw ValidationError("ValidationError",
                                "row " + std::to_string(row) + ": '" + cells[i] +
                                    "' is not a number in column '" + schema.at(i).name + "'");
        raw.emplace_back(v);
      } else {
        raw.emplace_back(cells[i]);
      }
    }
    if (cells.size() != schema.size())
      throw ValidationError("ValidationError", "row " + std::to_string(row) + ": expected " +
                                                   std::to_string(schema.size()) +
                                                   " cells, got " + std::to_string(cells.size()));
    try {
      ref.records.push_back(validate_record(raw, schema));
    } catch (const ValidationError& e) {
      throw ValidationError(e.code(), "row " + std::to_string(row) + ": " + e.what(),
                            e.violations());
    }
  }
  if (ref.records.empty()) throw Error("IoError", "reference file '" + path + "' has no rows");
  return ref;
}

inline void write_reference_csv(const ReferenceSet& ref, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  for (std::size_t i = 0; i < ref.schema.size(); ++i) {
    if (i) out << ',';
    out << ref.schema.at(i).name;
  }
  out << '\n';
  for (const auto& rec : ref.records) {
    for (std::size_t i = 0; i < rec.values.size(); ++i) {
      if (i) out << ',';
      if (is_number(rec.values[i]))
        out << csv::format_number(as_number(rec.values[i]));
      else
        out << as_token(rec.values[i]);
    }
    out << '\n';
  }
}

}  // namespace monitor
