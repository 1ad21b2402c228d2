#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "monitor/core/errors.hpp"

namespace monitor {

enum class FeatureKind { Numerical, Categorical };

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::Numerical;
  std::vector<std::string> categories;  // categorical only
};

// A feature value: finite real for numerical features, declared token for
// categorical ones.
using Value = std::variant<double, std::string>;

inline bool is_number(const Value& v) { return std::holds_alternative<double>(v); }
inline double as_number(const Value& v) { return std::get<double>(v); }
inline const std::string& as_token(const Value& v) { return std::get<std::string>(v); }

// Ordered feature declarations; the declaration order is the canonical
// vector order for records, CSV columns and request payloads.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<Feature> features);

  std::size_t size() const { return features_.size(); }
  const Feature& at(std::size_t i) const { return features_[i]; }
  const std::vector<Feature>& features() const { return features_; }

  // Index of a feature by name, or nullopt.
  std::optional<std::size_t> index_of(const std::string& name) const;

  // Index of a token within a categorical feature's category list.
  std::optional<std::size_t> category_index(std::size_t feature,
                                            const std::string& token) const;

  std::size_t numerical_count() const { return numerical_count_; }
  std::size_t categorical_count() const { return features_.size() - numerical_count_; }

 private:
  std::vector<Feature> features_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::size_t numerical_count_ = 0;
};

// One instance, aligned with a FeatureSchema. Construct through
// validate_record so the invariants (arity, finiteness, declared categories)
// hold by construction.
struct Record {
  std::vector<Value> values;
};

// Raw values as they arrive over the wire: numbers or strings.
using RawValue = std::variant<double, std::string>;

// Validates raw values against the schema. Collects every violation before
// failing so the error names all offending features at once.
Record validate_record(const std::vector<RawValue>& raw, const FeatureSchema& schema);

inline FeatureSchema::FeatureSchema(std::vector<Feature> features)
    : features_(std::move(features)) {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& f = features_[i];
    if (f.name.empty()) throw Error("BadSchema", "feature name empty");
    if (!by_name_.emplace(f.name, i).second)
      throw Error("BadSchema", "duplicate feature name '" + f.name + "'");
    if (f.kind == FeatureKind::Categorical) {
      if (f.categories.empty())
        throw Error("BadSchema", "categorical feature '" + f.name + "' declares no categories");
      for (const auto& c : f.categories) {
        if (c.find(',') != std::string::npos || c.find('\n') != std::string::npos)
          throw Error("BadSchema", "category token '" + c + "' contains a CSV delimiter");
      }
    } else {
      if (!f.categories.empty())
        throw Error("BadSchema", "numerical feature '" + f.name + "' declares categories");
      ++numerical_count_;
    }
  }
}

inline std::optional<std::size_t> FeatureSchema::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

inline std::optional<std::size_t> FeatureSchema::category_index(
    std::size_t feature, const std::string& token) const {
  const auto& cats = features_[feature].categories;
  for (std::size_t i = 0; i < cats.size(); ++i)
    if (cats[i] == token) return i;
  return std::nullopt;
}

inline Record validate_record(const std::vector<RawValue>& raw,
                              const FeatureSchema& schema) {
  if (raw.size() != schema.size())
    throw ValidationError("WrongArity",
                          "expected " + std::to_string(schema.size()) + " values, got " +
                              std::to_string(raw.size()));
  std::vector<std::string> violations;
  Record rec;
  rec.values.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Feature& f = schema.at(i);
    if (f.kind == FeatureKind::Numerical) {
      if (!std::holds_alternative<double>(raw[i])) {
        violations.push_back(f.name + ": expected number");
        rec.values.emplace_back(0.0);
        continue;
      }
      double v = std::get<double>(raw[i]);
      if (!std::isfinite(v)) {
        violations.push_back(f.name + ": non-finite number");
        rec.values.emplace_back(0.0);
        continue;
      }
      rec.values.emplace_back(v);
    } else {
      if (!std::holds_alternative<std::string>(raw[i])) {
        violations.push_back(f.name + ": expected category token");
        rec.values.emplace_back(std::string());
        continue;
      }
      const auto& tok = std::get<std::string>(raw[i]);
      if (!schema.category_index(i, tok)) {
        violations.push_back(f.name + ": unknown category '" + tok + "'");
        rec.values.emplace_back(std::string());
        continue;
      }
      rec.values.emplace_back(tok);
    }
  }
  if (!violations.empty()) {
    std::string code = "ValidationError";
    if (violations.size() == 1) {
      // Single violation keeps the specific code visible to callers.
      const auto& v = violations.front();
      if (v.find("non-finite") != std::string::npos) code = "NonFiniteNumber";
      else if (v.find("unknown category") != std::string::npos) code = "UnknownCategory";
    }
    throw ValidationError(code, violations.front(), violations);
  }
  return rec;
}

}  // namespace monitor
