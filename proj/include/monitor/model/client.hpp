#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "monitor/core/errors.hpp"
#include "monitor/core/schema.hpp"

namespace monitor::model {

// The only view any analysis component has of the model: batched
// predictions in, output vectors out. Implementations are the HTTP upstream
// and in-process stubs for tests.
class ModelClient {
 public:
  virtual ~ModelClient() = default;

  // One output vector per record (class probabilities or a regression
  // value). Throws Error("ModelUnavailable") when the model cannot be
  // reached.
  virtual std::vector<std::vector<double>> predict(const std::vector<Record>& records) = 0;
};

// Wraps a plain function; the test and simulation models.
class FunctionModel : public ModelClient {
 public:
  using Fn = std::function<std::vector<double>(const Record&)>;
  explicit FunctionModel(Fn fn) : fn_(std::move(fn)) {}

  std::vector<std::vector<double>> predict(const std::vector<Record>& records) override {
    std::vector<std::vector<double>> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(fn_(r));
    return out;
  }

 private:
  Fn fn_;
};

}  // namespace monitor::model
