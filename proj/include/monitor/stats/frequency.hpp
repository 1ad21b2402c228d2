#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monitor/core/errors.hpp"
#include "monitor/core/schema.hpp"

namespace monitor::stats {

// Per-category counts for one categorical feature. Category set is fixed at
// construction from the schema; unknown tokens are rejected, not admitted.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  explicit FrequencyTable(std::vector<std::string> categories)
      : categories_(std::move(categories)), counts_(categories_.size(), 0) {}

  void update(const std::string& token) {
    for (std::size_t i = 0; i < categories_.size(); ++i) {
      if (categories_[i] == token) {
        ++counts_[i];
        ++total_;
        return;
      }
    }
    throw Error("UnknownCategory", "category '" + token + "' not declared");
  }

  void update_index(std::size_t category_index) {
    ++counts_.at(category_index);
    ++total_;
  }

  std::uint64_t count(const std::string& token) const {
    for (std::size_t i = 0; i < categories_.size(); ++i)
      if (categories_[i] == token) return counts_[i];
    throw Error("UnknownCategory", "category '" + token + "' not declared");
  }

  const std::vector<std::string>& categories() const { return categories_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }

 private:
  std::vector<std::string> categories_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

}  // namespace monitor::stats
