#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ifm {

/// Non-fatal numerical diagnostics attached to a result.
///
/// Hard precondition failures throw std::domain_error / std::invalid_argument;
/// conditions that degrade accuracy without invalidating the result (window
/// truncation, periodic wrap-around, paraxial sanity) are collected here so
/// the caller can decide whether to escalate them.
class Warnings {
public:
  void add(std::string message) { messages_.push_back(std::move(message)); }

  void merge(const Warnings &other) {
    messages_.insert(messages_.end(), other.messages_.begin(),
                     other.messages_.end());
  }

  [[nodiscard]] bool empty() const noexcept { return messages_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return messages_.size(); }
  [[nodiscard]] const std::vector<std::string> &messages() const noexcept {
    return messages_;
  }

private:
  std::vector<std::string> messages_;
};

} // namespace ifm
