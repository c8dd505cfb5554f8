#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dynaedit {

// Coarse error taxonomy. The CLI maps each category to an exit code and a
// machine-readable tag.
enum class ErrorCategory {
  shape,
  degenerate_input,
  degenerate_condition,
  unknown_condition,
  config,
  config_mismatch,
  too_few_frames,
  trace_too_short,
  io,
};

std::string_view to_string(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace dynaedit
