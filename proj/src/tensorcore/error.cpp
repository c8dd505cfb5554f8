#include "dynaedit/error.hpp"

namespace dynaedit {

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::shape: return "shape";
    case ErrorCategory::degenerate_input: return "degenerate_input";
    case ErrorCategory::degenerate_condition: return "degenerate_condition";
    case ErrorCategory::unknown_condition: return "unknown_condition";
    case ErrorCategory::config: return "config";
    case ErrorCategory::config_mismatch: return "config_mismatch";
    case ErrorCategory::too_few_frames: return "too_few_frames";
    case ErrorCategory::trace_too_short: return "trace_too_short";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

}  // namespace dynaedit
