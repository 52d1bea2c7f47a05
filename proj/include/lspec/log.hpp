#pragma once

#include <cstddef>
#include <string_view>

namespace lspec {

/// Writes "warning: <msg>" to stderr unless warnings are disabled.
void log_warning(std::string_view msg);
void set_warnings_enabled(bool enabled);
std::size_t warning_count();

}  // namespace lspec
