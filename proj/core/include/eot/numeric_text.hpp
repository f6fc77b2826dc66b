#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace eot {

/// Shortest decimal that round-trips to the same double. Locale-independent.
[[nodiscard]] std::string format_double(double value);

/// Parses the whole of `text` (surrounding spaces allowed) as a decimal or
/// scientific-notation double. Returns nullopt on any trailing garbage.
[[nodiscard]] std::optional<double> parse_double(std::string_view text);

}  // namespace eot
