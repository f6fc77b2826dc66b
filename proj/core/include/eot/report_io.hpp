#pragma once

#include <string>
#include <string_view>

#include "eot/simulator.hpp"

namespace eot {

/// Stable JSON form of a report. Doubles use shortest round-trip formatting
/// and fields keep declaration order, so equal reports give equal bytes.
[[nodiscard]] std::string report_to_json(const SimulationReport& report);

/// Inverse of report_to_json. Throws InputError naming the missing or
/// malformed field.
[[nodiscard]] SimulationReport report_from_json(std::string_view text);

}  // namespace eot
