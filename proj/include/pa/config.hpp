#pragma once

#include <string>
#include <string_view>

#include "pa/benchmark.hpp"

namespace pa {

/// Parses the flat key=value plan format ('#' comments, [section] headers
/// per method). Every omitted key keeps its documented default, so the
/// returned plan is fully resolved. Throws ConfigError with the line number
/// and offending key on malformed input, unknown keys, or out-of-range
/// values.
ExperimentPlan parse_plan(std::string_view text);

/// Reads and parses a plan file; throws IoError when unreadable.
ExperimentPlan load_plan(const std::string& path);

/// Canonical text form listing every resolved key; parse_plan(serialize_plan(p))
/// reproduces p exactly.
std::string serialize_plan(const ExperimentPlan& plan);

}  // namespace pa
