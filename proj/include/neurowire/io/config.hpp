#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "neurowire/scenario.hpp"

namespace neurowire::io {

/// JSON scenario. With "experiment" the preset is the starting point and the
/// remaining keys override it; otherwise the defaults are. Unknown keys are
/// rejected. Syntax errors raise ParseError with line and column, semantic
/// ones ValidationError naming the field.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig parse_config_file(const std::filesystem::path& path);

/// Every field written explicitly, keys in a fixed order; parse_config of the
/// result gives back an equal config.
std::string serialize_config(const ScenarioConfig& config);

/// First 16 hex digits of the SHA-256 of serialize_config.
std::string config_hash(const ScenarioConfig& config);

}  // namespace neurowire::io
