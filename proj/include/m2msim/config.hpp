#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "m2msim/engine.hpp"

namespace m2m {

/**
 * JSON configuration. Every section is optional and missing keys keep their
 * defaults; unknown keys are rejected. Layout:
 *
 *   { "layout": {...}, "population": {...}, "radio": {...},
 *     "utility": {"ue": {...}, "mtcd": {...}, "pair": {...}},
 *     "graph": {...}, "lambda": 0.8, "num_drops": 100, "seed": 1,
 *     "allocation_mode": "GRAPH_BASED" }
 */
nlohmann::ordered_json ConfigToJson(const DropConfig& config);

/// Builds and validates a config from a JSON tree. Throws ConfigError naming the key.
DropConfig ConfigFromJson(const nlohmann::ordered_json& tree);

/// Parses config text; syntax errors report line and column of `sourceName`.
DropConfig ParseConfigText(std::string_view text, std::span<const std::string> overrides = {},
                           std::string_view sourceName = "<config>");

/// Reads `path` (empty path: defaults only), then applies key=value overrides.
DropConfig ParseConfig(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Applies one "dotted.key=value" override to a JSON tree. The value is read
/// as JSON when it parses, as a string otherwise.
void ApplyOverride(nlohmann::ordered_json& tree, std::string_view assignment);

}  // namespace m2m
