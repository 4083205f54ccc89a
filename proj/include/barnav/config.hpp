#pragma once

#include <filesystem>

#include <json.hpp>

#include "barnav/bench.hpp"
#include "barnav/worldgen.hpp"

namespace barnav {

/// Effective run settings as JSON (the `--print-config` view).
nlohmann::json settings_to_json(const RunSettings& s);

/// Overlays `j` onto `s`. Unknown keys and wrongly typed values throw Parse.
void apply_settings_json(const nlohmann::json& j, RunSettings& s);

void apply_gen_params_json(const nlohmann::json& j, GenParams& p);

/// Reads a JSON config file with optional "run" and "generate" sections.
void load_config_file(const std::filesystem::path& path, RunSettings& run, GenParams& gen);

}  // namespace barnav
