#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "barnav/worldgen.hpp"

namespace barnav {

inline constexpr int kWorldSchemaVersion = 1;

/// Row-major run-length encoding of the occupancy bits, e.g. "1x31,0x28,1x2".
std::string encode_rle(const OccupancyGrid& grid);
void decode_rle(const std::string& rle, OccupancyGrid& grid);

nlohmann::json params_to_json(const GenParams& p);
GenParams params_from_json(const nlohmann::json& j);

nlohmann::json world_to_json(const WorldSpec& world);
WorldSpec world_from_json(const nlohmann::json& j);

void save_world(const WorldSpec& world, const std::filesystem::path& path);
WorldSpec load_world(const std::filesystem::path& path);

/// Whole-file helpers shared by the record and report writers.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace barnav
