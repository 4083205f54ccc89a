#include "barnav/world_io.hpp"

#include <fstream>
#include <sstream>

#include "barnav/error.hpp"

namespace barnav {

using nlohmann::json;

std::string encode_rle(const OccupancyGrid& grid) {
  std::string out;
  const auto cells = grid.data();
  std::size_t i = 0;
  while (i < cells.size()) {
    const bool occ = cells[i] >= kLethalThreshold;
    std::size_t j = i;
    while (j < cells.size() && (cells[j] >= kLethalThreshold) == occ) ++j;
    if (!out.empty()) out += ',';
    out += occ ? '1' : '0';
    out += 'x';
    out += std::to_string(j - i);
    i = j;
  }
  return out;
}

void decode_rle(const std::string& rle, OccupancyGrid& grid) {
  auto cells = grid.data();
  std::size_t pos = 0;
  std::stringstream ss(rle);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.size() < 3 || (token[0] != '0' && token[0] != '1') || token[1] != 'x')
      throw NavError(ErrorKind::Parse, "bad rle token '" + token + "'");
    std::size_t n = 0;
    try {
      n = std::stoul(token.substr(2));
    } catch (const std::exception&) {
      throw NavError(ErrorKind::Parse, "bad rle count '" + token + "'");
    }
    if (n == 0 || pos + n > cells.size()) throw NavError(ErrorKind::Parse, "rle overruns grid");
    std::fill_n(cells.begin() + static_cast<std::ptrdiff_t>(pos), n,
                token[0] == '1' ? kOccupiedCost : kFreeCost);
    pos += n;
  }
  if (pos != cells.size()) throw NavError(ErrorKind::Parse, "rle shorter than grid");
}

json params_to_json(const GenParams& p) {
  return {{"initial_fill", p.initial_fill},
          {"smoothing_iterations", p.smoothing_iterations},
          {"fill_threshold", p.fill_threshold},
          {"clear_threshold", p.clear_threshold},
          {"width", p.width},
          {"height", p.height},
          {"resolution", p.resolution},
          {"seed", p.seed},
          {"clearance_radius", p.clearance_radius},
          {"max_attempts", p.max_attempts}};
}

GenParams params_from_json(const json& j) {
  GenParams p;
  p.initial_fill = j.at("initial_fill").get<double>();
  p.smoothing_iterations = j.at("smoothing_iterations").get<int>();
  p.fill_threshold = j.at("fill_threshold").get<int>();
  p.clear_threshold = j.at("clear_threshold").get<int>();
  p.width = j.at("width").get<int>();
  p.height = j.at("height").get<int>();
  p.resolution = j.at("resolution").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.clearance_radius = j.value("clearance_radius", p.clearance_radius);
  p.max_attempts = j.value("max_attempts", p.max_attempts);
  return p;
}

json world_to_json(const WorldSpec& w) {
  return {{"schema_version", kWorldSchemaVersion},
          {"params", params_to_json(w.params)},
          {"grid",
           {{"width", w.grid.width()},
            {"height", w.grid.height()},
            {"resolution", w.grid.resolution()},
            {"origin", {w.grid.origin().x, w.grid.origin().y}},
            {"rle", encode_rle(w.grid)}}},
          {"start", {{"x", w.start.x}, {"y", w.start.y}, {"theta", w.start.theta}}},
          {"goal", {{"x", w.goal.x}, {"y", w.goal.y}}},
          {"path_length", w.path_length},
          {"optimal_time", w.optimal_time}};
}

WorldSpec world_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kWorldSchemaVersion)
      throw NavError(ErrorKind::Parse, "unsupported world schema_version");
    WorldSpec w;
    w.params = params_from_json(j.at("params"));
    const json& g = j.at("grid");
    const auto origin = g.at("origin").get<std::vector<double>>();
    if (origin.size() != 2) throw NavError(ErrorKind::Parse, "grid origin must have 2 entries");
    w.grid = OccupancyGrid(g.at("width").get<int>(), g.at("height").get<int>(),
                           g.at("resolution").get<double>(), {origin[0], origin[1]});
    decode_rle(g.at("rle").get<std::string>(), w.grid);
    const json& s = j.at("start");
    w.start = {s.at("x").get<double>(), s.at("y").get<double>(), s.at("theta").get<double>()};
    w.goal = {j.at("goal").at("x").get<double>(), j.at("goal").at("y").get<double>()};
    w.path_length = j.at("path_length").get<double>();
    w.optimal_time = j.at("optimal_time").get<double>();
    if (!(w.path_length > 0.0)) throw NavError(ErrorKind::Parse, "path_length must be > 0");
    return w;
  } catch (const json::exception& e) {
    throw NavError(ErrorKind::Parse, std::string("world json: ") + e.what());
  }
}

void save_world(const WorldSpec& world, const std::filesystem::path& path) {
  write_text_file(path, world_to_json(world).dump(2) + "\n");
}

WorldSpec load_world(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw NavError(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  return world_from_json(j);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NavError(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NavError(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw NavError(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace barnav
