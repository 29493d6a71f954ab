#include "trajgan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "trajgan/error.hpp"

namespace trajgan {

std::string role_name(Role r) {
  switch (r) {
    case Role::kAgent: return "AGENT";
    case Role::kAv: return "AV";
    case Role::kOther: return "OTHERS";
  }
  return "OTHERS";
}

std::optional<Vec2> AgentTrack::at_frame(int frame) const {
  for (const auto& p : positions) {
    if (p.frame == frame) return Vec2{p.x, p.y};
    if (p.frame > frame) break;
  }
  return std::nullopt;
}

Vec2 AgentTrack::at_frame_replicated(int frame) const {
  Vec2 value{positions.front().x, positions.front().y};
  for (const auto& p : positions) {
    if (p.frame > frame) break;
    value = {p.x, p.y};
  }
  return value;
}

int AgentTrack::observed_count(int t_obs) const {
  int n = 0;
  for (const auto& p : positions) {
    if (p.frame < t_obs) ++n;
  }
  return n;
}

const AgentTrack& Scene::agent() const {
  for (const auto& t : tracks) {
    if (t.role == Role::kAgent) return t;
  }
  throw DataError("scene " + scene_id + " has no AGENT track");
}

Vec2 Scene::agent_last_observed() const {
  return agent().at_frame_replicated(t_obs - 1);
}

bool Scene::has_future() const { return agent().last_frame() >= t_obs; }

std::string format_double(double v) {
  // Shortest decimal that parses back to the same double.
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

Role parse_role(const std::string& s, const std::string& path) {
  if (s == "AGENT") return Role::kAgent;
  if (s == "AV") return Role::kAv;
  if (s == "OTHERS" || s == "OTHER") return Role::kOther;
  throw DataError(path + ": unknown OBJECT_TYPE '" + s + "'");
}

double parse_number(const std::string& s, const std::string& path,
                    const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw DataError(path + ": bad " + what + " value '" + s + "'");
  }
  return v;
}

}  // namespace

Scene read_scene_csv(const std::string& path,
                     std::shared_ptr<const DrivableArea> map,
                     const WindowConfig& config) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open scene file: " + path);
  std::string line;
  if (!std::getline(is, line)) {
    throw DataError("malformed scene (empty file): " + path);
  }
  {
    auto header = split_csv_line(line);
    const std::vector<std::string> expected = {"TIMESTAMP", "TRACK_ID",
                                               "OBJECT_TYPE", "X",
                                               "Y",         "CITY_NAME"};
    if (header != std::vector<std::string>(expected)) {
      throw DataError("unexpected CSV header in " + path);
    }
  }

  struct Row {
    double t;
    Role role;
    double x, y;
  };
  std::vector<std::string> track_order;
  std::map<std::string, std::vector<Row>> rows;
  double t0 = 0.0;
  bool have_t0 = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw DataError(path + ": expected 6 columns, got " +
                      std::to_string(fields.size()));
    }
    Row row{parse_number(fields[0], path, "TIMESTAMP"),
            parse_role(fields[2], path), parse_number(fields[3], path, "X"),
            parse_number(fields[4], path, "Y")};
    auto [it, inserted] = rows.try_emplace(fields[1]);
    if (inserted) track_order.push_back(fields[1]);
    if (!it->second.empty() && row.t <= it->second.back().t) {
      throw DataError(path + ": non-monotonic timestamps in track " +
                      fields[1]);
    }
    it->second.push_back(row);
    if (!have_t0 || row.t < t0) {
      t0 = row.t;
      have_t0 = true;
    }
  }
  if (!have_t0) {
    throw DataError("malformed scene (no data rows): " + path);
  }

  Scene scene;
  scene.scene_id = [&] {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
  }();
  scene.map = std::move(map);
  scene.t_obs = config.t_obs;
  scene.t_pred = config.t_pred;
  scene.hz = config.hz;

  int agent_count = 0;
  for (const auto& id : track_order) {
    AgentTrack track;
    track.track_id = id;
    track.role = rows[id].front().role;
    for (const auto& row : rows[id]) {
      if (row.role != track.role) {
        throw DataError(path + ": track " + id + " changes OBJECT_TYPE");
      }
      const int frame =
          static_cast<int>(std::llround((row.t - t0) * config.hz));
      if (!track.positions.empty() && frame <= track.positions.back().frame) {
        throw DataError(path + ": track " + id +
                        " has duplicate frame after quantization");
      }
      if (frame < 0 || frame >= config.t_obs + config.t_pred) {
        throw DataError(path + ": track " + id + " frame " +
                        std::to_string(frame) + " outside the window");
      }
      track.positions.push_back({frame, row.x, row.y});
    }
    if (track.role == Role::kAgent) ++agent_count;
    scene.tracks.push_back(std::move(track));
  }
  if (agent_count != 1) {
    throw DataError("malformed scene (" + std::to_string(agent_count) +
                    " AGENT tracks): " + path);
  }
  // The AGENT must be gap-free over the whole horizon, or over exactly the
  // observation window for prediction-input scenes without ground truth.
  const auto& agent = scene.agent();
  const int agent_frames = static_cast<int>(agent.positions.size());
  if (agent_frames != scene.horizon() && agent_frames != scene.t_obs) {
    throw DataError("malformed scene (AGENT track incomplete): " + path);
  }
  for (int f = 0; f < agent_frames; ++f) {
    if (agent.positions[f].frame != f) {
      throw DataError("malformed scene (AGENT missing frame " +
                      std::to_string(f) + "): " + path);
    }
  }
  return scene;
}

void write_scene_csv(const std::string& path, const Scene& scene) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open scene file for writing: " + path);
  os << "TIMESTAMP,TRACK_ID,OBJECT_TYPE,X,Y,CITY_NAME\n";
  for (const auto& track : scene.tracks) {
    for (const auto& p : track.positions) {
      os << format_double(static_cast<double>(p.frame) / scene.hz) << ','
         << track.track_id << ',' << role_name(track.role) << ','
         << format_double(p.x) << ',' << format_double(p.y) << ",SYN\n";
    }
  }
  if (!os) throw DataError("write failed: " + path);
}

DrivableArea read_map_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open map file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad map JSON in " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("polygons") || !j["polygons"].is_array()) {
    throw DataError("map JSON missing 'polygons' array: " + path);
  }
  DrivableArea area;
  for (const auto& poly_json : j["polygons"]) {
    Polygon poly;
    for (const auto& vertex : poly_json) {
      if (!vertex.is_array() || vertex.size() != 2) {
        throw DataError("map polygon vertex must be [x,y]: " + path);
      }
      poly.push_back({vertex[0].get<double>(), vertex[1].get<double>()});
    }
    if (poly.size() < 3) {
      throw DataError("map polygon with fewer than 3 vertices: " + path);
    }
    area.polygons.push_back(std::move(poly));
  }
  return area;
}

void write_map_json(const std::string& path, const DrivableArea& area) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open map file for writing: " + path);
  os << "{\"polygons\": [";
  for (std::size_t pi = 0; pi < area.polygons.size(); ++pi) {
    if (pi) os << ", ";
    os << '[';
    const auto& poly = area.polygons[pi];
    for (std::size_t vi = 0; vi < poly.size(); ++vi) {
      if (vi) os << ", ";
      os << '[' << format_double(poly[vi].x) << ", "
         << format_double(poly[vi].y) << ']';
    }
    os << ']';
  }
  os << "]}\n";
  if (!os) throw DataError("write failed: " + path);
}

}  // namespace trajgan
