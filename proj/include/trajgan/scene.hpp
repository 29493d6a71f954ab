#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trajgan/geometry.hpp"

namespace trajgan {

enum class Role { kAgent, kAv, kOther };

std::string role_name(Role r);

struct TrackPoint {
  int frame = 0;
  double x = 0.0;
  double y = 0.0;
};

// One actor's samples; frame indices strictly increasing, possibly with
// gaps for non-target actors.
struct AgentTrack {
  std::string track_id;
  Role role = Role::kOther;
  std::vector<TrackPoint> positions;

  std::optional<Vec2> at_frame(int frame) const;
  // Value at `frame` with gaps filled by replicating the previous sample
  // (the first sample for leading gaps).
  Vec2 at_frame_replicated(int frame) const;
  int first_frame() const { return positions.front().frame; }
  int last_frame() const { return positions.back().frame; }
  // Samples with frame < t_obs.
  int observed_count(int t_obs) const;
};

struct WindowConfig {
  int t_obs = 20;
  int t_pred = 30;
  double hz = 10.0;

  bool operator==(const WindowConfig&) const = default;
};

// One forecasting sample: every track, the map handle and the
// observation/prediction split. Exactly one track has the AGENT role.
struct Scene {
  std::string scene_id;
  std::vector<AgentTrack> tracks;
  std::shared_ptr<const DrivableArea> map;
  int t_obs = 20;
  int t_pred = 30;
  double hz = 10.0;

  const AgentTrack& agent() const;
  int horizon() const { return t_obs + t_pred; }
  Vec2 agent_last_observed() const;
  // Prediction-input scenes may carry observations only.
  bool has_future() const;
};

// Reads one scene from CSV with header
//   TIMESTAMP,TRACK_ID,OBJECT_TYPE,X,Y,CITY_NAME
// Timestamps are quantized to frame indices by rounding at `config.hz`,
// relative to the earliest timestamp in the file.
Scene read_scene_csv(const std::string& path,
                     std::shared_ptr<const DrivableArea> map,
                     const WindowConfig& config);
void write_scene_csv(const std::string& path, const Scene& scene);

// Map file: JSON {"polygons": [[[x,y], ...], ...]}.
DrivableArea read_map_json(const std::string& path);
void write_map_json(const std::string& path, const DrivableArea& area);

// Canonical shortest-round-trip double formatting used by every artifact
// writer so outputs stay byte-deterministic.
std::string format_double(double v);

}  // namespace trajgan
