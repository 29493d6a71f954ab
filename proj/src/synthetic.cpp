#include "trajgan/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trajgan/error.hpp"

namespace trajgan {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct PathPoint {
  Vec2 pos;
  double heading;
};

// Integrates a unicycle path: per-step speeds and headings, dt = 1/hz.
std::vector<PathPoint> integrate_path(Vec2 start, double heading0,
                                      const std::vector<double>& speeds,
                                      double turn_total, double hz) {
  const std::size_t frames = speeds.size() + 1;
  const double dpsi =
      speeds.empty() ? 0.0 : turn_total / static_cast<double>(speeds.size());
  std::vector<PathPoint> path;
  path.reserve(frames);
  Vec2 p = start;
  double psi = heading0;
  path.push_back({p, psi});
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    p = p + Vec2{std::cos(psi), std::sin(psi)} * (speeds[i] / hz);
    psi += dpsi;
    path.push_back({p, psi});
  }
  return path;
}

// Overlapping quads centered on the path; union forms the corridor.
DrivableArea corridor_area(const std::vector<PathPoint>& path,
                           double half_width, double back_margin,
                           double ahead_margin) {
  std::vector<PathPoint> extended;
  const auto& first = path.front();
  const auto& last = path.back();
  extended.push_back(
      {first.pos - Vec2{std::cos(first.heading), std::sin(first.heading)} *
                       back_margin,
       first.heading});
  extended.insert(extended.end(), path.begin(), path.end());
  extended.push_back(
      {last.pos +
           Vec2{std::cos(last.heading), std::sin(last.heading)} * ahead_margin,
       last.heading});

  DrivableArea area;
  const std::size_t stride = 4;
  for (std::size_t i = 0; i + 1 < extended.size(); i += stride) {
    const std::size_t j = std::min(i + stride, extended.size() - 1);
    const auto& a = extended[i];
    const auto& b = extended[j];
    const Vec2 na{-std::sin(a.heading), std::cos(a.heading)};
    const Vec2 nb{-std::sin(b.heading), std::cos(b.heading)};
    Polygon quad{a.pos + na * half_width, a.pos - na * half_width,
                 b.pos - nb * half_width, b.pos + nb * half_width};
    double twice = 0.0;
    for (std::size_t v = 0; v < quad.size(); ++v) {
      twice += cross(quad[v], quad[(v + 1) % quad.size()]);
    }
    if (twice < 0.0) std::reverse(quad.begin(), quad.end());
    area.polygons.push_back(std::move(quad));
    if (j == extended.size() - 1) break;
  }
  return area;
}

AgentTrack track_from_path(const std::string& id, Role role,
                           const std::vector<PathPoint>& path,
                           int first_frame) {
  AgentTrack t;
  t.track_id = id;
  t.role = role;
  for (std::size_t i = 0; i < path.size(); ++i) {
    t.positions.push_back(
        {first_frame + static_cast<int>(i), path[i].pos.x, path[i].pos.y});
  }
  return t;
}

}  // namespace

std::string scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kStraight: return "straight";
    case ScenarioKind::kCurve: return "curve";
    case ScenarioKind::kBrake: return "brake";
    case ScenarioKind::kTurnWithTraffic: return "turn_with_traffic";
  }
  return "straight";
}

ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "straight") return ScenarioKind::kStraight;
  if (name == "curve") return ScenarioKind::kCurve;
  if (name == "brake") return ScenarioKind::kBrake;
  if (name == "turn_with_traffic") return ScenarioKind::kTurnWithTraffic;
  throw ConfigError("unknown scenario kind: " + name);
}

bool scenario_is_curved(ScenarioKind k) {
  return k == ScenarioKind::kCurve || k == ScenarioKind::kTurnWithTraffic;
}

Scene generate_synthetic_scene(std::uint64_t seed, ScenarioKind kind,
                               const WindowConfig& config) {
  Rng rng(seed * 4u + static_cast<std::uint64_t>(kind) + 0x5e3d1u);
  const int frames = config.t_obs + config.t_pred;
  const int steps = frames - 1;

  const Vec2 start{rng.uniform(-60.0, 60.0), rng.uniform(-60.0, 60.0)};
  const double heading0 = rng.uniform(-kPi, kPi);
  const bool curved = scenario_is_curved(kind);
  // Curved scenarios stay fast and tight enough that the 2 m / 20% rule
  // labels them decisively; slow wide arcs would read as straight.
  const double speed0 =
      curved ? rng.uniform(8.5, 13.0) : rng.uniform(6.0, 13.0);

  std::vector<double> speeds(static_cast<std::size_t>(steps), speed0);
  double turn_total = 0.0;
  switch (kind) {
    case ScenarioKind::kStraight:
      break;
    case ScenarioKind::kCurve:
    case ScenarioKind::kTurnWithTraffic:
      turn_total = rng.uniform(120.0 * kDeg, 160.0 * kDeg) *
                   (rng.bernoulli(0.5) ? 1.0 : -1.0);
      break;
    case ScenarioKind::kBrake: {
      // Linear deceleration reaching zero a little before the end.
      const double stop_step = rng.uniform(0.6, 0.95) * steps;
      for (int i = 0; i < steps; ++i) {
        speeds[static_cast<std::size_t>(i)] =
            speed0 * std::max(0.0, 1.0 - static_cast<double>(i) / stop_step);
      }
      break;
    }
  }

  const auto agent_path =
      integrate_path(start, heading0, speeds, turn_total, config.hz);

  Scene scene;
  scene.scene_id = "syn" + std::to_string(seed) + "_" + scenario_kind_name(kind);
  scene.t_obs = config.t_obs;
  scene.t_pred = config.t_pred;
  scene.hz = config.hz;
  scene.tracks.push_back(
      track_from_path("agent-0", Role::kAgent, agent_path, 0));

  {
    // AV trails the agent path with a small lateral offset.
    std::vector<PathPoint> av_path;
    for (int f = 0; f < frames; ++f) {
      const auto& ref = agent_path[static_cast<std::size_t>(std::max(0, f - 12))];
      const Vec2 n{-std::sin(ref.heading), std::cos(ref.heading)};
      av_path.push_back({ref.pos + n * 3.5, ref.heading});
    }
    scene.tracks.push_back(track_from_path("av-0", Role::kAv, av_path, 0));
  }

  const std::size_t n_others = kind == ScenarioKind::kTurnWithTraffic
                                   ? 3 + rng.uniform_int(4)
                                   : rng.uniform_int(3);
  for (std::size_t k = 0; k < n_others; ++k) {
    const auto& anchor =
        agent_path[rng.uniform_int(agent_path.size())];
    const Vec2 n{-std::sin(anchor.heading), std::cos(anchor.heading)};
    const Vec2 d{std::cos(anchor.heading), std::sin(anchor.heading)};
    const Vec2 o_start =
        anchor.pos + n * rng.uniform(-12.0, 12.0) + d * rng.uniform(-20.0, 20.0);
    const double o_speed = rng.bernoulli(0.2) ? 0.0 : rng.uniform(2.0, 12.0);
    const double o_heading = anchor.heading + rng.uniform(-0.4, 0.4);
    const int o_first = static_cast<int>(rng.uniform_int(20));
    const int o_len = 1 + static_cast<int>(rng.uniform_int(
                              static_cast<std::size_t>(frames - o_first)));
    std::vector<double> o_speeds(static_cast<std::size_t>(o_len - 1), o_speed);
    const auto o_path =
        integrate_path(o_start, o_heading, o_speeds,
                       rng.uniform(-0.2, 0.2), config.hz);
    scene.tracks.push_back(track_from_path("other-" + std::to_string(k),
                                           Role::kOther, o_path, o_first));
  }

  const double half_width = 14.0 + 0.6 * speed0;
  const double ahead = speed0 * 3.0 * 0.35 + 12.0;
  auto area = std::make_shared<DrivableArea>(
      corridor_area(agent_path, half_width, 10.0, ahead));
  scene.map = std::move(area);
  return scene;
}

Scene translate_scene(const Scene& scene, Vec2 offset) {
  Scene out = scene;
  for (auto& track : out.tracks) {
    for (auto& p : track.positions) {
      p.x += offset.x;
      p.y += offset.y;
    }
  }
  auto map = std::make_shared<DrivableArea>(*scene.map);
  for (auto& poly : map->polygons) {
    for (auto& v : poly) v = v + offset;
  }
  out.map = std::move(map);
  return out;
}

}  // namespace trajgan
