#pragma once

#include <vector>

#include "trajgan/geometry.hpp"
#include "trajgan/rng.hpp"
#include "trajgan/scene.hpp"

namespace trajgan {

// Velocity and orientation of an agent at its last observation frame.
struct DynamicState {
  double speed = 0.0;    // m/s
  double heading = 0.0;  // radians in (-pi, pi]
  Vec2 position;         // last observed position
  bool stationary = false;
};

// Exponentially decay-weighted estimate over per-frame displacements: newer
// frames weigh more (weight decay^(age)), headings averaged on the circle
// via the weighted unit-vector mean.
DynamicState estimate_dynamics(const AgentTrack& track, int t_obs, double hz,
                               double decay = 0.9);

// Polygons clipped to the axis-aligned square of the given half-width about
// center; an empty result means the caller must fall back.
DrivableArea crop_drivable(const DrivableArea& area, Vec2 center,
                           double half_width);

struct TargetSamplerConfig {
  int count = 32;
  double radial_spread = 0.2;          // annulus half-width as share of r
  double max_bearing_rad = 0.5235987755982988;  // 30 degrees
  double stationary_radius = 2.0;      // goal disc for stopped agents
  double crop_half_width = 40.0;
  int max_attempts_per_point = 100;

  bool operator==(const TargetSamplerConfig&) const = default;
};

// Candidate goal positions in the agent-local frame (origin at the last
// observed position, x-axis along the heading).
struct TargetPointSet {
  std::vector<Vec2> local_points;
  Vec2 origin;
  double heading = 0.0;

  Vec2 to_global(std::size_t i) const;
  std::vector<Vec2> global_points() const;
};

// Draws `count` goal candidates from an annulus sector around the
// constant-velocity endpoint (radius speed * t_pred seconds, bearing within
// the non-holonomic cone), rejection-sampled against the drivable area.
// Stationary agents draw from a tight disc instead. Never returns fewer
// than `count` points: short acceptance is padded by repeating accepted
// points, and total rejection falls back to the constant-velocity point
// clamped to the nearest drivable point.
TargetPointSet sample_target_points(const DynamicState& state,
                                    const DrivableArea& area,
                                    const TargetSamplerConfig& config,
                                    double t_pred_seconds, Rng& rng);

// estimate -> crop -> sample against the scene's own map.
TargetPointSet extract_target_points(const Scene& scene,
                                     const TargetSamplerConfig& config,
                                     double decay, Rng& rng);

}  // namespace trajgan
