#include "trajgan/target_points.hpp"

#include <cmath>
#include <numbers>

#include "trajgan/error.hpp"
#include "trajgan/preprocess.hpp"

namespace trajgan {

DynamicState estimate_dynamics(const AgentTrack& track, int t_obs, double hz,
                               double decay) {
  const auto disp = to_displacements(track, 0, t_obs);
  if (disp.deltas.empty()) {
    throw DimensionError("estimate_dynamics: need at least 2 observed frames");
  }
  DynamicState state;
  state.position = disp.reconstruct().back();

  // Delta i ends at frame i+1; age counts back from the newest delta.
  const std::size_t last = disp.deltas.size() - 1;
  double weight_sum = 0.0;
  double speed_sum = 0.0;
  Vec2 dir_sum{0.0, 0.0};
  bool any_motion = false;
  for (std::size_t i = 0; i < disp.deltas.size(); ++i) {
    const double w = std::pow(decay, static_cast<double>(last - i));
    const Vec2 d = disp.deltas[i];
    const double len = d.norm();
    weight_sum += w;
    speed_sum += w * len * hz;
    if (len > 1e-12) {
      any_motion = true;
      dir_sum = dir_sum + d * (w / len);
    }
  }
  if (!any_motion) {
    state.speed = 0.0;
    state.heading = 0.0;
    state.stationary = true;
    return state;
  }
  state.speed = speed_sum / weight_sum;
  state.heading = std::atan2(dir_sum.y, dir_sum.x);
  // atan2 can return exactly -pi; the contract keeps heading in (-pi, pi].
  if (state.heading <= -std::numbers::pi) state.heading = std::numbers::pi;
  return state;
}

DrivableArea crop_drivable(const DrivableArea& area, Vec2 center,
                           double half_width) {
  if (half_width <= 0.0) {
    throw ConfigError("crop_drivable: half-width must be positive");
  }
  const Vec2 lo{center.x - half_width, center.y - half_width};
  const Vec2 hi{center.x + half_width, center.y + half_width};
  DrivableArea out;
  for (const auto& poly : area.polygons) {
    Polygon clipped = clip_polygon_to_box(poly, lo, hi);
    if (!clipped.empty()) out.polygons.push_back(std::move(clipped));
  }
  return out;
}

Vec2 TargetPointSet::to_global(std::size_t i) const {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const Vec2 p = local_points[i];
  return {origin.x + c * p.x - s * p.y, origin.y + s * p.x + c * p.y};
}

std::vector<Vec2> TargetPointSet::global_points() const {
  std::vector<Vec2> out;
  out.reserve(local_points.size());
  for (std::size_t i = 0; i < local_points.size(); ++i)
    out.push_back(to_global(i));
  return out;
}

namespace {

Vec2 to_local(Vec2 global, Vec2 origin, double heading) {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const Vec2 r = global - origin;
  return {c * r.x + s * r.y, -s * r.x + c * r.y};
}

}  // namespace

TargetPointSet sample_target_points(const DynamicState& state,
                                    const DrivableArea& area,
                                    const TargetSamplerConfig& config,
                                    double t_pred_seconds, Rng& rng) {
  TargetPointSet out;
  out.origin = state.position;
  out.heading = state.heading;

  const double r_cv = state.speed * t_pred_seconds;
  const bool stationary = state.stationary || r_cv <= 1e-9;

  std::vector<Vec2> accepted;
  const long max_attempts =
      static_cast<long>(config.count) * config.max_attempts_per_point;
  for (long attempt = 0;
       attempt < max_attempts &&
       accepted.size() < static_cast<std::size_t>(config.count);
       ++attempt) {
    Vec2 candidate;
    if (stationary) {
      const double rr = config.stationary_radius * std::sqrt(rng.uniform());
      const double ang = rng.uniform() * 2.0 * std::numbers::pi;
      candidate = state.position + Vec2{rr * std::cos(ang), rr * std::sin(ang)};
    } else {
      const double rr = rng.uniform(r_cv * (1.0 - config.radial_spread),
                                    r_cv * (1.0 + config.radial_spread));
      const double bearing = state.heading + rng.uniform(-config.max_bearing_rad,
                                                         config.max_bearing_rad);
      candidate =
          state.position + Vec2{rr * std::cos(bearing), rr * std::sin(bearing)};
    }
    if (point_in_drivable(area, candidate)) {
      accepted.push_back(candidate);
    }
  }

  if (accepted.empty()) {
    Vec2 cv = state.position +
              Vec2{r_cv * std::cos(state.heading), r_cv * std::sin(state.heading)};
    accepted.push_back(nearest_point_in_area(area, cv));
  }
  const std::size_t distinct = accepted.size();
  for (std::size_t i = 0; accepted.size() < static_cast<std::size_t>(config.count);
       ++i) {
    accepted.push_back(accepted[i % distinct]);
  }

  out.local_points.reserve(accepted.size());
  for (const auto& g : accepted) {
    out.local_points.push_back(to_local(g, out.origin, out.heading));
  }
  return out;
}

TargetPointSet extract_target_points(const Scene& scene,
                                     const TargetSamplerConfig& config,
                                     double decay, Rng& rng) {
  const auto state =
      estimate_dynamics(scene.agent(), scene.t_obs, scene.hz, decay);
  DrivableArea cropped =
      crop_drivable(*scene.map, state.position, config.crop_half_width);
  const DrivableArea& effective = cropped.empty() ? *scene.map : cropped;
  const double t_pred_seconds = static_cast<double>(scene.t_pred) / scene.hz;
  return sample_target_points(state, effective, config, t_pred_seconds, rng);
}

}  // namespace trajgan
