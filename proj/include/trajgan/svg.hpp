#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajgan/metrics.hpp"
#include "trajgan/scene.hpp"
#include "trajgan/target_points.hpp"

namespace trajgan {

struct SceneRenderOptions {
  std::vector<Vec2> prediction;       // empty -> layer omitted
  std::vector<Vec2> target_points;    // global coordinates
  bool draw_ground_truth = true;
};

// Layered scene render: drivable area, one polyline per track (observed
// part, colored by role), the target agent's ground-truth future and the
// prediction as paths, target points as circles. Output is byte-stable.
std::string render_scene_svg(const Scene& scene,
                             const SceneRenderOptions& options);

struct BoxplotSeries {
  std::string label;
  Aggregate stats;
};

// Quartile boxes with median line, one box per series.
std::string render_boxplot_svg(const std::string& title,
                               const std::string& unit,
                               const std::vector<BoxplotSeries>& series);

}  // namespace trajgan
