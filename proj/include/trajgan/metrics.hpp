#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajgan/preprocess.hpp"
#include "trajgan/scene.hpp"

namespace trajgan {

// Mean Euclidean distance over all timesteps.
double ade(const std::vector<Vec2>& y_hat, const std::vector<Vec2>& y);

// Euclidean distance between the final points.
double fde(const std::vector<Vec2>& y_hat, const std::vector<Vec2>& y);

// Extrapolates the last observed displacement over the prediction horizon.
std::vector<Vec2> constant_velocity_baseline(const Scene& scene);

// Ground-truth future positions of the target agent.
std::vector<Vec2> ground_truth_future(const Scene& scene);

struct EvalRow {
  std::string scene_id;
  Curvature label = Curvature::kStraight;
  double ade = 0.0;
  double fde = 0.0;
};

struct Aggregate {
  std::size_t count = 0;
  double mean = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

// Per-class and overall statistics, recomputable from the per-scene rows.
// Quartiles use linear interpolation between order statistics.
struct EvalReport {
  std::vector<EvalRow> rows;
  std::optional<Aggregate> straight_ade, straight_fde;
  std::optional<Aggregate> curve_ade, curve_fde;
  Aggregate overall_ade, overall_fde;
};

Aggregate aggregate_values(std::vector<double> values);
EvalReport make_report(std::vector<EvalRow> rows);

void write_report_csv(const std::string& path, const EvalReport& report);
void write_report_json(const std::string& path, const EvalReport& report);

}  // namespace trajgan
