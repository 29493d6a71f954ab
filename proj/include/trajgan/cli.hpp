#pragma once

#include <string>
#include <vector>

#include "trajgan/config.hpp"
#include "trajgan/scene.hpp"

namespace trajgan::cli {

// Scene files plus the shared map of a corpus directory, sorted by filename.
struct Corpus {
  std::vector<Scene> scenes;
  std::shared_ptr<const DrivableArea> map;
};

Corpus load_corpus(const std::string& dir, const WindowConfig& window);

// Writes n scene CSVs laid out on a well-separated grid, one shared
// map.json and a manifest.json with per-scene curvature labels.
void cmd_gen_data(std::size_t n, double straight_mix, std::uint64_t seed,
                  const std::string& out_dir, const ExperimentConfig& config);

// Trains on a corpus directory; writes metrics.csv, model.ckpt (best
// validation parameters) and config.ini to out_dir.
void cmd_train(const ExperimentConfig& config, const std::string& corpus_dir,
               const std::string& out_dir);

// Single-scene prediction CSV (frame,x,y); optional layered SVG render.
void cmd_predict(const std::string& checkpoint_path,
                 const std::string& scene_path, const std::string& map_path,
                 std::uint64_t seed, const ExperimentConfig& config,
                 const std::string& out_csv, const std::string& svg_path);

// Evaluation report (CSV + JSON aggregates) and per-metric boxplot SVGs.
void cmd_evaluate(const std::string& checkpoint_path,
                  const std::string& corpus_dir,
                  const ExperimentConfig& config, const std::string& out_dir);

// Scene render with sampled target points, no checkpoint required.
void cmd_plot(const std::string& scene_path, const std::string& map_path,
              std::uint64_t seed, const ExperimentConfig& config,
              const std::string& out_svg);

}  // namespace trajgan::cli
