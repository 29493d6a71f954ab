#pragma once

#include <string>

#include "trajgan/train.hpp"

namespace trajgan {

// Every tunable of the pipeline plus file paths. Unknown keys are rejected;
// serialize() -> parse is lossless.
struct ExperimentConfig {
  WindowConfig window;
  model::ModelDims dims;
  TargetSamplerConfig sampler;
  double dynamics_decay = 0.9;

  int epochs = 150;
  double lr = 0.001;
  int batch_size = 64;
  long plateau_window = 5000;
  double plateau_factor = 0.5;
  long eval_interval = 250;
  bool class_balance = true;
  double val_fraction = 0.1;

  model::LossWeights loss_weights;

  AugmentConfig augment;
  bool augment_enabled = true;

  std::uint64_t train_seed = 7;
  std::uint64_t eval_seed = 11;

  std::string corpus_dir;
  std::string map_file;
  std::string out_dir;

  bool operator==(const ExperimentConfig&) const = default;

  train::TrainConfig train_config() const;
  train::EvalConfig eval_config() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);
void save_config(const std::string& path, const ExperimentConfig& config);

}  // namespace trajgan
