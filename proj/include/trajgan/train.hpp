#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajgan/gan.hpp"
#include "trajgan/metrics.hpp"
#include "trajgan/preprocess.hpp"
#include "trajgan/target_points.hpp"

namespace trajgan::train {

struct SchedulerConfig {
  double factor = 0.5;
  long window = 5000;  // iterations without improvement before a decay
};

// Plateau-triggered multiplicative decay: when the tracked metric has not
// improved for a full window, the learning rate is multiplied by `factor`.
// The rate never increases.
class PlateauScheduler {
 public:
  PlateauScheduler(double initial_lr, const SchedulerConfig& config)
      : lr_(initial_lr), config_(config) {}

  void observe(long iteration, double metric);
  double lr() const { return lr_; }

 private:
  double lr_;
  SchedulerConfig config_;
  double best_ = 0.0;
  bool has_best_ = false;
  long anchor_ = 0;  // iteration of the last improvement or decay
};

struct TrainConfig {
  int epochs = 150;
  double lr = 0.001;
  int batch_size = 64;
  SchedulerConfig scheduler;
  model::LossWeights loss_weights;
  model::ModelDims dims;
  AugmentConfig augment;
  bool augment_enabled = true;
  bool class_balance = true;
  long eval_interval = 250;
  double val_fraction = 0.1;
  std::uint64_t seed = 7;
  TargetSamplerConfig sampler;
  double dynamics_decay = 0.9;
};

struct MetricsRow {
  long iteration = 0;
  double g_loss = 0.0;
  double d_loss = 0.0;
  double lr = 0.0;
  double val_ade = 0.0;
  double val_fde = 0.0;
};

struct TrainResult {
  model::ModelParams model;        // parameters after the last update
  ad::ParamMap best_params;        // snapshot at the best validation ADE
  std::vector<MetricsRow> log;
  double best_val_ade = 0.0;
  WindowConfig window;
};

// Alternating discriminator/generator updates over class-balanced augmented
// batches, with plateau learning-rate decay driven by held-out ADE and
// best-validation parameter retention.
TrainResult train(const TrainConfig& config, const std::vector<Scene>& corpus);

struct EvalConfig {
  std::uint64_t seed = 11;
  TargetSamplerConfig sampler;
  double dynamics_decay = 0.9;
  RansacConfig ransac;
};

// Single-draw prediction per scene with a fixed evaluation seed.
EvalReport evaluate(const model::ModelParams& model,
                    const std::vector<Scene>& corpus,
                    const EvalConfig& config);

// One prediction for one scene (absolute future positions).
std::vector<Vec2> predict_scene(const model::ModelParams& model,
                                const Scene& scene, const EvalConfig& config,
                                TargetPointSet* targets_out = nullptr);

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRow>& log);

// Stable corpus-independent per-scene stream id.
std::uint64_t scene_stream_id(std::uint64_t seed, const std::string& scene_id);

}  // namespace trajgan::train
