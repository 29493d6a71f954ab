#include "trajgan/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "trajgan/error.hpp"
#include "trajgan/log.hpp"

namespace trajgan::train {

void PlateauScheduler::observe(long iteration, double metric) {
  if (!has_best_) {
    // First report is the baseline; the window starts counting from zero.
    best_ = metric;
    has_best_ = true;
  } else if (metric < best_) {
    best_ = metric;
    anchor_ = iteration;
  }
  if (iteration - anchor_ >= config_.window) {
    lr_ *= config_.factor;
    anchor_ = iteration;
  }
}

std::uint64_t scene_stream_id(std::uint64_t seed, const std::string& scene_id) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;  // FNV-1a over the id
  for (unsigned char ch : scene_id) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

using model::Tensor;

Tensor observed_tensor(const Scene& scene) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(scene.t_obs) * 2);
  const auto& agent = scene.agent();
  for (int f = 0; f < scene.t_obs; ++f) {
    const Vec2 p = agent.at_frame_replicated(f);
    v.push_back(p.x);
    v.push_back(p.y);
  }
  return Tensor::leaf({static_cast<std::size_t>(scene.t_obs), 2}, std::move(v));
}

Tensor future_tensor(const Scene& scene) {
  const auto gt = ground_truth_future(scene);
  std::vector<double> v;
  v.reserve(gt.size() * 2);
  for (const auto& p : gt) {
    v.push_back(p.x);
    v.push_back(p.y);
  }
  return Tensor::leaf({gt.size(), 2}, std::move(v));
}

std::vector<Vec2> tensor_to_points(const Tensor& t) {
  std::vector<Vec2> out;
  out.reserve(t.shape()[0]);
  for (std::size_t i = 0; i < t.shape()[0]; ++i) {
    out.push_back({t.at(i, 0), t.at(i, 1)});
  }
  return out;
}

Tensor forward_prediction(const model::ModelParams& m, const Scene& scene,
                          const TargetSamplerConfig& sampler, double decay,
                          Rng& rng, TargetPointSet* targets_out) {
  const auto targets = extract_target_points(scene, sampler, decay, rng);
  if (targets_out) *targets_out = targets;
  const auto social = model::social_forward(m.encoder, scene);
  const Tensor z = model::draw_noise(m.generator.z_dim(), rng);
  return model::generate(m.generator, targets, social.target_context, z,
                         scene.t_pred);
}

struct ValMetrics {
  double ade = 0.0;
  double fde = 0.0;
};

ValMetrics validate(const model::ModelParams& m,
                    const std::vector<Scene>& corpus,
                    const std::vector<std::size_t>& indices,
                    const TrainConfig& config) {
  ValMetrics out;
  for (auto i : indices) {
    const Scene& scene = corpus[i];
    Rng rng(scene_stream_id(config.seed ^ 0xe7a1ULL, scene.scene_id));
    const Tensor y_hat = forward_prediction(m, scene, config.sampler,
                                            config.dynamics_decay, rng,
                                            nullptr);
    const auto gt = ground_truth_future(scene);
    const auto pred = tensor_to_points(y_hat);
    out.ade += ade(pred, gt);
    out.fde += fde(pred, gt);
  }
  const double n = static_cast<double>(indices.size());
  out.ade /= n;
  out.fde /= n;
  return out;
}

}  // namespace

TrainResult train(const TrainConfig& config, const std::vector<Scene>& corpus) {
  if (corpus.empty()) throw ConfigError("train: empty corpus");

  Rng master(config.seed);
  Rng init_rng = master.fork(1);
  Rng label_rng = master.fork(2);
  Rng split_rng = master.fork(3);
  Rng batch_rng = master.fork(4);

  TrainResult result;
  result.model = model::make_model(config.dims, init_rng);
  result.window = {corpus.front().t_obs, corpus.front().t_pred,
                   corpus.front().hz};

  std::vector<Curvature> labels;
  labels.reserve(corpus.size());
  for (const auto& scene : corpus) {
    labels.push_back(classify_curvature(scene.agent(), label_rng).label);
  }

  // Held-out split; tiny corpora validate on the full training set.
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[split_rng.uniform_int(i)]);
  }
  const std::size_t n_val =
      static_cast<std::size_t>(config.val_fraction *
                               static_cast<double>(corpus.size()));
  std::vector<std::size_t> val_idx, train_idx;
  if (n_val == 0) {
    train_idx = order;
    val_idx = order;
  } else {
    val_idx.assign(order.begin(), order.begin() + static_cast<long>(n_val));
    train_idx.assign(order.begin() + static_cast<long>(n_val), order.end());
  }
  std::vector<Curvature> train_labels;
  train_labels.reserve(train_idx.size());
  for (auto i : train_idx) train_labels.push_back(labels[i]);

  ad::Adam adam_g(result.model.generator_side(), config.lr);
  ad::Adam adam_d(result.model.discriminator_side(), config.lr);
  PlateauScheduler scheduler(config.lr, config.scheduler);

  result.best_val_ade = std::numeric_limits<double>::infinity();
  result.best_params = model::snapshot_params(result.model);

  long iteration = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::vector<std::size_t>> batches;
    if (config.class_balance) {
      batches = balanced_batches(train_labels, config.batch_size, batch_rng);
    } else {
      std::vector<std::size_t> shuffled(train_idx.size());
      for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i] = i;
      for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[batch_rng.uniform_int(i)]);
      }
      for (std::size_t b = 0; b < shuffled.size();
           b += static_cast<std::size_t>(config.batch_size)) {
        const auto end = std::min(shuffled.size(),
                                  b + static_cast<std::size_t>(
                                          config.batch_size));
        batches.emplace_back(shuffled.begin() + static_cast<long>(b),
                             shuffled.begin() + static_cast<long>(end));
      }
    }

    for (const auto& batch : batches) {
      ++iteration;
      try {
        adam_g.zero_grad();
        adam_d.zero_grad();

        struct Prepared {
          Tensor obs, gt, y_hat;
        };
        std::vector<Prepared> prepared;
        prepared.reserve(batch.size());
        for (auto local : batch) {
          const Scene& base = corpus[train_idx[local]];
          const Scene scene = config.augment_enabled
                                  ? augment(base, batch_rng, config.augment)
                                  : base;
          Prepared p;
          p.obs = observed_tensor(scene);
          p.gt = future_tensor(scene);
          p.y_hat = forward_prediction(result.model, scene, config.sampler,
                                       config.dynamics_decay, batch_rng,
                                       nullptr);
          prepared.push_back(std::move(p));
        }

        // Discriminator step on detached fakes.
        Tensor d_loss;
        for (const auto& p : prepared) {
          const Tensor d_real = model::discriminate(
              result.model.discriminator, ad::concat_rows({p.obs, p.gt}));
          const Tensor d_fake = model::discriminate(
              result.model.discriminator,
              ad::concat_rows({p.obs, p.y_hat.detach()}));
          const Tensor term = model::discriminator_loss(d_real, d_fake);
          d_loss = d_loss.defined() ? ad::add(d_loss, term) : term;
        }
        d_loss = ad::scale(d_loss, 1.0 / static_cast<double>(prepared.size()));
        ad::backward(d_loss);
        adam_d.step();

        // Generator step against the updated discriminator.
        Tensor g_loss;
        for (const auto& p : prepared) {
          const Tensor d_fake = model::discriminate(
              result.model.discriminator, ad::concat_rows({p.obs, p.y_hat}));
          const Tensor term = model::generator_loss(config.loss_weights,
                                                    d_fake, p.y_hat, p.gt);
          g_loss = g_loss.defined() ? ad::add(g_loss, term) : term;
        }
        g_loss = ad::scale(g_loss, 1.0 / static_cast<double>(prepared.size()));
        ad::backward(g_loss);
        // Gradients that leaked into discriminator leaves through the live
        // fake branch are discarded at the next batch's zero_grad.
        adam_g.step();

        if (iteration % config.eval_interval == 0) {
          const auto metrics =
              validate(result.model, corpus, val_idx, config);
          scheduler.observe(iteration, metrics.ade);
          adam_g.set_lr(scheduler.lr());
          adam_d.set_lr(scheduler.lr());
          result.log.push_back({iteration, g_loss.item(), d_loss.item(),
                                scheduler.lr(), metrics.ade, metrics.fde});
          if (metrics.ade < result.best_val_ade) {
            result.best_val_ade = metrics.ade;
            result.best_params = model::snapshot_params(result.model);
          }
          log_info("iter " + std::to_string(iteration) + " g_loss " +
                   format_double(g_loss.item()) + " d_loss " +
                   format_double(d_loss.item()) + " val_ade " +
                   format_double(metrics.ade));
        }
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at iteration " +
                           std::to_string(iteration));
      }
    }
  }

  if (result.log.empty()) {
    const auto metrics = validate(result.model, corpus, val_idx, config);
    result.best_val_ade = metrics.ade;
    result.best_params = model::snapshot_params(result.model);
    result.log.push_back({iteration, 0.0, 0.0, scheduler.lr(), metrics.ade,
                          metrics.fde});
  }
  return result;
}

EvalReport evaluate(const model::ModelParams& m,
                    const std::vector<Scene>& corpus,
                    const EvalConfig& config) {
  std::vector<EvalRow> rows;
  rows.reserve(corpus.size());
  for (const auto& scene : corpus) {
    Rng rng(scene_stream_id(config.seed, scene.scene_id));
    const Tensor y_hat = forward_prediction(m, scene, config.sampler,
                                            config.dynamics_decay, rng,
                                            nullptr);
    const auto pred = tensor_to_points(y_hat);
    const auto gt = ground_truth_future(scene);
    EvalRow row;
    row.scene_id = scene.scene_id;
    row.label = classify_curvature(scene.agent(), rng, config.ransac).label;
    row.ade = ade(pred, gt);
    row.fde = fde(pred, gt);
    rows.push_back(std::move(row));
  }
  return make_report(std::move(rows));
}

std::vector<Vec2> predict_scene(const model::ModelParams& m,
                                const Scene& scene, const EvalConfig& config,
                                TargetPointSet* targets_out) {
  Rng rng(scene_stream_id(config.seed, scene.scene_id));
  const Tensor y_hat = forward_prediction(m, scene, config.sampler,
                                          config.dynamics_decay, rng,
                                          targets_out);
  return tensor_to_points(y_hat);
}

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRow>& log) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open metrics log for writing: " + path);
  os << "iteration,g_loss,d_loss,lr,val_ade,val_fde\n";
  for (const auto& row : log) {
    os << row.iteration << ',' << format_double(row.g_loss) << ','
       << format_double(row.d_loss) << ',' << format_double(row.lr) << ','
       << format_double(row.val_ade) << ',' << format_double(row.val_fde)
       << '\n';
  }
  if (!os) throw DataError("write failed: " + path);
}

}  // namespace trajgan::train
