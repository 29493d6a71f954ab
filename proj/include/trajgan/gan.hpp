#pragma once

#include <utility>

#include "trajgan/nn.hpp"
#include "trajgan/social_encoder.hpp"
#include "trajgan/target_points.hpp"

namespace trajgan::model {

// Noise input z ~ N(0, I).
Tensor draw_noise(std::size_t dim, Rng& rng);

struct GeneratorParams {
  Linear tp_embed;     // 2 -> embed_dim, shared across target points
  Linear fuser;        // [tp_embed ++ social ++ z] -> hidden (initial state)
  LstmCell decoder;    // embed_dim -> hidden
  Linear delta_embed;  // 2 -> embed_dim, feeds back the previous output
  Linear head;         // hidden -> 2, per-frame displacement

  std::size_t hidden_dim() const { return decoder.hidden_dim(); }
  std::size_t z_dim() const {
    return fuser.in_dim() - tp_embed.out_dim() - hidden_dim();
  }
  void append_params(ParamMap& out, const std::string& prefix) const;
};

struct DiscriminatorParams {
  Linear embed;   // 2 -> embed_dim
  LstmCell cell;  // embed_dim -> hidden
  Linear head;    // hidden -> 1, sigmoid score

  void append_params(ParamMap& out, const std::string& prefix) const;
};

// Loss regularizers; adversarial term weighs heaviest, then the endpoint.
struct LossWeights {
  double gan = 1.4;
  double ade = 1.0;
  double fde = 1.5;

  bool operator==(const LossWeights&) const = default;
};

GeneratorParams make_generator(std::size_t embed_dim, std::size_t hidden_dim,
                               std::size_t z_dim, Rng& rng);
DiscriminatorParams make_discriminator(std::size_t embed_dim,
                                       std::size_t hidden_dim, Rng& rng);

// Decodes t_pred displacement steps autoregressively from the fused
// (physical, social, noise) condition and accumulates them onto the last
// observed position; returns absolute positions [t_pred x 2].
Tensor generate(const GeneratorParams& params, const TargetPointSet& targets,
                const Tensor& social_context, const Tensor& z, int t_pred);

// Score in (0,1) for a full observed+future trajectory [T x 2] in absolute
// coordinates; 1 means real. The sequence is differenced internally.
Tensor discriminate(const DiscriminatorParams& params, const Tensor& full_traj);

// gan * BCE(d_fake, 1) + ade * mean_t |y_hat - y|^2 + fde * |y_hat_T - y_T|^2.
Tensor generator_loss(const LossWeights& weights, const Tensor& d_fake,
                      const Tensor& y_hat, const Tensor& y);

// BCE(d_real, 1) + BCE(d_fake, 0); callers detach the fake trajectory.
Tensor discriminator_loss(const Tensor& d_real, const Tensor& d_fake);

// Fair-coin pick between the predicted and ground-truth future; returns the
// full observed+chosen trajectory and the true label (1 = real).
std::pair<Tensor, double> sample_discriminator_input(const Tensor& y_hat,
                                                     const Tensor& y,
                                                     const Tensor& obs,
                                                     Rng& rng);

// Whole pipeline parameter set.
struct ModelParams {
  EncoderParams encoder;
  GeneratorParams generator;
  DiscriminatorParams discriminator;

  // Generator-side parameters (encoder included) and discriminator-side
  // parameters; the two optimizers each own one side.
  std::vector<Tensor> generator_side() const;
  std::vector<Tensor> discriminator_side() const;
  ParamMap named_params() const;  // "gen/..." and "dis/..." namespaces
};

struct ModelDims {
  std::size_t embed_dim = 16;
  std::size_t hidden_dim = 32;
  std::size_t heads = 4;
  std::size_t z_dim = 8;

  bool operator==(const ModelDims&) const = default;
};

ModelParams make_model(const ModelDims& dims, Rng& rng);

// Leaf copies of every parameter, checkpoint-ready.
ParamMap snapshot_params(const ModelParams& model);

// Model checkpointing; the file also records the window and model dims as
// "meta/" entries so incompatible scenes are rejected on load.
void save_model(const std::string& path, const ModelParams& model,
                const WindowConfig& window);
struct LoadedModel {
  ModelParams model;
  ModelDims dims;
  WindowConfig window;
};
LoadedModel load_model(const std::string& path);

}  // namespace trajgan::model
