#include "trajgan/gan.hpp"

#include "trajgan/checkpoint.hpp"
#include "trajgan/error.hpp"

namespace trajgan::model {

Tensor draw_noise(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.normal();
  return Tensor::leaf({dim}, std::move(v));
}

void GeneratorParams::append_params(ParamMap& out,
                                    const std::string& prefix) const {
  tp_embed.append_params(out, prefix + "tp_embed/");
  fuser.append_params(out, prefix + "fuser/");
  decoder.append_params(out, prefix + "decoder/");
  delta_embed.append_params(out, prefix + "delta_embed/");
  head.append_params(out, prefix + "head/");
}

void DiscriminatorParams::append_params(ParamMap& out,
                                        const std::string& prefix) const {
  embed.append_params(out, prefix + "embed/");
  cell.append_params(out, prefix + "lstm/");
  head.append_params(out, prefix + "head/");
}

GeneratorParams make_generator(std::size_t embed_dim, std::size_t hidden_dim,
                               std::size_t z_dim, Rng& rng) {
  GeneratorParams p;
  p.tp_embed = ad::make_linear(2, embed_dim, rng);
  p.fuser = ad::make_linear(embed_dim + hidden_dim + z_dim, hidden_dim, rng);
  p.decoder = ad::make_lstm(embed_dim, hidden_dim, rng);
  p.delta_embed = ad::make_linear(2, embed_dim, rng);
  p.head = ad::make_linear(hidden_dim, 2, rng);
  return p;
}

DiscriminatorParams make_discriminator(std::size_t embed_dim,
                                       std::size_t hidden_dim, Rng& rng) {
  DiscriminatorParams p;
  p.embed = ad::make_linear(2, embed_dim, rng);
  p.cell = ad::make_lstm(embed_dim, hidden_dim, rng);
  p.head = ad::make_linear(hidden_dim, 1, rng);
  return p;
}

Tensor generate(const GeneratorParams& params, const TargetPointSet& targets,
                const Tensor& social_context, const Tensor& z, int t_pred) {
  if (t_pred <= 0) {
    throw DimensionError("generate: prediction horizon must be positive");
  }
  // Physical context: shared embedding of the local goal points, mean-pooled
  // so the conditioning is invariant to their order.
  std::vector<double> tp_values;
  tp_values.reserve(targets.local_points.size() * 2);
  for (const auto& p : targets.local_points) {
    tp_values.push_back(p.x);
    tp_values.push_back(p.y);
  }
  const Tensor tp = Tensor::leaf({targets.local_points.size(), 2},
                                 std::move(tp_values));
  const Tensor c_ph =
      ad::mean_rows(ad::tanh(params.tp_embed.apply_rows(tp)));

  const Tensor condition = ad::concat({c_ph, social_context, z});
  Tensor h = ad::tanh(params.fuser.apply(condition));
  Tensor c = Tensor::zeros({params.hidden_dim()});

  Tensor prev_delta = Tensor::zeros({2});
  std::vector<Tensor> deltas;
  deltas.reserve(static_cast<std::size_t>(t_pred));
  for (int t = 0; t < t_pred; ++t) {
    const Tensor x = ad::tanh(params.delta_embed.apply(prev_delta));
    auto [h2, c2] = params.decoder.step(x, h, c);
    h = h2;
    c = c2;
    prev_delta = params.head.apply(h);
    deltas.push_back(prev_delta);
  }

  std::vector<double> origin_rows;
  origin_rows.reserve(static_cast<std::size_t>(t_pred) * 2);
  for (int t = 0; t < t_pred; ++t) {
    origin_rows.push_back(targets.origin.x);
    origin_rows.push_back(targets.origin.y);
  }
  const Tensor origin = Tensor::leaf({static_cast<std::size_t>(t_pred), 2},
                                     std::move(origin_rows));
  return ad::add(ad::cumsum_rows(ad::stack_rows(deltas)), origin);
}

Tensor discriminate(const DiscriminatorParams& params,
                    const Tensor& full_traj) {
  if (full_traj.rank() != 2 || full_traj.shape()[1] != 2 ||
      full_traj.shape()[0] < 2) {
    throw DimensionError("discriminate: expected [T x 2] with T >= 2");
  }
  const std::size_t t = full_traj.shape()[0];
  const Tensor deltas = ad::sub(ad::slice_rows(full_traj, 1, t - 1),
                                ad::slice_rows(full_traj, 0, t - 1));
  const Tensor embedded = ad::tanh(params.embed.apply_rows(deltas));
  const Tensor h = params.cell.run(embedded);
  return ad::sigmoid(params.head.apply(h));
}

Tensor generator_loss(const LossWeights& weights, const Tensor& d_fake,
                      const Tensor& y_hat, const Tensor& y) {
  if (y_hat.shape() != y.shape()) {
    throw DimensionError("generator_loss: trajectory shape mismatch");
  }
  const std::size_t t = y_hat.shape()[0];
  const Tensor diff = ad::sub(y_hat, y);
  const Tensor ade_term =
      ad::scale(ad::sum(ad::mul(diff, diff)), 1.0 / static_cast<double>(t));
  const Tensor last = ad::row(diff, t - 1);
  const Tensor fde_term = ad::sum(ad::mul(last, last));
  // Non-saturating adversarial term: -log D(fake).
  const Tensor adv = ad::bce(d_fake, 1.0);
  return ad::add(ad::scale(adv, weights.gan),
                 ad::add(ad::scale(ade_term, weights.ade),
                         ad::scale(fde_term, weights.fde)));
}

Tensor discriminator_loss(const Tensor& d_real, const Tensor& d_fake) {
  return ad::add(ad::bce(d_real, 1.0), ad::bce(d_fake, 0.0));
}

std::pair<Tensor, double> sample_discriminator_input(const Tensor& y_hat,
                                                     const Tensor& y,
                                                     const Tensor& obs,
                                                     Rng& rng) {
  const bool real = rng.bernoulli(0.5);
  return {ad::concat_rows({obs, real ? y : y_hat}), real ? 1.0 : 0.0};
}

std::vector<Tensor> ModelParams::generator_side() const {
  ParamMap named;
  encoder.append_params(named, "");
  generator.append_params(named, "");
  std::vector<Tensor> out;
  out.reserve(named.size());
  for (auto& [_, t] : named) out.push_back(t);
  return out;
}

std::vector<Tensor> ModelParams::discriminator_side() const {
  ParamMap named;
  discriminator.append_params(named, "");
  std::vector<Tensor> out;
  out.reserve(named.size());
  for (auto& [_, t] : named) out.push_back(t);
  return out;
}

ParamMap ModelParams::named_params() const {
  ParamMap out;
  encoder.append_params(out, "gen/encoder/");
  generator.append_params(out, "gen/");
  discriminator.append_params(out, "dis/");
  return out;
}

ModelParams make_model(const ModelDims& dims, Rng& rng) {
  ModelParams p;
  p.encoder = make_encoder(dims.embed_dim, dims.hidden_dim, dims.heads, rng);
  p.generator =
      make_generator(dims.embed_dim, dims.hidden_dim, dims.z_dim, rng);
  p.discriminator = make_discriminator(dims.embed_dim, dims.hidden_dim, rng);
  return p;
}

ParamMap snapshot_params(const ModelParams& model) {
  ParamMap named = model.named_params();
  ParamMap out;
  out.reserve(named.size());
  for (const auto& [name, t] : named) out.emplace_back(name, t.detach());
  return out;
}

void save_model(const std::string& path, const ModelParams& model,
                const WindowConfig& window) {
  ParamMap params = model.named_params();
  params.emplace_back(
      "meta/window",
      Tensor::leaf({3}, {static_cast<double>(window.t_obs),
                         static_cast<double>(window.t_pred), window.hz}));
  params.emplace_back(
      "meta/dims",
      Tensor::leaf({4}, {static_cast<double>(model.encoder.embed.out_dim()),
                         static_cast<double>(model.encoder.hidden_dim()),
                         static_cast<double>(model.encoder.mhsa.heads()),
                         static_cast<double>(model.generator.z_dim())}));
  ad::save_checkpoint(path, params);
}

LoadedModel load_model(const std::string& path) {
  ParamMap loaded = ad::load_checkpoint(path);
  LoadedModel out;
  ParamMap weights;
  bool have_window = false, have_dims = false;
  for (const auto& [name, t] : loaded) {
    if (name == "meta/window") {
      out.window.t_obs = static_cast<int>(t[0]);
      out.window.t_pred = static_cast<int>(t[1]);
      out.window.hz = t[2];
      have_window = true;
    } else if (name == "meta/dims") {
      out.dims.embed_dim = static_cast<std::size_t>(t[0]);
      out.dims.hidden_dim = static_cast<std::size_t>(t[1]);
      out.dims.heads = static_cast<std::size_t>(t[2]);
      out.dims.z_dim = static_cast<std::size_t>(t[3]);
      have_dims = true;
    } else {
      weights.emplace_back(name, t);
    }
  }
  if (!have_window || !have_dims) {
    throw DataError("checkpoint missing meta records: " + path);
  }
  Rng rng(0);
  out.model = make_model(out.dims, rng);
  ad::assign_params(out.model.named_params(), weights);
  return out;
}

}  // namespace trajgan::model
