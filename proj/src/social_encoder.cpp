#include "trajgan/social_encoder.hpp"

#include <cmath>

#include "trajgan/error.hpp"

namespace trajgan::model {

void MhsaParams::append_params(ParamMap& out, const std::string& prefix) const {
  for (std::size_t h = 0; h < heads(); ++h) {
    const std::string head = prefix + "head" + std::to_string(h) + "/";
    out.emplace_back(head + "w_query", w_query[h]);
    out.emplace_back(head + "w_key", w_key[h]);
    out.emplace_back(head + "w_value", w_value[h]);
  }
  out.emplace_back(prefix + "w_out", w_out);
}

void EncoderParams::append_params(ParamMap& out,
                                  const std::string& prefix) const {
  embed.append_params(out, prefix + "embed/");
  cell.append_params(out, prefix + "lstm/");
  mhsa.append_params(out, prefix + "mhsa/");
}

EncoderParams make_encoder(std::size_t embed_dim, std::size_t hidden_dim,
                           std::size_t heads, Rng& rng) {
  if (heads == 0 || hidden_dim % heads != 0) {
    throw ConfigError("encoder: head count must divide the hidden dimension");
  }
  EncoderParams p;
  p.embed = ad::make_linear(2, embed_dim, rng);
  p.cell = ad::make_lstm(embed_dim, hidden_dim, rng);
  const std::size_t head_dim = hidden_dim / heads;
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  auto proj = [&] {
    std::vector<double> v(hidden_dim * head_dim);
    for (double& x : v) x = rng.uniform(-bound, bound);
    return Tensor::leaf({hidden_dim, head_dim}, std::move(v), true);
  };
  for (std::size_t h = 0; h < heads; ++h) {
    p.mhsa.w_query.push_back(proj());
    p.mhsa.w_key.push_back(proj());
    p.mhsa.w_value.push_back(proj());
  }
  std::vector<double> wo(hidden_dim * hidden_dim);
  for (double& x : wo) x = rng.uniform(-bound, bound);
  p.mhsa.w_out = Tensor::leaf({hidden_dim, hidden_dim}, std::move(wo), true);
  return p;
}

Tensor encode_motion(const EncoderParams& params,
                     const std::vector<DisplacementTrack>& tracks) {
  if (tracks.empty()) {
    throw DimensionError("encode_motion: no tracks");
  }
  const std::size_t steps = tracks.front().deltas.size();
  std::vector<Tensor> rows;
  rows.reserve(tracks.size());
  for (const auto& track : tracks) {
    if (track.deltas.size() != steps) {
      throw DimensionError("encode_motion: tracks must share observed length");
    }
    Tensor h = Tensor::zeros({params.hidden_dim()});
    Tensor c = Tensor::zeros({params.hidden_dim()});
    for (const auto& d : track.deltas) {
      const Tensor x =
          ad::tanh(params.embed.apply(Tensor::leaf({2}, {d.x, d.y})));
      auto [h2, c2] = params.cell.step(x, h, c);
      h = h2;
      c = c2;
    }
    rows.push_back(h);
  }
  return ad::stack_rows(rows);
}

SocialContext mhsa(const EncoderParams& params, const Tensor& hidden,
                   std::size_t target_row) {
  const std::size_t head_dim = params.mhsa.w_query.front().shape()[1];
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(head_dim));

  std::vector<Tensor> head_outputs;
  Tensor attn_sum;
  for (std::size_t h = 0; h < params.mhsa.heads(); ++h) {
    const Tensor q = ad::matmul(hidden, params.mhsa.w_query[h]);
    const Tensor k = ad::matmul(hidden, params.mhsa.w_key[h]);
    const Tensor v = ad::matmul(hidden, params.mhsa.w_value[h]);
    const Tensor scores =
        ad::scale(ad::matmul(q, ad::transpose(k)), inv_sqrt_d);
    const Tensor weights = ad::softmax(scores);
    head_outputs.push_back(ad::matmul(weights, v));
    attn_sum = h == 0 ? weights : ad::add(attn_sum, weights);
  }
  const Tensor merged = ad::matmul(ad::concat_cols(head_outputs),
                                   params.mhsa.w_out);
  SocialContext out;
  out.per_agent = ad::add(merged, hidden);
  out.target_context = ad::row(out.per_agent, target_row);
  out.attention =
      ad::scale(attn_sum, 1.0 / static_cast<double>(params.mhsa.heads()));
  out.target_row = target_row;
  return out;
}

SocialContext social_forward(const EncoderParams& params, const Scene& scene) {
  std::vector<DisplacementTrack> tracks;
  std::size_t target_row = 0;
  for (const auto& track : scene.tracks) {
    if (track.observed_count(scene.t_obs) < 2) continue;
    if (track.role == Role::kAgent) target_row = tracks.size();
    tracks.push_back(to_displacements(track, 0, scene.t_obs));
  }
  const Tensor hidden = encode_motion(params, tracks);
  return mhsa(params, hidden, target_row);
}

}  // namespace trajgan::model
