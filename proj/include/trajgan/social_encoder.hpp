#pragma once

#include <vector>

#include "trajgan/nn.hpp"
#include "trajgan/preprocess.hpp"
#include "trajgan/scene.hpp"

namespace trajgan::model {

using ad::Linear;
using ad::LstmCell;
using ad::ParamMap;
using ad::Tensor;

// Multi-head self-attention over agent encodings: per-head query/key/value
// projections (no bias), scaled dot-product with row softmax, concatenated
// heads through an output projection, plus a residual connection.
struct MhsaParams {
  std::vector<Tensor> w_query;  // per head [model_dim x head_dim]
  std::vector<Tensor> w_key;
  std::vector<Tensor> w_value;
  Tensor w_out;                 // [model_dim x model_dim]

  std::size_t heads() const { return w_query.size(); }
  void append_params(ParamMap& out, const std::string& prefix) const;
};

struct EncoderParams {
  Linear embed;       // 2 -> embed_dim, tanh
  LstmCell cell;      // embed_dim -> hidden_dim
  MhsaParams mhsa;

  std::size_t hidden_dim() const { return cell.hidden_dim(); }
  void append_params(ParamMap& out, const std::string& prefix) const;
};

EncoderParams make_encoder(std::size_t embed_dim, std::size_t hidden_dim,
                           std::size_t heads, Rng& rng);

// Social context: one row per encoded agent, plus the target agent's row.
struct SocialContext {
  Tensor per_agent;       // [N x hidden]
  Tensor target_context;  // [hidden]
  Tensor attention;       // [N x N] averaged over heads, diagnostics only
  std::size_t target_row = 0;
};

// Per-agent motion encoding: each displacement is embedded (tanh MLP) and
// run through the LSTM; the final hidden state is the agent's row.
Tensor encode_motion(const EncoderParams& params,
                     const std::vector<DisplacementTrack>& tracks);

SocialContext mhsa(const EncoderParams& params, const Tensor& hidden,
                   std::size_t target_row);

// to_displacements -> encode_motion -> mhsa over every agent observed for
// at least two frames. Agents with fewer observations carry no displacement
// and are skipped.
SocialContext social_forward(const EncoderParams& params, const Scene& scene);

}  // namespace trajgan::model
