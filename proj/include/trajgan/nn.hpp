#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trajgan/rng.hpp"
#include "trajgan/tensor.hpp"

namespace trajgan::ad {

using ParamMap = std::vector<std::pair<std::string, Tensor>>;

// Fully connected layer, weights [out x in], bias [out].
struct Linear {
  Tensor weight;
  Tensor bias;

  Tensor apply(const Tensor& x) const;       // x: [in] -> [out]
  Tensor apply_rows(const Tensor& x) const;  // x: [n, in] -> [n, out]

  std::size_t in_dim() const { return weight.shape()[1]; }
  std::size_t out_dim() const { return weight.shape()[0]; }
  void append_params(ParamMap& out, const std::string& prefix) const;
};

// Weights drawn uniform in +-1/sqrt(in); biases zero.
Linear make_linear(std::size_t in, std::size_t out, Rng& rng);
Linear zero_linear(std::size_t in, std::size_t out);

// Single LSTM cell. Gate slices of the stacked [4H] pre-activation are
// ordered input, forget, cell, output. Forget-gate bias starts at 1.
struct LstmCell {
  Tensor w_input;      // [4H x D]
  Tensor w_recurrent;  // [4H x H]
  Tensor bias;         // [4H]

  std::size_t input_dim() const { return w_input.shape()[1]; }
  std::size_t hidden_dim() const { return w_recurrent.shape()[1]; }

  // One step: (x[D], h[H], c[H]) -> (h'[H], c'[H]).
  std::pair<Tensor, Tensor> step(const Tensor& x, const Tensor& h,
                                 const Tensor& c) const;

  // Runs over a sequence [T x D] from zero state, returns final hidden [H].
  Tensor run(const Tensor& sequence) const;

  void append_params(ParamMap& out, const std::string& prefix) const;
};

LstmCell make_lstm(std::size_t input, std::size_t hidden, Rng& rng);
LstmCell zero_lstm(std::size_t input, std::size_t hidden);

// Adam with bias correction. step() consumes and clears the gradients of
// every registered parameter; a parameter without a gradient is an error.
class Adam {
 public:
  Adam(std::vector<Tensor> params, double lr, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);

  void step();
  void zero_grad();
  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }
  long step_count() const { return step_; }

 private:
  std::vector<Tensor> params_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  double lr_, beta1_, beta2_, eps_;
  long step_ = 0;
};

}  // namespace trajgan::ad
