#include "trajgan/nn.hpp"

#include <cmath>

#include "trajgan/error.hpp"

namespace trajgan::ad {

namespace {

Tensor uniform_param(std::vector<std::size_t> shape, double bound, Rng& rng) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-bound, bound);
  return Tensor::leaf(std::move(shape), std::move(v), true);
}

}  // namespace

Tensor Linear::apply(const Tensor& x) const {
  return add(matmul(weight, x), bias);
}

Tensor Linear::apply_rows(const Tensor& x) const {
  return add_rowwise(matmul(x, transpose(weight)), bias);
}

void Linear::append_params(ParamMap& out, const std::string& prefix) const {
  out.emplace_back(prefix + "weight", weight);
  out.emplace_back(prefix + "bias", bias);
}

Linear make_linear(std::size_t in, std::size_t out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  return Linear{uniform_param({out, in}, bound, rng),
                Tensor::zeros({out}, true)};
}

Linear zero_linear(std::size_t in, std::size_t out) {
  return Linear{Tensor::zeros({out, in}, true), Tensor::zeros({out}, true)};
}

std::pair<Tensor, Tensor> LstmCell::step(const Tensor& x, const Tensor& h,
                                         const Tensor& c) const {
  const std::size_t hd = hidden_dim();
  if (x.rank() != 1 || x.numel() != input_dim()) {
    throw DimensionError("lstm_step: input size " + std::to_string(x.numel()) +
                         " != " + std::to_string(input_dim()));
  }
  if (h.numel() != hd || c.numel() != hd) {
    throw DimensionError("lstm_step: state size mismatch");
  }
  Tensor gates = add(add(matmul(w_input, x), matmul(w_recurrent, h)), bias);
  Tensor ig = sigmoid(slice(gates, 0, hd));
  Tensor fg = sigmoid(slice(gates, hd, hd));
  Tensor gg = tanh(slice(gates, 2 * hd, hd));
  Tensor og = sigmoid(slice(gates, 3 * hd, hd));
  Tensor c_next = add(mul(fg, c), mul(ig, gg));
  Tensor h_next = mul(og, tanh(c_next));
  return {h_next, c_next};
}

Tensor LstmCell::run(const Tensor& sequence) const {
  const std::size_t steps = sequence.shape()[0];
  Tensor h = Tensor::zeros({hidden_dim()});
  Tensor c = Tensor::zeros({hidden_dim()});
  for (std::size_t t = 0; t < steps; ++t) {
    auto [h2, c2] = step(row(sequence, t), h, c);
    h = h2;
    c = c2;
  }
  return h;
}

void LstmCell::append_params(ParamMap& out, const std::string& prefix) const {
  out.emplace_back(prefix + "w_input", w_input);
  out.emplace_back(prefix + "w_recurrent", w_recurrent);
  out.emplace_back(prefix + "bias", bias);
}

LstmCell make_lstm(std::size_t input, std::size_t hidden, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  LstmCell cell{uniform_param({4 * hidden, input}, bound, rng),
                uniform_param({4 * hidden, hidden}, bound, rng),
                Tensor::zeros({4 * hidden}, true)};
  auto& b = cell.bias.mutable_values();
  for (std::size_t i = hidden; i < 2 * hidden; ++i) b[i] = 1.0;
  return cell;
}

LstmCell zero_lstm(std::size_t input, std::size_t hidden) {
  return LstmCell{Tensor::zeros({4 * hidden, input}, true),
                  Tensor::zeros({4 * hidden, hidden}, true),
                  Tensor::zeros({4 * hidden}, true)};
}

Adam::Adam(std::vector<Tensor> params, double lr, double beta1, double beta2,
           double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2),
      eps_(eps) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p.numel(), 0.0);
    v_.emplace_back(p.numel(), 0.0);
  }
}

void Adam::step() {
  for (const auto& p : params_) {
    if (!p.has_grad()) {
      throw ContractError("adam: parameter missing gradient");
    }
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (std::size_t pi = 0; pi < params_.size(); ++pi) {
    auto& value = params_[pi].mutable_values();
    const auto& grad = params_[pi].grad();
    auto& m = m_[pi];
    auto& v = v_[pi];
    for (std::size_t i = 0; i < value.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * grad[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * grad[i] * grad[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      value[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
    params_[pi].clear_grad();
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.clear_grad();
}

}  // namespace trajgan::ad
