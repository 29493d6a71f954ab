#include "trajgan/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "trajgan/error.hpp"

namespace trajgan::ad {

namespace {

thread_local std::uint64_t g_next_seq = 1;

std::string shape_str(const std::vector<std::size_t>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

std::size_t numel_of(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

void check_finite(const std::vector<double>& v, const char* op) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw NumericError(std::string(op) + ": non-finite output");
    }
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
}

// Grad buffer of t, allocated on demand. Only needs-grad tensors accumulate.
std::vector<double>* grad_of(const std::shared_ptr<TensorData>& t) {
  if (!t->needs_grad) return nullptr;
  if (t->grad.empty()) t->grad.assign(t->value.size(), 0.0);
  return &t->grad;
}

// Rows/cols of a 2-D tensor; vectors are treated as a single row where noted.
std::pair<std::size_t, std::size_t> dims2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected rank-2 tensor, got " +
                         shape_str(t.shape()));
  }
  return {t.shape()[0], t.shape()[1]};
}

}  // namespace

Tensor Tensor::leaf(std::vector<std::size_t> shape, std::vector<double> value,
                    bool requires_grad) {
  if (numel_of(shape) != value.size()) {
    throw DimensionError("leaf: shape " + shape_str(shape) + " expects " +
                         std::to_string(numel_of(shape)) + " values, got " +
                         std::to_string(value.size()));
  }
  auto d = std::make_shared<TensorData>();
  d->shape = std::move(shape);
  d->value = std::move(value);
  d->needs_grad = requires_grad;
  return Tensor(std::move(d));
}

Tensor Tensor::zeros(std::vector<std::size_t> shape, bool requires_grad) {
  std::vector<double> v(numel_of(shape), 0.0);
  return leaf(std::move(shape), std::move(v), requires_grad);
}

Tensor Tensor::scalar(double v) { return leaf({1}, {v}); }

double Tensor::at(std::size_t r, std::size_t c) const {
  return data_->value[r * data_->shape[1] + c];
}

double Tensor::item() const {
  if (!is_scalar()) {
    throw ContractError("item: tensor is not scalar, shape " +
                        shape_str(shape()));
  }
  return data_->value[0];
}

const std::vector<double>& Tensor::grad() const {
  if (data_->grad.empty()) {
    throw ContractError("grad: no gradient populated");
  }
  return data_->grad;
}

Tensor Tensor::detach() const {
  return leaf(data_->shape, data_->value, false);
}

std::uint64_t Tensor::tape_id() const {
  return data_->node ? data_->node->seq : 0;
}

Tensor make_op(const char* op, std::vector<std::size_t> shape,
               std::vector<double> value, std::vector<Tensor> parents,
               std::function<void(const TensorData&)> backward_fn) {
  check_finite(value, op);
  if (numel_of(shape) != value.size()) {
    throw ContractError(std::string(op) + ": result shape " +
                        shape_str(shape) + " does not match " +
                        std::to_string(value.size()) + " values");
  }
  auto d = std::make_shared<TensorData>();
  d->shape = std::move(shape);
  d->value = std::move(value);
  bool needs = false;
  for (const auto& p : parents) needs |= p.needs_grad();
  d->needs_grad = needs;
  if (needs) {
    auto node = std::make_shared<TapeNode>();
    node->op = op;
    node->seq = g_next_seq++;
    node->out = d;
    node->parents.reserve(parents.size());
    for (auto& p : parents) node->parents.push_back(p.ptr());
    node->backward = std::move(backward_fn);
    d->node = std::move(node);
  }
  return Tensor(std::move(d));
}

void backward(const Tensor& loss) {
  if (!loss.defined() || !loss.is_scalar()) {
    throw ContractError("backward: loss must be a defined scalar tensor");
  }
  auto root = loss.ptr();
  if (!root->node) return;  // constant loss: nothing reachable
  if (root->node->consumed) {
    throw ContractError("backward: tape already consumed");
  }

  // Iterative reachability sweep; graphs get deep (long LSTM chains).
  std::vector<std::shared_ptr<TapeNode>> order;
  std::unordered_set<TapeNode*> seen;
  std::vector<std::shared_ptr<TapeNode>> stack{root->node};
  seen.insert(root->node.get());
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    order.push_back(n);
    for (const auto& p : n->parents) {
      if (p->node && !p->node->consumed && seen.insert(p->node.get()).second) {
        stack.push_back(p->node);
      }
    }
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a->seq > b->seq; });

  root->grad.assign(1, 1.0);
  for (auto& n : order) {
    // The output data is kept alive by its consumers' parent lists, so the
    // graph must not be released until every closure has run.
    auto out = n->out.lock();
    if (out && !out->grad.empty()) {
      n->backward(*out);
    }
  }
  for (auto& n : order) {
    n->consumed = true;
    n->backward = nullptr;
    n->parents.clear();
  }
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<double> v(a.numel());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  auto pa = a.ptr(), pb = b.ptr();
  return make_op("add", a.shape(), std::move(v), {a, b},
                 [pa, pb](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[i] += out.grad[i];
                   if (auto* g = grad_of(pb))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[i] += out.grad[i];
                 });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  std::vector<double> v(a.numel());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  auto pa = a.ptr(), pb = b.ptr();
  return make_op("sub", a.shape(), std::move(v), {a, b},
                 [pa, pb](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[i] += out.grad[i];
                   if (auto* g = grad_of(pb))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[i] -= out.grad[i];
                 });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<double> v(a.numel());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  auto pa = a.ptr(), pb = b.ptr();
  return make_op("mul", a.shape(), std::move(v), {a, b},
                 [pa, pb](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[i] += out.grad[i] * pb->value[i];
                   if (auto* g = grad_of(pb))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[i] += out.grad[i] * pa->value[i];
                 });
}

Tensor scale(const Tensor& a, double s) {
  std::vector<double> v(a.numel());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * s;
  auto pa = a.ptr();
  return make_op("scale", a.shape(), std::move(v), {a},
                 [pa, s](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[i] += out.grad[i] * s;
                 });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  auto [m, k] = dims2(a, "matmul");
  const bool vec = b.rank() == 1;
  const std::size_t bk = vec ? b.shape()[0] : b.shape()[0];
  const std::size_t n = vec ? 1 : b.shape()[1];
  if (bk != k) {
    throw DimensionError("matmul: inner dimensions disagree, " +
                         shape_str(a.shape()) + " x " + shape_str(b.shape()));
  }
  std::vector<double> v(m * n, 0.0);
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        v[i * n + j] += aip * bv[p * n + j];
      }
    }
  }
  std::vector<std::size_t> out_shape =
      vec ? std::vector<std::size_t>{m} : std::vector<std::size_t>{m, n};
  auto pa = a.ptr(), pb = b.ptr();
  return make_op(
      "matmul", std::move(out_shape), std::move(v), {a, b},
      [pa, pb, m, k, n](const TensorData& out) {
        // dA = dOut * B^T ; dB = A^T * dOut
        if (auto* ga = grad_of(pa)) {
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
              const double go = out.grad[i * n + j];
              if (go == 0.0) continue;
              for (std::size_t p = 0; p < k; ++p)
                (*ga)[i * k + p] += go * pb->value[p * n + j];
            }
        }
        if (auto* gb = grad_of(pb)) {
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t p = 0; p < k; ++p) {
              const double av = pa->value[i * k + p];
              if (av == 0.0) continue;
              for (std::size_t j = 0; j < n; ++j)
                (*gb)[p * n + j] += av * out.grad[i * n + j];
            }
        }
      });
}

Tensor transpose(const Tensor& a) {
  auto [m, n] = dims2(a, "transpose");
  std::vector<double> v(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) v[j * m + i] = a.values()[i * n + j];
  auto pa = a.ptr();
  return make_op("transpose", {n, m}, std::move(v), {a},
                 [pa, m, n](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < m; ++i)
                       for (std::size_t j = 0; j < n; ++j)
                         (*g)[i * n + j] += out.grad[j * m + i];
                 });
}

Tensor tanh(const Tensor& a) {
  std::vector<double> v(a.numel());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::tanh(a[i]);
  auto pa = a.ptr();
  return make_op("tanh", a.shape(), std::move(v), {a},
                 [pa](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i) {
                       const double y = out.value[i];
                       (*g)[i] += out.grad[i] * (1.0 - y * y);
                     }
                 });
}

Tensor sigmoid(const Tensor& a) {
  std::vector<double> v(a.numel());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = a[i];
    v[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                    : std::exp(x) / (1.0 + std::exp(x));
  }
  auto pa = a.ptr();
  return make_op("sigmoid", a.shape(), std::move(v), {a},
                 [pa](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i) {
                       const double y = out.value[i];
                       (*g)[i] += out.grad[i] * y * (1.0 - y);
                     }
                 });
}

Tensor softmax(const Tensor& a) {
  if (a.rank() != 1 && a.rank() != 2) {
    throw DimensionError("softmax: expected rank 1 or 2, got " +
                         shape_str(a.shape()));
  }
  const std::size_t cols = a.shape().back();
  const std::size_t rows = a.numel() / cols;
  std::vector<double> v(a.numel());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = a.values().data() + r * cols;
    double* y = v.data() + r * cols;
    double mx = x[0];
    for (std::size_t j = 1; j < cols; ++j) mx = std::max(mx, x[j]);
    double z = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      y[j] = std::exp(x[j] - mx);
      z += y[j];
    }
    for (std::size_t j = 0; j < cols; ++j) y[j] /= z;
  }
  auto pa = a.ptr();
  return make_op(
      "softmax", a.shape(), std::move(v), {a},
      [pa, rows, cols](const TensorData& out) {
        if (auto* g = grad_of(pa)) {
          for (std::size_t r = 0; r < rows; ++r) {
            const double* y = out.value.data() + r * cols;
            const double* go = out.grad.data() + r * cols;
            double dot = 0.0;
            for (std::size_t j = 0; j < cols; ++j) dot += go[j] * y[j];
            for (std::size_t j = 0; j < cols; ++j)
              (*g)[r * cols + j] += y[j] * (go[j] - dot);
          }
        }
      });
}

Tensor concat(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw DimensionError("concat: no inputs");
  std::vector<double> v;
  std::vector<std::size_t> offsets;
  for (const auto& p : parts) {
    if (p.rank() != 1)
      throw DimensionError("concat: expected rank-1 parts, got " +
                           shape_str(p.shape()));
    offsets.push_back(v.size());
    v.insert(v.end(), p.values().begin(), p.values().end());
  }
  std::vector<std::shared_ptr<TensorData>> ps;
  for (const auto& p : parts) ps.push_back(p.ptr());
  const std::size_t total = v.size();
  return make_op("concat", {total}, std::move(v), parts,
                 [ps, offsets](const TensorData& out) {
                   for (std::size_t pi = 0; pi < ps.size(); ++pi) {
                     if (auto* g = grad_of(ps[pi]))
                       for (std::size_t i = 0; i < g->size(); ++i)
                         (*g)[i] += out.grad[offsets[pi] + i];
                   }
                 });
}

Tensor slice(const Tensor& a, std::size_t begin, std::size_t len) {
  if (a.rank() != 1 || begin + len > a.numel()) {
    throw DimensionError("slice: range [" + std::to_string(begin) + "," +
                         std::to_string(begin + len) + ") out of " +
                         shape_str(a.shape()));
  }
  std::vector<double> v(a.values().begin() + begin,
                        a.values().begin() + begin + len);
  auto pa = a.ptr();
  return make_op("slice", {len}, std::move(v), {a},
                 [pa, begin](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[begin + i] += out.grad[i];
                 });
}

Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t len) {
  auto [n, c] = dims2(a, "slice_rows");
  if (begin + len > n) {
    throw DimensionError("slice_rows: row range out of bounds");
  }
  std::vector<double> v(a.values().begin() + begin * c,
                        a.values().begin() + (begin + len) * c);
  auto pa = a.ptr();
  return make_op("slice_rows", {len, c}, std::move(v), {a},
                 [pa, begin, c](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[begin * c + i] += out.grad[i];
                 });
}

Tensor row(const Tensor& a, std::size_t i) {
  auto [n, c] = dims2(a, "row");
  if (i >= n) throw DimensionError("row: index out of bounds");
  std::vector<double> v(a.values().begin() + i * c,
                        a.values().begin() + (i + 1) * c);
  auto pa = a.ptr();
  return make_op("row", {c}, std::move(v), {a},
                 [pa, i, c](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t j = 0; j < c; ++j)
                       (*g)[i * c + j] += out.grad[j];
                 });
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw DimensionError("concat_rows: no inputs");
  const std::size_t c = parts.front().shape().back();
  std::vector<double> v;
  std::size_t rows = 0;
  for (const auto& p : parts) {
    auto [pn, pc] = dims2(p, "concat_rows");
    if (pc != c) throw DimensionError("concat_rows: column count mismatch");
    rows += pn;
    v.insert(v.end(), p.values().begin(), p.values().end());
  }
  std::vector<std::shared_ptr<TensorData>> ps;
  for (const auto& p : parts) ps.push_back(p.ptr());
  return make_op("concat_rows", {rows, c}, std::move(v), parts,
                 [ps](const TensorData& out) {
                   std::size_t off = 0;
                   for (const auto& p : ps) {
                     if (auto* g = grad_of(p))
                       for (std::size_t i = 0; i < g->size(); ++i)
                         (*g)[i] += out.grad[off + i];
                     off += p->value.size();
                   }
                 });
}

Tensor stack_rows(const std::vector<Tensor>& rows) {
  if (rows.empty()) throw DimensionError("stack_rows: no inputs");
  const std::size_t c = rows.front().numel();
  std::vector<double> v;
  for (const auto& r : rows) {
    if (r.rank() != 1 || r.numel() != c)
      throw DimensionError("stack_rows: rows must share length");
    v.insert(v.end(), r.values().begin(), r.values().end());
  }
  std::vector<std::shared_ptr<TensorData>> ps;
  for (const auto& r : rows) ps.push_back(r.ptr());
  return make_op("stack_rows", {rows.size(), c}, std::move(v), rows,
                 [ps, c](const TensorData& out) {
                   for (std::size_t ri = 0; ri < ps.size(); ++ri) {
                     if (auto* g = grad_of(ps[ri]))
                       for (std::size_t j = 0; j < c; ++j)
                         (*g)[j] += out.grad[ri * c + j];
                   }
                 });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const std::size_t n = parts.front().shape()[0];
  std::size_t total = 0;
  std::vector<std::size_t> widths;
  for (const auto& p : parts) {
    auto [pn, pc] = dims2(p, "concat_cols");
    if (pn != n) throw DimensionError("concat_cols: row count mismatch");
    widths.push_back(pc);
    total += pc;
  }
  std::vector<double> v(n * total);
  std::size_t off = 0;
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    const auto& pv = parts[pi].values();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < widths[pi]; ++j)
        v[i * total + off + j] = pv[i * widths[pi] + j];
    off += widths[pi];
  }
  std::vector<std::shared_ptr<TensorData>> ps;
  for (const auto& p : parts) ps.push_back(p.ptr());
  return make_op("concat_cols", {n, total}, std::move(v), parts,
                 [ps, widths, n, total](const TensorData& out) {
                   std::size_t off2 = 0;
                   for (std::size_t pi = 0; pi < ps.size(); ++pi) {
                     if (auto* g = grad_of(ps[pi]))
                       for (std::size_t i = 0; i < n; ++i)
                         for (std::size_t j = 0; j < widths[pi]; ++j)
                           (*g)[i * widths[pi] + j] +=
                               out.grad[i * total + off2 + j];
                     off2 += widths[pi];
                   }
                 });
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double x : a.values()) s += x;
  auto pa = a.ptr();
  return make_op("sum", {1}, {s}, {a}, [pa](const TensorData& out) {
    if (auto* g = grad_of(pa))
      for (double& gi : *g) gi += out.grad[0];
  });
}

Tensor mean(const Tensor& a) {
  double s = 0.0;
  for (double x : a.values()) s += x;
  const double inv = 1.0 / static_cast<double>(a.numel());
  auto pa = a.ptr();
  return make_op("mean", {1}, {s * inv}, {a}, [pa, inv](const TensorData& out) {
    if (auto* g = grad_of(pa))
      for (double& gi : *g) gi += out.grad[0] * inv;
  });
}

Tensor mean_rows(const Tensor& a) {
  auto [n, c] = dims2(a, "mean_rows");
  std::vector<double> v(c, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < c; ++j) v[j] += a.values()[i * c + j];
  const double inv = 1.0 / static_cast<double>(n);
  for (double& x : v) x *= inv;
  auto pa = a.ptr();
  return make_op("mean_rows", {c}, std::move(v), {a},
                 [pa, n, c, inv](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < n; ++i)
                       for (std::size_t j = 0; j < c; ++j)
                         (*g)[i * c + j] += out.grad[j] * inv;
                 });
}

Tensor cumsum_rows(const Tensor& a) {
  auto [n, c] = dims2(a, "cumsum_rows");
  std::vector<double> v(a.values());
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < c; ++j) v[i * c + j] += v[(i - 1) * c + j];
  auto pa = a.ptr();
  return make_op("cumsum_rows", {n, c}, std::move(v), {a},
                 [pa, n, c](const TensorData& out) {
                   if (auto* g = grad_of(pa)) {
                     // d x_s = sum of output grads at rows >= s
                     std::vector<double> suffix(c, 0.0);
                     for (std::size_t i = n; i-- > 0;) {
                       for (std::size_t j = 0; j < c; ++j) {
                         suffix[j] += out.grad[i * c + j];
                         (*g)[i * c + j] += suffix[j];
                       }
                     }
                   }
                 });
}

Tensor add_rowwise(const Tensor& a, const Tensor& b) {
  auto [n, c] = dims2(a, "add_rowwise");
  if (b.rank() != 1 || b.numel() != c) {
    throw DimensionError("add_rowwise: bias shape " + shape_str(b.shape()) +
                         " does not match columns of " + shape_str(a.shape()));
  }
  std::vector<double> v(a.numel());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < c; ++j)
      v[i * c + j] = a.values()[i * c + j] + b[j];
  auto pa = a.ptr(), pb = b.ptr();
  return make_op("add_rowwise", {n, c}, std::move(v), {a, b},
                 [pa, pb, n, c](const TensorData& out) {
                   if (auto* g = grad_of(pa))
                     for (std::size_t i = 0; i < out.grad.size(); ++i)
                       (*g)[i] += out.grad[i];
                   if (auto* g = grad_of(pb))
                     for (std::size_t i = 0; i < n; ++i)
                       for (std::size_t j = 0; j < c; ++j)
                         (*g)[j] += out.grad[i * c + j];
                 });
}

Tensor squared_error(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "squared_error");
  double s = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  auto pa = a.ptr(), pb = b.ptr();
  return make_op("squared_error", {1}, {s}, {a, b},
                 [pa, pb](const TensorData& out) {
                   const double go = out.grad[0];
                   auto* ga = grad_of(pa);
                   auto* gb = grad_of(pb);
                   for (std::size_t i = 0; i < pa->value.size(); ++i) {
                     const double d = 2.0 * (pa->value[i] - pb->value[i]) * go;
                     if (ga) (*ga)[i] += d;
                     if (gb) (*gb)[i] -= d;
                   }
                 });
}

Tensor bce(const Tensor& p, double target) {
  if (!p.is_scalar()) {
    throw DimensionError("bce: probability must be scalar");
  }
  constexpr double kEps = 1e-12;
  const double q = std::clamp(p.item(), kEps, 1.0 - kEps);
  const double v = -(target * std::log(q) + (1.0 - target) * std::log(1.0 - q));
  auto pp = p.ptr();
  return make_op("bce", {1}, {v}, {p}, [pp, q, target](const TensorData& out) {
    if (auto* g = grad_of(pp)) {
      (*g)[0] += out.grad[0] * (q - target) / (q * (1.0 - q));
    }
  });
}

}  // namespace trajgan::ad
