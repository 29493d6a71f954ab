#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace trajgan::ad {

struct TensorData;

// One recorded forward op. Backward traversal visits nodes in strictly
// decreasing seq (append) order and is destructive: a consumed node cannot
// be replayed, the graph is rebuilt per step (define-by-run).
struct TapeNode {
  const char* op = "";
  std::uint64_t seq = 0;
  std::weak_ptr<TensorData> out;
  std::vector<std::shared_ptr<TensorData>> parents;
  std::function<void(const TensorData& out)> backward;
  bool consumed = false;
};

struct TensorData {
  std::vector<std::size_t> shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until first accumulation
  bool needs_grad = false;
  std::shared_ptr<TapeNode> node;  // null on leaves
};

// Dense row-major f64 tensor, shared-handle semantics. Values are immutable
// between forward and backward; only the optimizer mutates leaves, after the
// tape for the step has been consumed.
class Tensor {
 public:
  Tensor() = default;

  static Tensor leaf(std::vector<std::size_t> shape, std::vector<double> value,
                     bool requires_grad = false);
  static Tensor zeros(std::vector<std::size_t> shape,
                      bool requires_grad = false);
  static Tensor scalar(double v);

  bool defined() const { return data_ != nullptr; }
  const std::vector<std::size_t>& shape() const { return data_->shape; }
  std::size_t rank() const { return data_->shape.size(); }
  std::size_t numel() const { return data_->value.size(); }
  bool is_scalar() const { return defined() && numel() == 1; }

  const std::vector<double>& values() const { return data_->value; }
  double operator[](std::size_t i) const { return data_->value[i]; }
  double at(std::size_t r, std::size_t c) const;
  double item() const;  // scalar tensors only

  bool needs_grad() const { return data_->needs_grad; }
  bool has_grad() const { return !data_->grad.empty(); }
  const std::vector<double>& grad() const;
  void clear_grad() { data_->grad.clear(); }

  // Optimizer/gradcheck access; never call between forward and backward.
  std::vector<double>& mutable_values() { return data_->value; }

  // Leaf copy of the current values, cut off from the tape.
  Tensor detach() const;

  // Node identifier on the tape; 0 for leaves.
  std::uint64_t tape_id() const;

  std::shared_ptr<TensorData> ptr() const { return data_; }

 private:
  explicit Tensor(std::shared_ptr<TensorData> d) : data_(std::move(d)) {}
  std::shared_ptr<TensorData> data_;

  friend Tensor make_op(const char* op, std::vector<std::size_t> shape,
                        std::vector<double> value,
                        std::vector<Tensor> parents,
                        std::function<void(const TensorData&)> backward);
};

// Records a forward result on the tape (when any parent needs gradients)
// and validates that every output element is finite.
Tensor make_op(const char* op, std::vector<std::size_t> shape,
               std::vector<double> value, std::vector<Tensor> parents,
               std::function<void(const TensorData&)> backward);

// Reverse pass from a scalar loss. Populates grads on every needs-grad leaf
// reachable from the loss and consumes the visited part of the tape. A loss
// with no recorded node is a no-op.
void backward(const Tensor& loss);

// ---- forward ops ----
Tensor add(const Tensor& a, const Tensor& b);           // same shape
Tensor sub(const Tensor& a, const Tensor& b);           // same shape
Tensor mul(const Tensor& a, const Tensor& b);           // elementwise
Tensor scale(const Tensor& a, double s);
Tensor matmul(const Tensor& a, const Tensor& b);        // [m,k]x[k,n] or [m,k]x[k]
Tensor transpose(const Tensor& a);                      // 2-D
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor softmax(const Tensor& a);                        // along last axis
Tensor concat(const std::vector<Tensor>& parts);        // 1-D parts
Tensor slice(const Tensor& a, std::size_t begin, std::size_t len);  // 1-D
Tensor row(const Tensor& a, std::size_t i);             // [n,c] -> [c]
Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t len);
Tensor concat_rows(const std::vector<Tensor>& parts);   // stack along axis 0
Tensor stack_rows(const std::vector<Tensor>& rows);     // k vectors [c] -> [k,c]
Tensor concat_cols(const std::vector<Tensor>& parts);   // [n,ci] -> [n,sum ci]
Tensor sum(const Tensor& a);                            // scalar
Tensor mean(const Tensor& a);                           // scalar
Tensor mean_rows(const Tensor& a);                      // [n,c] -> [c]
Tensor cumsum_rows(const Tensor& a);                    // running row sums
Tensor add_rowwise(const Tensor& a, const Tensor& b);   // [n,c] + [c]
Tensor squared_error(const Tensor& a, const Tensor& b); // sum((a-b)^2), scalar
Tensor bce(const Tensor& p, double target);             // scalar p in (0,1)

}  // namespace trajgan::ad
