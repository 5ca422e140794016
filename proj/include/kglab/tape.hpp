#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "kglab/tensor.hpp"

namespace kglab {

using ValueId = std::size_t;

// Reverse-mode tape over the dense kernels in tensor.hpp.
//
// Leaves are created with input() (constants) or param() (differentiable);
// every operation records the forward value plus closures that recompute it
// and push gradients to its inputs. The graph topology is fixed after
// construction: full-batch training builds one tape per run, then loops
// set_leaf / forward / backward / (optimizer step). backward() visits nodes
// in exact reverse construction order, which is a valid reverse topological
// order because inputs always precede their consumers.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  ValueId input(Tensor v);
  ValueId param(Tensor v);

  ValueId matmul(ValueId a, ValueId b);
  ValueId add_row_broadcast(ValueId m, ValueId bias);
  ValueId add(ValueId a, ValueId b);
  ValueId subtract(ValueId a, ValueId b);
  ValueId multiply_elements(ValueId a, ValueId b);
  ValueId scale(ValueId a, double factor);
  ValueId sigmoid(ValueId a);
  ValueId tanh_activation(ValueId a);
  ValueId relu(ValueId a);
  ValueId concat_rows(ValueId a, ValueId b);
  ValueId gather_rows(ValueId m, std::vector<std::size_t> rows);
  // Picks flat (row-major) positions out of m; result is a k×1 column.
  ValueId gather_elements(ValueId m, std::vector<std::size_t> positions);
  // Product across the columns of each row: n×c -> n×1.
  ValueId row_product(ValueId m);
  // Mean binary cross-entropy between probabilities and {0,1} labels.
  // Probabilities are clamped to [1e-12, 1-1e-12] inside the logs.
  ValueId bce_mean(ValueId probs, ValueId labels);

  // Overwrites a leaf's value (shape must match).
  void set_leaf(ValueId id, const Tensor& v);
  // Recomputes every non-leaf value in construction order.
  void forward();
  // Accumulates dRoot/dNode into grad() for every differentiable node.
  // root must be a scalar (1×1).
  void backward(ValueId root);

  const Tensor& value(ValueId id) const { return nodes_[id].value; }
  const Tensor& grad(ValueId id) const;
  bool requires_grad(ValueId id) const { return nodes_[id].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool is_leaf = false;
    bool requires_grad = false;
    std::function<void()> recompute;  // null for leaves
    std::function<void()> backprop;   // null for leaves
  };

  ValueId emplace(Tensor value, bool leaf, bool needs_grad);
  Node& node(ValueId id) { return nodes_[id]; }

  std::vector<Node> nodes_;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // decoupled: applied to the parameter directly
};

struct AdamState {
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  long step = 0;

  static AdamState for_params(const std::vector<Tensor*>& params);
};

// One decoupled-weight-decay Adam update over a parameter group.
void adam_step(const std::vector<Tensor*>& params,
               const std::vector<const Tensor*>& grads, AdamState& state,
               const AdamConfig& config);

}  // namespace kglab
