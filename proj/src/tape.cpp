#include "kglab/tape.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace kglab {

namespace {
constexpr double kProbFloor = 1e-12;
constexpr double kProbCeil = 1.0 - 1e-12;
}  // namespace

ValueId Tape::emplace(Tensor value, bool leaf, bool needs_grad) {
  Node n;
  n.value = std::move(value);
  n.is_leaf = leaf;
  n.requires_grad = needs_grad;
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

ValueId Tape::input(Tensor v) { return emplace(std::move(v), true, false); }

ValueId Tape::param(Tensor v) { return emplace(std::move(v), true, true); }

const Tensor& Tape::grad(ValueId id) const {
  if (!nodes_[id].requires_grad)
    throw std::logic_error("grad(): node does not require gradients");
  return nodes_[id].grad;
}

void Tape::set_leaf(ValueId id, const Tensor& v) {
  Node& n = nodes_[id];
  if (!n.is_leaf) throw std::logic_error("set_leaf(): not a leaf");
  if (!n.value.same_shape(v))
    throw ShapeError("set_leaf(): shape mismatch");
  n.value = v;
}

void Tape::forward() {
  for (Node& n : nodes_)
    if (n.recompute) n.recompute();
}

void Tape::backward(ValueId root) {
  Node& r = nodes_[root];
  if (r.value.size() != 1)
    throw ShapeError("backward(): root must be scalar");
  for (Node& n : nodes_) {
    if (!n.requires_grad) continue;
    if (n.grad.same_shape(n.value)) {
      std::fill(n.grad.data.begin(), n.grad.data.end(), 0.0);
    } else {
      n.grad = Tensor::zeros(n.value.shape);
    }
  }
  if (!r.requires_grad)
    throw std::logic_error("backward(): root does not depend on any param");
  r.grad.data[0] = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.backprop) n.backprop();
  }
}

// Each op: validate via the eager kernel (throws on bad shapes), then record
// recompute/backprop closures. Closures capture node ids, never references,
// so nodes_ may reallocate as the graph grows.

ValueId Tape::matmul(ValueId a, ValueId b) {
  Tensor v = kglab::matmul(nodes_[a].value, nodes_[b].value);
  ensure_finite(v, "matmul");
  bool req = nodes_[a].requires_grad || nodes_[b].requires_grad;
  ValueId out = emplace(std::move(v), false, req);
  nodes_[out].recompute = [this, out, a, b] {
    nodes_[out].value = kglab::matmul(nodes_[a].value, nodes_[b].value);
    ensure_finite(nodes_[out].value, "matmul");
  };
  nodes_[out].backprop = [this, out, a, b] {
    const Tensor& g = nodes_[out].grad;
    if (nodes_[a].requires_grad)
      nodes_[a].grad =
          kglab::add(nodes_[a].grad, kglab::matmul(g, transpose(nodes_[b].value)));
    if (nodes_[b].requires_grad)
      nodes_[b].grad =
          kglab::add(nodes_[b].grad, kglab::matmul(transpose(nodes_[a].value), g));
  };
  return out;
}

ValueId Tape::add_row_broadcast(ValueId m, ValueId bias) {
  Tensor v = kglab::add_row_broadcast(nodes_[m].value, nodes_[bias].value);
  ensure_finite(v, "add_row_broadcast");
  bool req = nodes_[m].requires_grad || nodes_[bias].requires_grad;
  ValueId out = emplace(std::move(v), false, req);
  nodes_[out].recompute = [this, out, m, bias] {
    nodes_[out].value =
        kglab::add_row_broadcast(nodes_[m].value, nodes_[bias].value);
    ensure_finite(nodes_[out].value, "add_row_broadcast");
  };
  nodes_[out].backprop = [this, out, m, bias] {
    const Tensor& g = nodes_[out].grad;
    if (nodes_[m].requires_grad) nodes_[m].grad = kglab::add(nodes_[m].grad, g);
    if (nodes_[bias].requires_grad) {
      Tensor& bg = nodes_[bias].grad;
      std::size_t rows = g.rows(), cols = g.cols();
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          bg.data[j] += g.data[i * cols + j];
    }
  };
  return out;
}

ValueId Tape::add(ValueId a, ValueId b) {
  Tensor v = kglab::add(nodes_[a].value, nodes_[b].value);
  ensure_finite(v, "add");
  bool req = nodes_[a].requires_grad || nodes_[b].requires_grad;
  ValueId out = emplace(std::move(v), false, req);
  nodes_[out].recompute = [this, out, a, b] {
    nodes_[out].value = kglab::add(nodes_[a].value, nodes_[b].value);
    ensure_finite(nodes_[out].value, "add");
  };
  nodes_[out].backprop = [this, out, a, b] {
    const Tensor& g = nodes_[out].grad;
    if (nodes_[a].requires_grad) nodes_[a].grad = kglab::add(nodes_[a].grad, g);
    if (nodes_[b].requires_grad) nodes_[b].grad = kglab::add(nodes_[b].grad, g);
  };
  return out;
}

ValueId Tape::subtract(ValueId a, ValueId b) {
  Tensor v = kglab::subtract(nodes_[a].value, nodes_[b].value);
  ensure_finite(v, "subtract");
  bool req = nodes_[a].requires_grad || nodes_[b].requires_grad;
  ValueId out = emplace(std::move(v), false, req);
  nodes_[out].recompute = [this, out, a, b] {
    nodes_[out].value = kglab::subtract(nodes_[a].value, nodes_[b].value);
    ensure_finite(nodes_[out].value, "subtract");
  };
  nodes_[out].backprop = [this, out, a, b] {
    const Tensor& g = nodes_[out].grad;
    if (nodes_[a].requires_grad) nodes_[a].grad = kglab::add(nodes_[a].grad, g);
    if (nodes_[b].requires_grad)
      nodes_[b].grad = kglab::subtract(nodes_[b].grad, g);
  };
  return out;
}

ValueId Tape::multiply_elements(ValueId a, ValueId b) {
  Tensor v = kglab::multiply_elements(nodes_[a].value, nodes_[b].value);
  ensure_finite(v, "multiply_elements");
  bool req = nodes_[a].requires_grad || nodes_[b].requires_grad;
  ValueId out = emplace(std::move(v), false, req);
  nodes_[out].recompute = [this, out, a, b] {
    nodes_[out].value =
        kglab::multiply_elements(nodes_[a].value, nodes_[b].value);
    ensure_finite(nodes_[out].value, "multiply_elements");
  };
  nodes_[out].backprop = [this, out, a, b] {
    const Tensor& g = nodes_[out].grad;
    if (nodes_[a].requires_grad)
      nodes_[a].grad = kglab::add(nodes_[a].grad,
                                  kglab::multiply_elements(g, nodes_[b].value));
    if (nodes_[b].requires_grad)
      nodes_[b].grad = kglab::add(nodes_[b].grad,
                                  kglab::multiply_elements(g, nodes_[a].value));
  };
  return out;
}

ValueId Tape::scale(ValueId a, double factor) {
  Tensor v = kglab::scale(nodes_[a].value, factor);
  ensure_finite(v, "scale");
  ValueId out = emplace(std::move(v), false, nodes_[a].requires_grad);
  nodes_[out].recompute = [this, out, a, factor] {
    nodes_[out].value = kglab::scale(nodes_[a].value, factor);
    ensure_finite(nodes_[out].value, "scale");
  };
  nodes_[out].backprop = [this, out, a, factor] {
    if (nodes_[a].requires_grad)
      nodes_[a].grad =
          kglab::add(nodes_[a].grad, kglab::scale(nodes_[out].grad, factor));
  };
  return out;
}

ValueId Tape::sigmoid(ValueId a) {
  Tensor v = kglab::sigmoid(nodes_[a].value);
  ensure_finite(v, "sigmoid");
  ValueId out = emplace(std::move(v), false, nodes_[a].requires_grad);
  nodes_[out].recompute = [this, out, a] {
    nodes_[out].value = kglab::sigmoid(nodes_[a].value);
    ensure_finite(nodes_[out].value, "sigmoid");
  };
  nodes_[out].backprop = [this, out, a] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& s = nodes_[out].value;
    const Tensor& g = nodes_[out].grad;
    Tensor& ag = nodes_[a].grad;
    for (std::size_t i = 0; i < s.size(); ++i)
      ag.data[i] += g.data[i] * s.data[i] * (1.0 - s.data[i]);
  };
  return out;
}

ValueId Tape::tanh_activation(ValueId a) {
  Tensor v = kglab::tanh_activation(nodes_[a].value);
  ensure_finite(v, "tanh");
  ValueId out = emplace(std::move(v), false, nodes_[a].requires_grad);
  nodes_[out].recompute = [this, out, a] {
    nodes_[out].value = kglab::tanh_activation(nodes_[a].value);
    ensure_finite(nodes_[out].value, "tanh");
  };
  nodes_[out].backprop = [this, out, a] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& t = nodes_[out].value;
    const Tensor& g = nodes_[out].grad;
    Tensor& ag = nodes_[a].grad;
    for (std::size_t i = 0; i < t.size(); ++i)
      ag.data[i] += g.data[i] * (1.0 - t.data[i] * t.data[i]);
  };
  return out;
}

ValueId Tape::relu(ValueId a) {
  Tensor v = kglab::relu(nodes_[a].value);
  ensure_finite(v, "relu");
  ValueId out = emplace(std::move(v), false, nodes_[a].requires_grad);
  nodes_[out].recompute = [this, out, a] {
    nodes_[out].value = kglab::relu(nodes_[a].value);
    ensure_finite(nodes_[out].value, "relu");
  };
  nodes_[out].backprop = [this, out, a] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& x = nodes_[a].value;
    const Tensor& g = nodes_[out].grad;
    Tensor& ag = nodes_[a].grad;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x.data[i] > 0.0) ag.data[i] += g.data[i];
  };
  return out;
}

ValueId Tape::concat_rows(ValueId a, ValueId b) {
  Tensor v = kglab::concat_rows(nodes_[a].value, nodes_[b].value);
  ensure_finite(v, "concat_rows");
  bool req = nodes_[a].requires_grad || nodes_[b].requires_grad;
  ValueId out = emplace(std::move(v), false, req);
  nodes_[out].recompute = [this, out, a, b] {
    nodes_[out].value = kglab::concat_rows(nodes_[a].value, nodes_[b].value);
    ensure_finite(nodes_[out].value, "concat_rows");
  };
  nodes_[out].backprop = [this, out, a, b] {
    const Tensor& g = nodes_[out].grad;
    std::size_t n = g.rows();
    std::size_t p = nodes_[a].value.cols(), q = nodes_[b].value.cols();
    if (nodes_[a].requires_grad) {
      Tensor& ag = nodes_[a].grad;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
          ag.data[i * p + j] += g.data[i * (p + q) + j];
    }
    if (nodes_[b].requires_grad) {
      Tensor& bg = nodes_[b].grad;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < q; ++j)
          bg.data[i * q + j] += g.data[i * (p + q) + p + j];
    }
  };
  return out;
}

ValueId Tape::gather_rows(ValueId m, std::vector<std::size_t> rows) {
  Tensor v = kglab::gather_rows(nodes_[m].value, rows);
  ensure_finite(v, "gather_rows");
  ValueId out = emplace(std::move(v), false, nodes_[m].requires_grad);
  auto idx = std::make_shared<std::vector<std::size_t>>(std::move(rows));
  nodes_[out].recompute = [this, out, m, idx] {
    nodes_[out].value = kglab::gather_rows(nodes_[m].value, *idx);
    ensure_finite(nodes_[out].value, "gather_rows");
  };
  nodes_[out].backprop = [this, out, m, idx] {
    if (!nodes_[m].requires_grad) return;
    const Tensor& g = nodes_[out].grad;
    Tensor& mg = nodes_[m].grad;
    std::size_t cols = g.cols();
    for (std::size_t i = 0; i < idx->size(); ++i) {
      std::size_t r = (*idx)[i];
      for (std::size_t j = 0; j < cols; ++j)
        mg.data[r * cols + j] += g.data[i * cols + j];
    }
  };
  return out;
}

ValueId Tape::gather_elements(ValueId m, std::vector<std::size_t> positions) {
  const Tensor& src = nodes_[m].value;
  for (std::size_t p : positions)
    if (p >= src.size())
      throw ShapeError("gather_elements: position out of range");
  Tensor v = Tensor::zeros({positions.size(), 1});
  for (std::size_t i = 0; i < positions.size(); ++i)
    v.data[i] = src.data[positions[i]];
  ValueId out = emplace(std::move(v), false, nodes_[m].requires_grad);
  auto idx = std::make_shared<std::vector<std::size_t>>(std::move(positions));
  nodes_[out].recompute = [this, out, m, idx] {
    const Tensor& s = nodes_[m].value;
    Tensor& v = nodes_[out].value;
    for (std::size_t i = 0; i < idx->size(); ++i) v.data[i] = s.data[(*idx)[i]];
  };
  nodes_[out].backprop = [this, out, m, idx] {
    if (!nodes_[m].requires_grad) return;
    const Tensor& g = nodes_[out].grad;
    Tensor& mg = nodes_[m].grad;
    for (std::size_t i = 0; i < idx->size(); ++i)
      mg.data[(*idx)[i]] += g.data[i];
  };
  return out;
}

ValueId Tape::row_product(ValueId m) {
  const Tensor& src = nodes_[m].value;
  if (src.rank() != 2) throw ShapeError("row_product: rank-2 tensor required");
  std::size_t n = src.rows(), c = src.cols();
  auto compute = [n, c](const Tensor& s) {
    Tensor v = Tensor::zeros({n, 1});
    for (std::size_t i = 0; i < n; ++i) {
      double p = 1.0;
      for (std::size_t j = 0; j < c; ++j) p *= s.data[i * c + j];
      v.data[i] = p;
    }
    return v;
  };
  Tensor v = compute(src);
  ensure_finite(v, "row_product");
  ValueId out = emplace(std::move(v), false, nodes_[m].requires_grad);
  nodes_[out].recompute = [this, out, m, compute] {
    nodes_[out].value = compute(nodes_[m].value);
    ensure_finite(nodes_[out].value, "row_product");
  };
  nodes_[out].backprop = [this, out, m, n, c] {
    if (!nodes_[m].requires_grad) return;
    const Tensor& s = nodes_[m].value;
    const Tensor& g = nodes_[out].grad;
    Tensor& mg = nodes_[m].grad;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        double p = 1.0;
        for (std::size_t k = 0; k < c; ++k)
          if (k != j) p *= s.data[i * c + k];
        mg.data[i * c + j] += g.data[i] * p;
      }
    }
  };
  return out;
}

ValueId Tape::bce_mean(ValueId probs, ValueId labels) {
  const Tensor& p = nodes_[probs].value;
  const Tensor& y = nodes_[labels].value;
  if (!p.same_shape(y)) throw ShapeError("bce_mean: shape mismatch");
  auto compute = [](const Tensor& p, const Tensor& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      double pi = std::clamp(p.data[i], kProbFloor, kProbCeil);
      sum += y.data[i] * std::log(pi) + (1.0 - y.data[i]) * std::log(1.0 - pi);
    }
    return Tensor::scalar(-sum / static_cast<double>(p.size()));
  };
  Tensor v = compute(p, y);
  ensure_finite(v, "bce_mean");
  ValueId out = emplace(std::move(v), false, nodes_[probs].requires_grad);
  nodes_[out].recompute = [this, out, probs, labels, compute] {
    nodes_[out].value = compute(nodes_[probs].value, nodes_[labels].value);
    ensure_finite(nodes_[out].value, "bce_mean");
  };
  nodes_[out].backprop = [this, out, probs, labels] {
    if (!nodes_[probs].requires_grad) return;
    const Tensor& p = nodes_[probs].value;
    const Tensor& y = nodes_[labels].value;
    double g = nodes_[out].grad.data[0] / static_cast<double>(p.size());
    Tensor& pg = nodes_[probs].grad;
    for (std::size_t i = 0; i < p.size(); ++i) {
      double pi = p.data[i];
      if (pi <= kProbFloor || pi >= kProbCeil) continue;  // clamped: flat
      pg.data[i] += g * (pi - y.data[i]) / (pi * (1.0 - pi));
    }
  };
  return out;
}

AdamState AdamState::for_params(const std::vector<Tensor*>& params) {
  AdamState s;
  s.first_moment.reserve(params.size());
  s.second_moment.reserve(params.size());
  for (const Tensor* p : params) {
    s.first_moment.push_back(Tensor::zeros(p->shape));
    s.second_moment.push_back(Tensor::zeros(p->shape));
  }
  return s;
}

void adam_step(const std::vector<Tensor*>& params,
               const std::vector<const Tensor*>& grads, AdamState& state,
               const AdamConfig& config) {
  if (params.size() != grads.size() ||
      params.size() != state.first_moment.size())
    throw ShapeError("adam_step: parameter/gradient/state count mismatch");
  state.step += 1;
  double bc1 = 1.0 - std::pow(config.beta1, state.step);
  double bc2 = 1.0 - std::pow(config.beta2, state.step);
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& w = *params[p];
    const Tensor& g = *grads[p];
    if (!w.same_shape(g) || !w.same_shape(state.first_moment[p]))
      throw ShapeError("adam_step: shape mismatch");
    Tensor& m = state.first_moment[p];
    Tensor& v = state.second_moment[p];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m.data[i] = config.beta1 * m.data[i] + (1.0 - config.beta1) * g.data[i];
      v.data[i] =
          config.beta2 * v.data[i] + (1.0 - config.beta2) * g.data[i] * g.data[i];
      double mhat = m.data[i] / bc1;
      double vhat = v.data[i] / bc2;
      w.data[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
      w.data[i] -= config.learning_rate * config.weight_decay * w.data[i];
    }
    ensure_finite(w, "adam_step");
  }
}

}  // namespace kglab
