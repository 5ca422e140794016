#pragma once

#include "kglab/tensor.hpp"

namespace kglab {

// Almost affine transformation f(e) = b + C e + ε D (e ⊗ e), mapping source
// embeddings (d) into a target decoder's embedding space (d').
//
// ε = 0 means purely affine: the quadratic block is absent and apply() never
// touches it, so the affine path is bit-identical to b + C e.
struct AatParams {
  Tensor bias;       // d'
  Tensor linear;     // d'×d
  Tensor quadratic;  // d'×d×d, empty iff epsilon == 0
  double epsilon = 0.0;

  int source_dim() const { return static_cast<int>(linear.cols()); }
  int target_dim() const { return static_cast<int>(linear.rows()); }

  void validate() const;
  // X: n×d -> n×d'.
  Tensor apply(const Tensor& x) const;
};

}  // namespace kglab
