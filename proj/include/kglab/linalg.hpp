#pragma once

#include <vector>

#include "kglab/rng.hpp"
#include "kglab/tensor.hpp"

namespace kglab {

// Solves A X = B for X (A: d×d, B: d×k) by Gaussian elimination with
// partial pivoting. Throws std::invalid_argument on a singular system.
Tensor solve_linear(Tensor a, Tensor b);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Tensor vectors;              // column i pairs with values[i]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvector signs
// follow a fixed convention (largest-magnitude entry positive).
SymmetricEigen eigen_symmetric(const Tensor& a);

// Haar-ish random orthogonal matrix (random Givens rotations plus a random
// reflection); deterministic for a given Rng state.
Tensor random_rotation(int dim, Rng& rng);

// Pearson correlation of two equal-length samples.
double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y);

// Spearman rank correlation (average ranks for ties).
double spearman_correlation(const std::vector<double>& x,
                            const std::vector<double>& y);

std::vector<double> average_ranks(const std::vector<double>& v);

}  // namespace kglab
