#pragma once

#include <vector>

#include "kglab/tensor.hpp"

namespace kglab {

// Linear centered kernel alignment between two representations of the same
// n objects: ‖Ȳᵀ X̄‖²_F / (‖X̄ᵀ X̄‖_F · ‖Ȳᵀ Ȳ‖_F) with column-mean-centered
// X̄, Ȳ. Symmetric, in [0, 1], invariant to orthogonal maps and translation.
// Throws std::invalid_argument on degenerate (all-constant) input.
double cka(const Tensor& x, const Tensor& y);

struct PcaResult {
  Tensor scores;                  // n×k projections onto the principal axes
  Tensor components;              // d×k, orthonormal columns
  std::vector<double> explained_variance_ratios;  // k, non-increasing
};

// PCA of the column-centered data. 1 <= k <= min(n, d).
PcaResult pca_project(const Tensor& x, int k);

// Best single-component separation of a binary attribute: max over
// components and thresholds of balanced accuracy (mean of the two
// class-conditional accuracies).
double feature_alignment_binary(const Tensor& component_scores,
                                const std::vector<int>& labels);

// Best single-component alignment with an ordinal attribute: max over
// components of |Spearman rank correlation|.
double feature_alignment_ordinal(const Tensor& component_scores,
                                 const std::vector<int>& labels);

}  // namespace kglab
