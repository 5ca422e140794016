#include "kglab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kglab/linalg.hpp"

namespace kglab {

namespace {

Tensor center_columns(const Tensor& x) {
  std::size_t n = x.rows(), d = x.cols();
  Tensor out = x;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x.data[i * d + j];
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out.data[i * d + j] -= mean;
  }
  return out;
}

double frobenius(const Tensor& x) {
  double s = 0.0;
  for (double v : x.data) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double cka(const Tensor& x, const Tensor& y) {
  if (x.rank() != 2 || y.rank() != 2 || x.rows() != y.rows())
    throw ShapeError("cka: two matrices with the same row count required");
  if (x.rows() < 2) throw std::invalid_argument("cka: need n >= 2 rows");
  Tensor xc = center_columns(x);
  Tensor yc = center_columns(y);
  double xnorm = frobenius(matmul(transpose(xc), xc));
  double ynorm = frobenius(matmul(transpose(yc), yc));
  if (xnorm == 0.0 || ynorm == 0.0)
    throw std::invalid_argument("cka: degenerate (constant) representation");
  double cross = frobenius(matmul(transpose(yc), xc));
  return cross * cross / (xnorm * ynorm);
}

PcaResult pca_project(const Tensor& x, int k) {
  if (x.rank() != 2) throw ShapeError("pca_project: matrix required");
  std::size_t n = x.rows(), d = x.cols();
  if (k < 1 || static_cast<std::size_t>(k) > std::min(n, d))
    throw std::invalid_argument("pca_project: k out of range");
  Tensor xc = center_columns(x);
  Tensor cov = scale(matmul(transpose(xc), xc),
                     n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0);
  SymmetricEigen eig = eigen_symmetric(cov);
  double total = 0.0;
  for (double& v : eig.values) {
    v = std::max(v, 0.0);  // clip eigenvalue noise on rank-deficient input
    total += v;
  }
  PcaResult out;
  out.components = Tensor::zeros({d, static_cast<std::size_t>(k)});
  for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
    for (std::size_t r = 0; r < d; ++r)
      out.components.at(r, c) = eig.vectors.at(r, c);
    out.explained_variance_ratios.push_back(
        total > 0.0 ? eig.values[c] / total : 0.0);
  }
  out.scores = matmul(xc, out.components);
  return out;
}

double feature_alignment_binary(const Tensor& component_scores,
                                const std::vector<int>& labels) {
  std::size_t n = component_scores.rows(), k = component_scores.cols();
  if (labels.size() != n)
    throw std::invalid_argument("feature_alignment: one label per object required");
  std::size_t pos = 0;
  for (int l : labels) pos += l ? 1 : 0;
  if (pos == 0 || pos == n)
    throw std::invalid_argument("feature_alignment: constant attribute");
  double best = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = component_scores.at(i, c);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> thresholds = {sorted.front() - 1.0};
    for (std::size_t i = 0; i + 1 < n; ++i)
      thresholds.push_back(0.5 * (sorted[i] + sorted[i + 1]));
    thresholds.push_back(sorted.back() + 1.0);
    for (double t : thresholds) {
      std::size_t tp = 0, tn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        bool above = v[i] > t;
        if (labels[i] && above) ++tp;
        if (!labels[i] && !above) ++tn;
      }
      double balanced = 0.5 * (static_cast<double>(tp) / pos +
                               static_cast<double>(tn) / (n - pos));
      best = std::max(best, std::max(balanced, 1.0 - balanced));
    }
  }
  return best;
}

double feature_alignment_ordinal(const Tensor& component_scores,
                                 const std::vector<int>& labels) {
  std::size_t n = component_scores.rows(), k = component_scores.cols();
  if (labels.size() != n)
    throw std::invalid_argument("feature_alignment: one label per object required");
  if (std::adjacent_find(labels.begin(), labels.end(),
                         std::not_equal_to<>()) == labels.end())
    throw std::invalid_argument("feature_alignment: constant attribute");
  std::vector<double> y(labels.begin(), labels.end());
  double best = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = component_scores.at(i, c);
    if (std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end())
      continue;  // constant component carries no signal
    best = std::max(best, std::abs(spearman_correlation(v, y)));
  }
  return best;
}

}  // namespace kglab
