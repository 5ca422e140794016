#include "kglab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kglab {

Tensor solve_linear(Tensor a, Tensor b) {
  if (a.rank() != 2 || a.rows() != a.cols() || b.rows() != a.rows())
    throw ShapeError("solve_linear: need d×d and d×k operands");
  std::size_t d = a.rows(), k = b.cols();
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::abs(a.at(r, col)) > std::abs(a.at(pivot, col))) pivot = r;
    if (std::abs(a.at(pivot, col)) < 1e-14)
      throw std::invalid_argument("solve_linear: singular system");
    if (pivot != col) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a.at(col, j), a.at(pivot, j));
      for (std::size_t j = 0; j < k; ++j) std::swap(b.at(col, j), b.at(pivot, j));
    }
    double inv = 1.0 / a.at(col, col);
    for (std::size_t r = col + 1; r < d; ++r) {
      double f = a.at(r, col) * inv;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < d; ++j) a.at(r, j) -= f * a.at(col, j);
      for (std::size_t j = 0; j < k; ++j) b.at(r, j) -= f * b.at(col, j);
    }
  }
  Tensor x = Tensor::zeros({d, k});
  for (std::size_t col = 0; col < k; ++col) {
    for (std::size_t r = d; r-- > 0;) {
      double s = b.at(r, col);
      for (std::size_t j = r + 1; j < d; ++j) s -= a.at(r, j) * x.at(j, col);
      x.at(r, col) = s / a.at(r, r);
    }
  }
  return x;
}

SymmetricEigen eigen_symmetric(const Tensor& input) {
  if (input.rank() != 2 || input.rows() != input.cols())
    throw ShapeError("eigen_symmetric: square matrix required");
  std::size_t n = input.rows();
  Tensor a = input;
  Tensor v = Tensor::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a.at(i, j) * a.at(i, j);
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          double aip = a.at(i, p), aiq = a.at(i, q);
          a.at(i, p) = c * aip - s * aiq;
          a.at(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double api = a.at(p, i), aqi = a.at(q, i);
          a.at(p, i) = c * api - s * aqi;
          a.at(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vip = v.at(i, p), viq = v.at(i, q);
          v.at(i, p) = c * vip - s * viq;
          v.at(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a.at(i, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Tensor::zeros({n, n});
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = diag[order[c]];
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(v.at(r, order[c])) > std::abs(v.at(best, order[c]))) best = r;
    double sign = v.at(best, order[c]) < 0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r)
      out.vectors.at(r, c) = sign * v.at(r, order[c]);
  }
  return out;
}

Tensor random_rotation(int dim, Rng& rng) {
  Tensor r = Tensor::identity(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      double theta = rng.uniform() * 2.0 * M_PI;
      double c = std::cos(theta), s = std::sin(theta);
      for (int k = 0; k < dim; ++k) {
        double rki = r.at(k, i), rkj = r.at(k, j);
        r.at(k, i) = c * rki - s * rkj;
        r.at(k, j) = s * rki + c * rkj;
      }
    }
  }
  if (rng.bernoulli(0.5))
    for (int k = 0; k < dim; ++k) r.at(k, 0) = -r.at(k, 0);
  return r;
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson: need two samples of equal length >= 2");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("pearson: constant sample");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j + 1 < v.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double rank = 0.5 * (i + j) + 1.0;  // 1-based average rank of the tie block
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_correlation(const std::vector<double>& x,
                            const std::vector<double>& y) {
  return pearson_correlation(average_ranks(x), average_ranks(y));
}

}  // namespace kglab
