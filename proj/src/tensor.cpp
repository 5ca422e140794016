#include "kglab/tensor.hpp"

#include <cmath>
#include <sstream>

namespace kglab {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t p = 1;
  for (std::size_t s : shape) p *= s;
  return p;
}

[[noreturn]] void shape_fail(const std::string& op, const Tensor& a,
                             const Tensor& b) {
  throw ShapeError(op + ": incompatible shapes " + a.shape_string() + " and " +
                   b.shape_string());
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
  if (product(shape) != data.size())
    throw ShapeError("tensor: shape does not match data length");
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  std::size_t n = product(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::row(std::vector<double> v) {
  std::size_t n = v.size();
  return Tensor({1, n}, std::move(v));
}

Tensor Tensor::column(std::vector<double> v) {
  std::size_t n = v.size();
  return Tensor({n, 1}, std::move(v));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> d) {
  return Tensor({rows, cols}, std::move(d));
}

Tensor Tensor::identity(std::size_t n) {
  Tensor t = zeros({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data[i * n + i] = 1.0;
  return t;
}

std::size_t Tensor::rows() const {
  if (shape.empty()) throw ShapeError("rows(): rank-0 tensor");
  return shape[0];
}

std::size_t Tensor::cols() const {
  if (shape.size() < 2) return 1;
  if (shape.size() > 2) throw ShapeError("cols(): tensor rank > 2");
  return shape[1];
}

bool Tensor::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

std::string Tensor::shape_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape.size(); ++i)
    os << (i ? "," : "") << shape[i];
  os << ")";
  return os.str();
}

void ensure_finite(const Tensor& t, const char* where) {
  if (!t.all_finite())
    throw NonFiniteError(std::string(where) + ": non-finite value produced");
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows())
    shape_fail("matmul", a, b);
  std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  Tensor c = Tensor::zeros({n, m});
  const double* ap = a.data.data();
  const double* bp = b.data.data();
  double* cp = c.data.data();
  // i-k-j order: the inner loop runs over contiguous rows of b and c.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t kk = 0; kk < k; ++kk) {
      double av = ap[i * k + kk];
      if (av == 0.0) continue;
      const double* brow = bp + kk * m;
      double* crow = cp + i * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Tensor transpose(const Tensor& a) {
  if (a.rank() != 2) throw ShapeError("transpose: rank-2 tensor required");
  std::size_t n = a.rows(), m = a.cols();
  Tensor t = Tensor::zeros({m, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) t.data[j * n + i] = a.data[i * m + j];
  return t;
}

Tensor add_row_broadcast(const Tensor& m, const Tensor& bias) {
  if (m.rank() != 2 || bias.size() != m.cols())
    shape_fail("add_row_broadcast", m, bias);
  Tensor out = m;
  std::size_t rows = m.rows(), cols = m.cols();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      out.data[i * cols + j] += bias.data[j];
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) shape_fail("add", a, b);
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += b.data[i];
  return out;
}

Tensor subtract(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) shape_fail("subtract", a, b);
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] -= b.data[i];
  return out;
}

Tensor multiply_elements(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) shape_fail("multiply_elements", a, b);
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= b.data[i];
  return out;
}

Tensor scale(const Tensor& a, double factor) {
  Tensor out = a;
  for (double& v : out.data) v *= factor;
  return out;
}

double sigmoid_scalar(double x) {
  if (x >= 0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& a) {
  Tensor out = a;
  for (double& v : out.data) v = sigmoid_scalar(v);
  return out;
}

Tensor tanh_activation(const Tensor& a) {
  Tensor out = a;
  for (double& v : out.data) v = std::tanh(v);
  return out;
}

Tensor relu(const Tensor& a) {
  Tensor out = a;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor concat_rows(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.rows() != b.rows())
    shape_fail("concat_rows", a, b);
  std::size_t n = a.rows(), p = a.cols(), q = b.cols();
  Tensor out = Tensor::zeros({n, p + q});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j)
      out.data[i * (p + q) + j] = a.data[i * p + j];
    for (std::size_t j = 0; j < q; ++j)
      out.data[i * (p + q) + p + j] = b.data[i * q + j];
  }
  return out;
}

Tensor gather_rows(const Tensor& m, const std::vector<std::size_t>& rows) {
  if (m.rank() != 2) throw ShapeError("gather_rows: rank-2 tensor required");
  std::size_t cols = m.cols();
  Tensor out = Tensor::zeros({rows.size(), cols});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= m.rows())
      throw ShapeError("gather_rows: row index out of range");
    for (std::size_t j = 0; j < cols; ++j)
      out.data[i * cols + j] = m.data[rows[i] * cols + j];
  }
  return out;
}

}  // namespace kglab
