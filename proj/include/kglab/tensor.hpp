#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kglab {

// Raised when an operation produces NaN or Inf. Training code treats this as
// a diverged run rather than a crash.
class NonFiniteError : public std::runtime_error {
 public:
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Dense row-major tensor of doubles. Rank 1 and 2 cover almost everything in
// this codebase; rank 3 appears only as the quadratic block of an AAT.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor scalar(double v) { return Tensor({1, 1}, {v}); }
  static Tensor row(std::vector<double> v);
  static Tensor column(std::vector<double> v);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> d);
  static Tensor identity(std::size_t n);

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  bool all_finite() const;
  std::string shape_string() const;
};

// Plain (non-differentiable) kernels. The autodiff tape and the fast
// evaluation paths both sit on top of these.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
// m + 1*bias: adds a length-cols bias vector to every row.
Tensor add_row_broadcast(const Tensor& m, const Tensor& bias);
Tensor add(const Tensor& a, const Tensor& b);
Tensor subtract(const Tensor& a, const Tensor& b);
Tensor multiply_elements(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor sigmoid(const Tensor& a);
Tensor tanh_activation(const Tensor& a);
Tensor relu(const Tensor& a);
// Concatenates corresponding rows of a and b: (n×p, n×q) -> n×(p+q).
Tensor concat_rows(const Tensor& a, const Tensor& b);
Tensor gather_rows(const Tensor& m, const std::vector<std::size_t>& rows);

double sigmoid_scalar(double x);

// Throws NonFiniteError if t contains NaN/Inf; `where` names the operation.
void ensure_finite(const Tensor& t, const char* where);

}  // namespace kglab
