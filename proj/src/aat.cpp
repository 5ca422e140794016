#include "kglab/aat.hpp"

#include <stdexcept>

namespace kglab {

void AatParams::validate() const {
  if (bias.size() != linear.rows())
    throw std::invalid_argument("aat: bias length must match linear rows");
  if (epsilon < 0.0) throw std::invalid_argument("aat: epsilon must be >= 0");
  if (epsilon == 0.0) {
    if (!quadratic.empty())
      throw std::invalid_argument("aat: epsilon 0 requires an empty quadratic block");
  } else {
    if (quadratic.shape !=
        std::vector<std::size_t>{linear.rows(), linear.cols(), linear.cols()})
      throw std::invalid_argument("aat: quadratic block must be d'×d×d");
  }
  if (!bias.all_finite() || !linear.all_finite() || !quadratic.all_finite())
    throw std::invalid_argument("aat: non-finite parameters");
}

Tensor AatParams::apply(const Tensor& x) const {
  validate();
  if (x.rank() != 2 || x.cols() != linear.cols())
    throw ShapeError("aat apply: input is not n×d");
  std::size_t n = x.rows(), d = x.cols(), dp = linear.rows();
  Tensor out = Tensor::zeros({n, dp});
  for (std::size_t r = 0; r < n; ++r) {
    const double* e = &x.data[r * d];
    for (std::size_t a = 0; a < dp; ++a) {
      double acc = bias.data[a];
      const double* c = &linear.data[a * d];
      for (std::size_t k = 0; k < d; ++k) acc += c[k] * e[k];
      if (epsilon != 0.0) {
        double quad = 0.0;
        const double* q = &quadratic.data[a * d * d];
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t l = 0; l < d; ++l) quad += q[k * d + l] * e[k] * e[l];
        acc += epsilon * quad;
      }
      out.data[r * dp + a] = acc;
    }
  }
  return out;
}

}  // namespace kglab
