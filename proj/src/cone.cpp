#include "kglab/cone.hpp"

#include <sstream>
#include <stdexcept>

#include "kglab/stitching.hpp"

namespace kglab {

void ConeDecoder::validate() const {
  if (!(width > 0.0))
    throw std::invalid_argument("cone decoder: width must be > 0");
}

double cone_predict(const double* e_i, const double* e_j,
                    const ConeDecoder& dec) {
  dec.validate();
  double d0 = e_i[0] - e_j[0];
  double d1 = e_i[1] - e_j[1];
  if (dec.hard) return (d0 > 0.0 && d1 > 0.0) ? 1.0 : 0.0;
  return sigmoid_scalar(d1 / dec.width) * sigmoid_scalar(d0 / dec.width);
}

double cone_predict(const std::vector<double>& e_i,
                    const std::vector<double>& e_j, const ConeDecoder& dec) {
  if (e_i.size() != 2 || e_j.size() != 2)
    throw std::invalid_argument("cone_predict: 2D embeddings required");
  return cone_predict(e_i.data(), e_j.data(), dec);
}

Tensor cone_predict_batch(const Tensor& e_i, const Tensor& e_j,
                          const ConeDecoder& dec) {
  if (e_i.rank() != 2 || e_i.cols() != 2 || !e_i.same_shape(e_j))
    throw ShapeError("cone_predict_batch: two k×2 tensors required");
  dec.validate();
  std::size_t k = e_i.rows();
  Tensor out = Tensor::zeros({k, 1});
  for (std::size_t r = 0; r < k; ++r)
    out.data[r] = cone_predict(&e_i.data[r * 2], &e_j.data[r * 2], dec);
  return out;
}

int heaviside_predict(double e_i, double e_j) { return e_i > e_j ? 1 : 0; }

HardPredictor hard_cone_predictor() {
  HardPredictor p;
  p.input_dim = 2;
  p.predict = [](const double* a, const double* b, int) {
    return a[0] - b[0] > 0.0 && a[1] - b[1] > 0.0;
  };
  return p;
}

HardPredictor heaviside_hard_predictor() {
  HardPredictor p;
  p.input_dim = 1;
  p.predict = [](const double* a, const double* b, int) { return a[0] > b[0]; };
  return p;
}

bool OptimalityReport::optimal() const {
  for (const auto& c : checks)
    if (c.violations > 0) return false;
  return true;
}

std::string OptimalityReport::describe() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << c.spec.describe() << ": " << c.violations << " violation(s) in "
       << c.checked << " checks\n";
  os << (optimal() ? "optimal: yes" : "optimal: no") << "\n";
  return os.str();
}

OptimalityReport certify_optimality(const Representation& rep,
                                    const HardPredictor& predictor,
                                    const std::vector<PropertySpec>& properties) {
  rep.validate();
  if (!predictor.predict)
    throw std::invalid_argument("certify_optimality: predictor not set");
  int dim = rep.dim();
  if (predictor.input_dim != 0 && predictor.input_dim != dim)
    throw std::invalid_argument("certify_optimality: representation dimension " +
                                std::to_string(dim) + " does not match predictor");
  std::size_t n = rep.matrix.rows();
  std::vector<std::uint8_t> r(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r[i * n + j] = predictor.predict(&rep.matrix.data[i * dim],
                                       &rep.matrix.data[j * dim], dim)
                         ? 1
                         : 0;
  OptimalityReport report;
  for (const PropertySpec& spec : properties) {
    PropertyCheckCount count;
    count.spec = spec;
    switch (spec.kind) {
      case PropertyKind::symmetric:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            ++count.checked;
            if (r[i * n + j] && !r[j * n + i]) ++count.violations;
          }
        break;
      case PropertyKind::antisymmetric:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            ++count.checked;
            if (i != j && r[i * n + j] && r[j * n + i]) ++count.violations;
          }
        break;
      case PropertyKind::transitive:
      case PropertyKind::meta_transitive:
        // Over a single induced relation both reduce to plain transitivity.
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
              ++count.checked;
              if (r[i * n + j] && r[j * n + k] && !r[i * n + k])
                ++count.violations;
            }
        break;
    }
    report.checks.push_back(count);
  }
  return report;
}

ReferenceFitResult fit_to_reference(const Representation& rep,
                                    const KnowledgeGraph& kg,
                                    const std::string& relation,
                                    const ReferenceFitConfig& cfg) {
  int k = kg.relation_index(relation);
  if (k < 0)
    throw std::invalid_argument("fit_to_reference: relation not in graph: " +
                                relation);
  if (rep.num_objects() != kg.num_objects())
    throw std::invalid_argument(
        "fit_to_reference: representation does not cover the graph objects");
  int n = kg.num_objects();
  auto dense = kg.dense_relation(k);
  std::vector<Triple> labels;
  labels.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      labels.push_back({k, i, j, dense[static_cast<std::size_t>(i) * n + j]});

  ConeDecoder cone;
  cone.width = cfg.cone_width;
  AatFitConfig fit_cfg;
  fit_cfg.steps = cfg.steps;
  fit_cfg.learning_rate = cfg.learning_rate;
  fit_cfg.restarts = cfg.restarts;
  fit_cfg.epsilon = cfg.epsilon;
  fit_cfg.seed = cfg.seed;
  AatFitResult fit = fit_aat(rep, StitchTarget::of(cone), labels, fit_cfg);

  ReferenceFitResult out;
  out.params = fit.params;
  out.accuracy = fit.es;
  out.ok = fit.ok;
  out.message = fit.message;
  return out;
}

}  // namespace kglab
