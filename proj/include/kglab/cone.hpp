#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kglab/aat.hpp"
#include "kglab/knowledge_graph.hpp"
#include "kglab/tensor.hpp"
#include "kglab/trainer.hpp"

namespace kglab {

// Hand-crafted axis-aligned cone predictor on 2D embeddings:
//   p(E_i, E_j) = σ((E_i1 − E_j1)/w) · σ((E_i0 − E_j0)/w).
// p ≈ 1 when E_i dominates E_j componentwise, i.e. the subject of the query
// is the descendant. In hard mode the output is exactly 1 iff both
// coordinate differences are strictly positive (ties give 0).
struct ConeDecoder {
  double width = 1.0;  // sigmoid temperature, > 0
  bool hard = false;

  void validate() const;
};

double cone_predict(const double* e_i, const double* e_j,
                    const ConeDecoder& dec);
double cone_predict(const std::vector<double>& e_i,
                    const std::vector<double>& e_j, const ConeDecoder& dec);
// Rowwise batch: e_i, e_j are k×2, result is k×1.
Tensor cone_predict_batch(const Tensor& e_i, const Tensor& e_j,
                          const ConeDecoder& dec);

// Heaviside comparator on scalar embeddings: 1 iff e_i > e_j (H(0) = 0).
int heaviside_predict(double e_i, double e_j);

// A deterministic {0,1} predictor over embedding rows, as certified by
// certify_optimality. input_dim 0 accepts any dimension.
struct HardPredictor {
  int input_dim = 0;
  std::function<bool(const double*, const double*, int dim)> predict;
};

HardPredictor hard_cone_predictor();
HardPredictor heaviside_hard_predictor();

struct PropertyCheckCount {
  PropertySpec spec;
  std::size_t violations = 0;
  std::size_t checked = 0;  // pairs or triples enumerated
};

struct OptimalityReport {
  std::vector<PropertyCheckCount> checks;
  bool optimal() const;
  std::string describe() const;
};

// Evaluates the predictor's induced relation over all ordered pairs of rep's
// rows and counts violations of each property, exhaustively. Property specs
// here describe the single induced relation; their relation names are not
// consulted.
OptimalityReport certify_optimality(const Representation& rep,
                                    const HardPredictor& predictor,
                                    const std::vector<PropertySpec>& properties);

struct ReferenceFitResult {
  AatParams params;
  double accuracy = 0.0;  // over all triples of the chosen relation
  bool ok = false;
  std::string message;
};

struct ReferenceFitConfig {
  int steps = 400;
  double learning_rate = 0.05;
  int restarts = 4;
  double epsilon = 0.05;  // AAT quadratic scale
  double cone_width = 1.0;
  std::uint64_t seed = 0;
};

// Stitches rep into the frozen soft-cone reference decoder through a trained
// AAT and reports accuracy over all triples of `relation` (every ordered
// pair, self-pairs included).
ReferenceFitResult fit_to_reference(const Representation& rep,
                                    const KnowledgeGraph& kg,
                                    const std::string& relation,
                                    const ReferenceFitConfig& cfg);

}  // namespace kglab
