#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kglab/knowledge_graph.hpp"
#include "kglab/tensor.hpp"

namespace kglab {

enum class Activation { tanh, relu };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

// The learned point cloud: one embedding row per object, row order matching
// the source KnowledgeGraph.
struct Representation {
  Tensor matrix;  // n×d
  std::vector<std::string> objects;

  int num_objects() const { return static_cast<int>(matrix.rows()); }
  int dim() const { return static_cast<int>(matrix.cols()); }
  void validate() const;
};

// MLP link predictor: input is the concatenation of the two embedding rows
// in query order (2d), output is m sigmoid heads.
struct DecoderModel {
  std::vector<Tensor> weights;  // layer l: in×out
  std::vector<Tensor> biases;   // layer l: out
  Activation activation = Activation::tanh;

  int input_dim() const;
  int output_dim() const;
  std::size_t parameter_count() const;
  void validate() const;
  // features: batch×input_dim -> batch×output_dim probabilities in (0,1).
  Tensor forward(const Tensor& features) const;
};

struct TrainConfig {
  int embedding_dim = 2;
  int decoder_depth = 1;   // number of hidden layers
  int decoder_width = 50;  // units per hidden layer
  double learning_rate = 0.02;
  double weight_decay = 0.0;
  int steps = 3000;
  std::uint64_t seed = 0;
  double train_fraction = 0.75;
  Activation activation = Activation::tanh;

  void validate() const;
};

// Persisted outcome of one training run.
struct RunRecord {
  TrainConfig config;
  KnowledgeGraph kg;
  Representation representation;
  DecoderModel decoder;
  std::vector<double> train_loss_curve;  // loss before each update
  double final_train_accuracy = 0.0;
  double final_test_accuracy = 0.0;
  bool converged = false;  // hit exactly 100% train accuracy at some step
  bool failed = false;     // diverged (non-finite); record kept, not a crash
  std::string failure_reason;
};

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

// Joint full-batch training of embeddings and decoder with mean BCE over the
// train triples. Deterministic per cfg.seed. Divergence is reported via
// RunRecord::failed.
RunRecord train(const KnowledgeGraph& kg, const TripleSplit& split,
                const TrainConfig& cfg);

// accuracy: fraction of triples where (p_k > 0.5) matches the label;
// mean_loss: mean BCE.
EvalResult evaluate(const Representation& rep, const DecoderModel& dec,
                    const std::vector<Triple>& triples);

// Scoring core shared by evaluate() and the training loop.
EvalResult score_probabilities(const std::vector<double>& probabilities,
                               const std::vector<int>& labels);

// Deduplicated (subject, object) pairs plus, per triple, the flat position
// of its probability in the pair-major batch output of m heads.
struct TripleBatch {
  std::vector<std::size_t> subject_rows;
  std::vector<std::size_t> object_rows;
  std::vector<std::size_t> positions;
  std::vector<int> labels;
};

TripleBatch build_triple_batch(const std::vector<Triple>& triples,
                               int num_relations);

enum class SweepAxis { depth, width, weight_decay };

std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepRow {
  double axis_value = 0.0;
  int repeat = 0;
  std::uint64_t seed = 0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  bool failed = false;
};

struct SweepSummary {
  double axis_value = 0.0;
  double mean_train_acc = 0.0, sd_train_acc = 0.0;
  double mean_test_acc = 0.0, sd_test_acc = 0.0;
  int runs = 0, failures = 0;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::width;
  std::vector<SweepRow> rows;          // sorted by (axis value, repeat)
  std::vector<SweepSummary> summary;   // sorted by axis value
};

// One train() per (grid value, repeat), each with a seed derived from
// base.seed, the grid position and the repeat index; runs are scheduled
// across `threads` workers and collected deterministically.
SweepTable goldilocks_sweep(const KnowledgeGraph& kg, SweepAxis axis,
                            const std::vector<double>& grid, int repeats,
                            const TrainConfig& base, int threads);

}  // namespace kglab
