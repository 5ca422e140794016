#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kglab/aat.hpp"
#include "kglab/cone.hpp"
#include "kglab/knowledge_graph.hpp"
#include "kglab/trainer.hpp"

namespace kglab {

// A frozen decoder to stitch into: either a trained MLP or the cone
// reference. Exactly one pointer is set; the caller keeps it alive.
struct StitchTarget {
  const DecoderModel* mlp = nullptr;
  const ConeDecoder* cone = nullptr;

  static StitchTarget of(const DecoderModel& dec) { return {&dec, nullptr}; }
  static StitchTarget of(const ConeDecoder& dec) { return {nullptr, &dec}; }

  int embedding_dim() const;  // d': what the decoder expects per object
  void validate() const;
};

struct AatFitConfig {
  int steps = 400;
  double learning_rate = 0.05;
  int restarts = 4;        // restart 0 is the warm start, the rest rotate it
  double epsilon = 0.05;   // quadratic scale; 0 = purely affine
  std::uint64_t seed = 0;
};

struct AatFitResult {
  AatParams params;
  double es = 0.0;  // equivalence score = accuracy over the label set
  bool ok = false;
  std::string message;
};

// Trains b, C (and D when ε > 0) by Adam on the target-task BCE through the
// frozen decoder; the equivalence score is the resulting accuracy over
// `labels`. When target_rep is given (the decoder's own representation), the
// linear map starts from the least-squares fit of source onto it; otherwise
// from a padded identity. Divergent restarts are skipped; ok is false only
// if every restart failed.
AatFitResult fit_aat(const Representation& source, const StitchTarget& target,
                     const std::vector<Triple>& labels, const AatFitConfig& cfg,
                     const Representation* target_rep = nullptr);

// Pairwise equivalence scores: entry (i, j) feeds representation i into
// decoder j. Diagonal entries are each model's own accuracy (identity
// stitch, no fitting). All runs must share the same knowledge graph; scores
// are measured on the full triple universe.
struct EsMatrix {
  std::vector<std::string> run_labels;
  Tensor scores;                     // r×r
  std::vector<std::uint8_t> valid;   // r×r; 0 = fit failed, score missing

  bool cell_valid(std::size_t i, std::size_t j) const {
    return valid[i * scores.cols() + j] != 0;
  }
};

EsMatrix es_matrix(const std::vector<RunRecord>& runs, const AatFitConfig& cfg,
                   int threads);

// ES of `trials` fresh Gaussian random n×d representations fitted to the
// frozen target on the same labels; the Fig.-style random baseline.
std::vector<double> random_baseline_es(const StitchTarget& target,
                                       const std::vector<Triple>& labels,
                                       int n, int d, int trials,
                                       const AatFitConfig& cfg, int threads);

}  // namespace kglab
