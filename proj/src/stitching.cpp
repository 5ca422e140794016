#include "kglab/stitching.hpp"

#include <algorithm>
#include <stdexcept>

#include "kglab/linalg.hpp"
#include "kglab/rng.hpp"
#include "kglab/tape.hpp"
#include "kglab/threadpool.hpp"

namespace kglab {

void StitchTarget::validate() const {
  if ((mlp == nullptr) == (cone == nullptr))
    throw std::invalid_argument("stitch target: exactly one decoder required");
  if (mlp) {
    mlp->validate();
    if (mlp->input_dim() % 2 != 0)
      throw std::invalid_argument("stitch target: MLP input dim must be 2·d'");
  } else {
    cone->validate();
  }
}

int StitchTarget::embedding_dim() const {
  validate();
  return mlp ? mlp->input_dim() / 2 : 2;
}

namespace {

// Source features for the AAT: the raw coordinates, plus (when ε > 0) all
// d² quadratic monomials pre-scaled by ε so the trained block is exactly D.
Tensor aat_features(const Tensor& x, double epsilon) {
  std::size_t n = x.rows(), d = x.cols();
  std::size_t feat = epsilon == 0.0 ? d : d + d * d;
  Tensor out = Tensor::zeros({n, feat});
  for (std::size_t r = 0; r < n; ++r) {
    const double* e = &x.data[r * d];
    double* o = &out.data[r * feat];
    for (std::size_t k = 0; k < d; ++k) o[k] = e[k];
    if (epsilon != 0.0)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          o[d + k * d + l] = epsilon * e[k] * e[l];
  }
  return out;
}

AatParams params_from_weights(const Tensor& w, const Tensor& bias,
                              std::size_t d, double epsilon) {
  std::size_t dp = bias.size();
  AatParams p;
  p.epsilon = epsilon;
  p.bias = bias;
  p.linear = Tensor::zeros({dp, d});
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t a = 0; a < dp; ++a) p.linear.at(a, k) = w.at(k, a);
  if (epsilon != 0.0) {
    p.quadratic = Tensor::zeros({dp, d, d});
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l)
        for (std::size_t a = 0; a < dp; ++a)
          p.quadratic.data[(a * d + k) * d + l] = w.at(d + k * d + l, a);
  }
  return p;
}

std::vector<double> stitched_probabilities(const AatParams& params,
                                           const Tensor& x,
                                           const StitchTarget& target,
                                           const TripleBatch& batch) {
  Tensor g = params.apply(x);
  Tensor gi = gather_rows(g, batch.subject_rows);
  Tensor gj = gather_rows(g, batch.object_rows);
  Tensor probs = target.mlp ? target.mlp->forward(concat_rows(gi, gj))
                            : cone_predict_batch(gi, gj, *target.cone);
  std::vector<double> picked(batch.positions.size());
  for (std::size_t i = 0; i < batch.positions.size(); ++i)
    picked[i] = probs.data[batch.positions[i]];
  return picked;
}

}  // namespace

AatFitResult fit_aat(const Representation& source, const StitchTarget& target,
                     const std::vector<Triple>& labels, const AatFitConfig& cfg,
                     const Representation* target_rep) {
  source.validate();
  target.validate();
  if (labels.empty()) throw std::invalid_argument("fit_aat: no labels");
  if (cfg.epsilon < 0) throw std::invalid_argument("fit_aat: epsilon >= 0");
  if (cfg.restarts < 1 || cfg.steps < 0)
    throw std::invalid_argument("fit_aat: bad optimizer config");

  std::size_t d = source.matrix.cols();
  std::size_t dp = static_cast<std::size_t>(target.embedding_dim());
  int m = target.mlp ? target.mlp->output_dim() : 1;
  TripleBatch batch = build_triple_batch(labels, m);

  Tensor phi = aat_features(source.matrix, cfg.epsilon);
  std::size_t feat = phi.cols();

  // Warm start for the linear block: least squares onto the target's own
  // representation when available, otherwise a padded identity.
  Tensor w0 = Tensor::zeros({feat, dp});
  if (target_rep != nullptr &&
      target_rep->matrix.rows() == source.matrix.rows() &&
      target_rep->matrix.cols() == dp) {
    const Tensor& x = source.matrix;
    Tensor xtx = matmul(transpose(x), x);
    for (std::size_t i = 0; i < d; ++i) xtx.at(i, i) += 1e-6;
    Tensor c = solve_linear(xtx, matmul(transpose(x), target_rep->matrix));
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t a = 0; a < dp; ++a) w0.at(k, a) = c.at(k, a);
  } else {
    for (std::size_t k = 0; k < std::min(d, dp); ++k) w0.at(k, k) = 1.0;
  }

  std::vector<double> label_data(batch.labels.begin(), batch.labels.end());
  AatFitResult best;
  std::string last_error;
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    Tensor w = w0;
    Tensor bias = Tensor::zeros({dp});
    if (restart > 0) {
      Rng rng(derive_seed(cfg.seed, 0xaa7, static_cast<std::uint64_t>(restart)));
      Tensor rot = random_rotation(static_cast<int>(dp), rng);
      w = matmul(w0, rot);
      for (double& v : w.data) v += rng.normal(0.0, 0.05);
    }
    try {
      Tape tape;
      ValueId phi_id = tape.input(phi);
      ValueId w_id = tape.param(w);
      ValueId b_id = tape.param(bias);
      ValueId g = tape.add_row_broadcast(tape.matmul(phi_id, w_id), b_id);
      ValueId gi = tape.gather_rows(g, batch.subject_rows);
      ValueId gj = tape.gather_rows(g, batch.object_rows);
      ValueId probs;
      if (target.mlp) {
        ValueId x = tape.concat_rows(gi, gj);
        const DecoderModel& dec = *target.mlp;
        for (std::size_t l = 0; l < dec.weights.size(); ++l) {
          x = tape.add_row_broadcast(tape.matmul(x, tape.input(dec.weights[l])),
                                     tape.input(dec.biases[l]));
          if (l + 1 < dec.weights.size())
            x = dec.activation == Activation::tanh ? tape.tanh_activation(x)
                                                   : tape.relu(x);
        }
        probs = tape.sigmoid(x);
      } else {
        ValueId diff = tape.subtract(gi, gj);
        ValueId scaled = tape.scale(diff, 1.0 / target.cone->width);
        probs = tape.row_product(tape.sigmoid(scaled));
      }
      ValueId picked = tape.gather_elements(probs, batch.positions);
      ValueId y = tape.input(Tensor::column(label_data));
      ValueId loss = tape.bce_mean(picked, y);

      std::vector<Tensor*> params = {&w, &bias};
      AdamConfig adam;
      adam.learning_rate = cfg.learning_rate;
      AdamState state = AdamState::for_params(params);
      for (int step = 0; step < cfg.steps; ++step) {
        tape.backward(loss);
        std::vector<const Tensor*> grads = {&tape.grad(w_id), &tape.grad(b_id)};
        adam_step(params, grads, state, adam);
        tape.set_leaf(w_id, w);
        tape.set_leaf(b_id, bias);
        tape.forward();
      }
      AatParams fitted = params_from_weights(w, bias, d, cfg.epsilon);
      EvalResult score = score_probabilities(
          stitched_probabilities(fitted, source.matrix, target, batch),
          batch.labels);
      if (!best.ok || score.accuracy > best.es) {
        best.ok = true;
        best.es = score.accuracy;
        best.params = std::move(fitted);
      }
    } catch (const NonFiniteError& e) {
      last_error = e.what();
    }
  }
  if (!best.ok)
    best.message = last_error.empty() ? "all restarts failed" : last_error;
  return best;
}

EsMatrix es_matrix(const std::vector<RunRecord>& runs, const AatFitConfig& cfg,
                   int threads) {
  if (runs.empty()) throw std::invalid_argument("es_matrix: no runs");
  for (const RunRecord& run : runs)
    if (!(run.kg == runs.front().kg))
      throw std::invalid_argument(
          "es_matrix: all runs must share the same knowledge graph");
  std::size_t r = runs.size();
  std::vector<Triple> universe = all_triples(runs.front().kg);

  EsMatrix out;
  out.scores = Tensor::zeros({r, r});
  out.valid.assign(r * r, 0);
  for (std::size_t i = 0; i < r; ++i)
    out.run_labels.push_back("run" + std::to_string(i) + ":seed=" +
                             std::to_string(runs[i].config.seed));

  parallel_for(r * r, threads, [&](std::size_t cell) {
    std::size_t i = cell / r, j = cell % r;
    try {
      if (i == j) {
        out.scores.data[cell] =
            evaluate(runs[i].representation, runs[i].decoder, universe).accuracy;
        out.valid[cell] = 1;
        return;
      }
      AatFitConfig cell_cfg = cfg;
      cell_cfg.seed = derive_seed(cfg.seed, i + 1, j + 1);
      AatFitResult fit =
          fit_aat(runs[i].representation, StitchTarget::of(runs[j].decoder),
                  universe, cell_cfg, &runs[j].representation);
      if (fit.ok) {
        out.scores.data[cell] = fit.es;
        out.valid[cell] = 1;
      }
    } catch (const std::exception&) {
      // cell stays missing
    }
  });
  return out;
}

std::vector<double> random_baseline_es(const StitchTarget& target,
                                       const std::vector<Triple>& labels,
                                       int n, int d, int trials,
                                       const AatFitConfig& cfg, int threads) {
  if (trials < 1) throw std::invalid_argument("random_baseline_es: trials >= 1");
  if (n < 1 || d < 1)
    throw std::invalid_argument("random_baseline_es: n and d must be >= 1");
  std::vector<double> scores(trials, -1.0);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, 0xba5e, t));
    Representation rep;
    rep.matrix = Tensor::zeros({static_cast<std::size_t>(n),
                                static_cast<std::size_t>(d)});
    for (double& v : rep.matrix.data) v = rng.normal(0.0, 1.0);
    for (int i = 0; i < n; ++i) rep.objects.push_back("r" + std::to_string(i));
    AatFitConfig trial_cfg = cfg;
    trial_cfg.seed = derive_seed(cfg.seed, 0xe5, t);
    AatFitResult fit = fit_aat(rep, target, labels, trial_cfg);
    if (fit.ok) scores[t] = fit.es;
  });
  std::vector<double> out;
  for (double s : scores)
    if (s >= 0.0) out.push_back(s);
  return out;
}

}  // namespace kglab
