#include "kglab/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "kglab/rng.hpp"
#include "kglab/tape.hpp"
#include "kglab/threadpool.hpp"

namespace kglab {

std::string to_string(Activation a) {
  return a == Activation::tanh ? "tanh" : "relu";
}

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  throw std::invalid_argument("unknown activation: " + name);
}

void Representation::validate() const {
  if (matrix.rank() != 2 || matrix.cols() < 1)
    throw std::invalid_argument("representation: n×d matrix with d >= 1 required");
  if (objects.size() != matrix.rows())
    throw std::invalid_argument("representation: object list does not match rows");
  if (!matrix.all_finite())
    throw std::invalid_argument("representation: non-finite entries");
}

int DecoderModel::input_dim() const {
  return weights.empty() ? 0 : static_cast<int>(weights.front().rows());
}

int DecoderModel::output_dim() const {
  return weights.empty() ? 0 : static_cast<int>(weights.back().cols());
}

std::size_t DecoderModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

void DecoderModel::validate() const {
  if (weights.empty() || weights.size() != biases.size())
    throw std::invalid_argument("decoder: weight/bias layer mismatch");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rank() != 2 || biases[l].size() != weights[l].cols())
      throw std::invalid_argument("decoder: bad layer shapes");
    if (l + 1 < weights.size() && weights[l].cols() != weights[l + 1].rows())
      throw std::invalid_argument("decoder: consecutive layer shapes do not chain");
  }
}

Tensor DecoderModel::forward(const Tensor& features) const {
  Tensor x = features;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    x = add_row_broadcast(matmul(x, weights[l]), biases[l]);
    if (l + 1 < weights.size())
      x = activation == Activation::tanh ? tanh_activation(x) : relu(x);
  }
  return sigmoid(x);
}

void TrainConfig::validate() const {
  if (embedding_dim < 1) throw std::invalid_argument("config: embedding_dim >= 1");
  if (decoder_depth < 0) throw std::invalid_argument("config: decoder_depth >= 0");
  if (decoder_depth > 0 && decoder_width < 1)
    throw std::invalid_argument("config: decoder_width >= 1");
  if (!(learning_rate > 0)) throw std::invalid_argument("config: learning_rate > 0");
  if (weight_decay < 0) throw std::invalid_argument("config: weight_decay >= 0");
  if (steps < 0) throw std::invalid_argument("config: steps >= 0");
  if (!(train_fraction > 0 && train_fraction < 1))
    throw std::invalid_argument("config: train_fraction in (0, 1)");
}

EvalResult score_probabilities(const std::vector<double>& probabilities,
                               const std::vector<int>& labels) {
  if (probabilities.size() != labels.size() || probabilities.empty())
    throw std::invalid_argument("score: probability/label size mismatch");
  constexpr double lo = 1e-12, hi = 1.0 - 1e-12;
  std::size_t hits = 0;
  double loss = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    double p = probabilities[i];
    int predicted = p > 0.5 ? 1 : 0;
    if (predicted == labels[i]) ++hits;
    double pc = std::clamp(p, lo, hi);
    loss -= labels[i] ? std::log(pc) : std::log(1.0 - pc);
  }
  return {static_cast<double>(hits) / probabilities.size(),
          loss / probabilities.size()};
}

TripleBatch build_triple_batch(const std::vector<Triple>& triples, int m) {
  TripleBatch batch;
  std::map<std::pair<int, int>, std::size_t> pair_pos;
  for (const Triple& t : triples) {
    if (t.relation < 0 || t.relation >= m)
      throw std::invalid_argument("triple batch: relation index out of range");
    auto key = std::make_pair(t.subject, t.object);
    auto it = pair_pos.find(key);
    if (it == pair_pos.end()) {
      it = pair_pos.emplace(key, pair_pos.size()).first;
      batch.subject_rows.push_back(static_cast<std::size_t>(t.subject));
      batch.object_rows.push_back(static_cast<std::size_t>(t.object));
    }
    batch.positions.push_back(it->second * static_cast<std::size_t>(m) +
                              static_cast<std::size_t>(t.relation));
    batch.labels.push_back(t.label);
  }
  return batch;
}

namespace {

DecoderModel init_decoder(int input_dim, int output_dim, const TrainConfig& cfg,
                          Rng& rng) {
  std::vector<int> dims;
  dims.push_back(input_dim);
  for (int l = 0; l < cfg.decoder_depth; ++l) dims.push_back(cfg.decoder_width);
  dims.push_back(output_dim);
  DecoderModel dec;
  dec.activation = cfg.activation;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Tensor w = Tensor::zeros({static_cast<std::size_t>(dims[l]),
                              static_cast<std::size_t>(dims[l + 1])});
    double sd = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    for (double& v : w.data) v = rng.normal(0.0, sd);
    dec.weights.push_back(std::move(w));
    dec.biases.push_back(Tensor::zeros({static_cast<std::size_t>(dims[l + 1])}));
  }
  return dec;
}

}  // namespace

RunRecord train(const KnowledgeGraph& kg, const TripleSplit& split,
                const TrainConfig& cfg) {
  cfg.validate();
  kg.validate();
  if (split.train.empty())
    throw std::invalid_argument("train: empty training split");

  int n = kg.num_objects();
  int m = kg.num_relations();
  int d = cfg.embedding_dim;

  Rng rng(derive_seed(cfg.seed, 0x1417));
  Tensor embedding = Tensor::zeros({static_cast<std::size_t>(n),
                                    static_cast<std::size_t>(d)});
  for (double& v : embedding.data) v = rng.normal(0.0, 0.3);
  DecoderModel decoder = init_decoder(2 * d, m, cfg, rng);

  RunRecord record;
  record.config = cfg;
  record.kg = kg;
  record.representation.objects = kg.objects;

  TripleBatch batch = build_triple_batch(split.train, m);

  // Master copies live outside the tape; each step pushes them back in.
  std::vector<Tensor*> decayed = {&embedding};
  std::vector<Tensor*> plain;
  for (auto& w : decoder.weights) decayed.push_back(&w);
  for (auto& b : decoder.biases) plain.push_back(&b);

  AdamConfig decayed_cfg;
  decayed_cfg.learning_rate = cfg.learning_rate;
  decayed_cfg.weight_decay = cfg.weight_decay;
  AdamConfig plain_cfg = decayed_cfg;
  plain_cfg.weight_decay = 0.0;  // biases are never decayed
  AdamState decayed_state = AdamState::for_params(decayed);
  AdamState plain_state = AdamState::for_params(plain);

  auto finish = [&](bool failed, const std::string& reason) {
    record.representation.matrix = embedding;
    record.decoder = decoder;
    record.failed = failed;
    record.failure_reason = reason;
    if (!failed) {
      record.final_train_accuracy =
          evaluate(record.representation, decoder, split.train).accuracy;
      if (!split.test.empty())
        record.final_test_accuracy =
            evaluate(record.representation, decoder, split.test).accuracy;
    }
    return record;
  };

  try {
    Tape tape;
    ValueId emb_id = tape.param(embedding);
    std::vector<ValueId> weight_ids, bias_ids;
    for (const auto& w : decoder.weights) weight_ids.push_back(tape.param(w));
    for (const auto& b : decoder.biases) bias_ids.push_back(tape.param(b));

    ValueId x = tape.concat_rows(tape.gather_rows(emb_id, batch.subject_rows),
                                 tape.gather_rows(emb_id, batch.object_rows));
    for (std::size_t l = 0; l < weight_ids.size(); ++l) {
      x = tape.add_row_broadcast(tape.matmul(x, weight_ids[l]), bias_ids[l]);
      if (l + 1 < weight_ids.size())
        x = cfg.activation == Activation::tanh ? tape.tanh_activation(x)
                                               : tape.relu(x);
    }
    ValueId probs = tape.sigmoid(x);
    ValueId picked = tape.gather_elements(probs, batch.positions);
    std::vector<double> label_data(batch.labels.begin(), batch.labels.end());
    ValueId labels = tape.input(Tensor::column(label_data));
    ValueId loss = tape.bce_mean(picked, labels);

    std::vector<ValueId> param_ids = {emb_id};
    param_ids.insert(param_ids.end(), weight_ids.begin(), weight_ids.end());
    param_ids.insert(param_ids.end(), bias_ids.begin(), bias_ids.end());
    std::vector<Tensor*> params = decayed;
    params.insert(params.end(), plain.begin(), plain.end());

    record.train_loss_curve.reserve(cfg.steps);
    for (int step = 1; step <= cfg.steps; ++step) {
      record.train_loss_curve.push_back(tape.value(loss).data[0]);
      tape.backward(loss);
      std::vector<const Tensor*> dec_grads, plain_grads;
      dec_grads.push_back(&tape.grad(emb_id));
      for (ValueId id : weight_ids) dec_grads.push_back(&tape.grad(id));
      for (ValueId id : bias_ids) plain_grads.push_back(&tape.grad(id));
      adam_step(decayed, dec_grads, decayed_state, decayed_cfg);
      adam_step(plain, plain_grads, plain_state, plain_cfg);
      for (std::size_t p = 0; p < params.size(); ++p)
        tape.set_leaf(param_ids[p], *params[p]);
      tape.forward();
      const Tensor& picked_now = tape.value(picked);
      EvalResult train_now =
          score_probabilities(picked_now.data, batch.labels);
      if (train_now.accuracy == 1.0) record.converged = true;
    }
  } catch (const NonFiniteError& e) {
    return finish(true, e.what());
  }
  return finish(false, "");
}

EvalResult evaluate(const Representation& rep, const DecoderModel& dec,
                    const std::vector<Triple>& triples) {
  rep.validate();
  dec.validate();
  if (triples.empty()) throw std::invalid_argument("evaluate: no triples");
  if (dec.input_dim() != 2 * rep.dim())
    throw ShapeError("evaluate: decoder input dim does not match representation");
  int m = dec.output_dim();
  TripleBatch batch = build_triple_batch(triples, m);
  Tensor features = concat_rows(gather_rows(rep.matrix, batch.subject_rows),
                                gather_rows(rep.matrix, batch.object_rows));
  Tensor probs = dec.forward(features);
  std::vector<double> picked(batch.positions.size());
  for (std::size_t i = 0; i < batch.positions.size(); ++i)
    picked[i] = probs.data[batch.positions[i]];
  return score_probabilities(picked, batch.labels);
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::depth: return "depth";
    case SweepAxis::width: return "width";
    case SweepAxis::weight_decay: return "weight_decay";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "depth") return SweepAxis::depth;
  if (name == "width") return SweepAxis::width;
  if (name == "weight_decay") return SweepAxis::weight_decay;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

SweepTable goldilocks_sweep(const KnowledgeGraph& kg, SweepAxis axis,
                            const std::vector<double>& grid, int repeats,
                            const TrainConfig& base, int threads) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (repeats < 1) throw std::invalid_argument("sweep: repeats >= 1");
  std::vector<double> values = grid;
  std::sort(values.begin(), values.end());

  SweepTable table;
  table.axis = axis;
  table.rows.resize(values.size() * repeats);

  parallel_for(table.rows.size(), threads, [&](std::size_t job) {
    std::size_t vi = job / repeats;
    int repeat = static_cast<int>(job % repeats);
    TrainConfig cfg = base;
    double value = values[vi];
    switch (axis) {
      case SweepAxis::depth: cfg.decoder_depth = static_cast<int>(value); break;
      case SweepAxis::width: cfg.decoder_width = static_cast<int>(value); break;
      case SweepAxis::weight_decay: cfg.weight_decay = value; break;
    }
    cfg.seed = derive_seed(base.seed, vi + 1, static_cast<std::uint64_t>(repeat));
    TripleSplit split =
        split_triples(kg, cfg.train_fraction, derive_seed(cfg.seed, 0x5b1d7));
    SweepRow row;
    row.axis_value = value;
    row.repeat = repeat;
    row.seed = cfg.seed;
    RunRecord run = train(kg, split, cfg);
    row.failed = run.failed;
    if (!run.failed) {
      row.train_acc = run.final_train_accuracy;
      row.test_acc = run.final_test_accuracy;
      row.train_loss = evaluate(run.representation, run.decoder, split.train).mean_loss;
      row.test_loss = evaluate(run.representation, run.decoder, split.test).mean_loss;
    }
    table.rows[job] = row;
  });

  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    SweepSummary s;
    s.axis_value = values[vi];
    std::vector<double> train, test;
    for (int r = 0; r < repeats; ++r) {
      const SweepRow& row = table.rows[vi * repeats + r];
      s.runs += 1;
      if (row.failed) {
        s.failures += 1;
        continue;
      }
      train.push_back(row.train_acc);
      test.push_back(row.test_acc);
    }
    auto mean_sd = [](const std::vector<double>& v, double& mean, double& sd) {
      if (v.empty()) {
        mean = sd = 0.0;
        return;
      }
      mean = 0.0;
      for (double x : v) mean += x;
      mean /= v.size();
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      sd = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
    };
    mean_sd(train, s.mean_train_acc, s.sd_train_acc);
    mean_sd(test, s.mean_test_acc, s.sd_test_acc);
    table.summary.push_back(s);
  }
  return table;
}

}  // namespace kglab
