#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kglab/rng.hpp"
#include "kglab/tape.hpp"
#include "kglab/tensor.hpp"

using namespace kglab;

TEST_CASE("sigmoid value and gradient at zero") {
  Tape tape;
  ValueId x = tape.param(Tensor::scalar(0.0));
  ValueId s = tape.sigmoid(x);
  CHECK(tape.value(s).data[0] == doctest::Approx(0.5).epsilon(1e-15));
  tape.backward(s);
  CHECK(tape.grad(x).data[0] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("matmul shape rule and mismatch") {
  Tape tape;
  ValueId a = tape.input(Tensor::zeros({2, 3}));
  ValueId b = tape.input(Tensor::zeros({3, 1}));
  ValueId c = tape.matmul(a, b);
  CHECK(tape.value(c).shape == std::vector<std::size_t>{2, 1});
  ValueId bad = tape.input(Tensor::zeros({4, 1}));
  CHECK_THROWS_AS((void)tape.matmul(a, bad), ShapeError);
}

TEST_CASE("non-finite results are hard errors") {
  Tape tape;
  ValueId a = tape.param(Tensor::matrix(1, 1, {1e308}));
  ValueId b = tape.input(Tensor::matrix(1, 1, {1e308}));
  CHECK_THROWS_AS((void)tape.matmul(a, b), NonFiniteError);
}

TEST_CASE("gradients accumulate when a value is reused") {
  Tape tape;
  ValueId x = tape.param(Tensor::scalar(0.3));
  ValueId doubled = tape.add(x, x);
  ValueId y = tape.input(Tensor::scalar(1.0));
  ValueId loss = tape.bce_mean(tape.sigmoid(doubled), y);
  tape.backward(loss);
  // d/dx bce(sigmoid(2x), 1) = 2 * (sigmoid(2x) - 1)
  double expected = 2.0 * (sigmoid_scalar(0.6) - 1.0);
  CHECK(tape.grad(x).data[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("finite differences match analytic gradients on a 37-parameter MLP") {
  Rng rng(7);
  const std::size_t batch = 5;
  Tensor features = Tensor::zeros({batch, 2});
  for (double& v : features.data) v = rng.normal();
  Tensor labels = Tensor::zeros({batch, 1});
  for (double& v : labels.data) v = rng.bernoulli(0.5) ? 1.0 : 0.0;

  // 2 -> 4 -> 4 -> 1 with biases: 12 + 20 + 5 = 37 parameters.
  std::vector<std::size_t> dims = {2, 4, 4, 1};
  std::vector<Tensor> weights, biases;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Tensor w = Tensor::zeros({dims[l], dims[l + 1]});
    for (double& v : w.data) v = rng.normal(0.0, 0.7);
    weights.push_back(std::move(w));
    Tensor b = Tensor::zeros({dims[l + 1]});
    for (double& v : b.data) v = rng.normal(0.0, 0.2);
    biases.push_back(std::move(b));
  }

  Tape tape;
  std::vector<std::pair<ValueId, Tensor*>> params;
  ValueId x = tape.input(features);
  std::size_t total = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    ValueId w = tape.param(weights[l]);
    ValueId b = tape.param(biases[l]);
    params.push_back({w, &weights[l]});
    params.push_back({b, &biases[l]});
    total += weights[l].size() + biases[l].size();
    x = tape.add_row_broadcast(tape.matmul(x, w), b);
    if (l + 1 < weights.size()) x = tape.tanh_activation(x);
  }
  CHECK(total == 37);
  ValueId loss = tape.bce_mean(tape.sigmoid(x), tape.input(labels));
  CHECK(testing::max_gradient_error(tape, loss, params) < 1e-4);
}

TEST_CASE("finite differences cover every tape primitive") {
  Rng rng(11);
  Tensor m = Tensor::zeros({4, 3});
  for (double& v : m.data) v = rng.normal();
  Tensor other = Tensor::zeros({4, 3});
  for (double& v : other.data) v = rng.normal();

  Tape tape;
  ValueId a = tape.param(m);
  ValueId b = tape.param(other);
  ValueId mixed = tape.concat_rows(tape.multiply_elements(a, b),
                                   tape.subtract(a, b));
  ValueId gathered = tape.gather_rows(mixed, {0, 2, 2, 3});
  ValueId relued = tape.relu(tape.scale(gathered, 0.7));
  ValueId squashed = tape.sigmoid(tape.tanh_activation(relued));
  ValueId prod = tape.row_product(tape.gather_rows(squashed, {0, 1, 3}));
  ValueId picked = tape.gather_elements(prod, {0, 1, 2, 1});
  Tensor labels = Tensor::column({1.0, 0.0, 1.0, 0.0});
  ValueId loss = tape.bce_mean(picked, tape.input(labels));
  CHECK(testing::max_gradient_error(tape, loss, {{a, &m}, {b, &other}}) < 1e-4);
}

TEST_CASE("adam with zero gradient leaves parameters untouched") {
  Tensor w = Tensor::row({1.0, -2.0, 3.0});
  Tensor g = Tensor::zeros({1, 3});
  std::vector<Tensor*> params = {&w};
  AdamState state = AdamState::for_params(params);
  AdamConfig cfg;
  adam_step(params, {&g}, state, cfg);
  CHECK(state.step == 1);
  CHECK(w.data == std::vector<double>{1.0, -2.0, 3.0});
}

TEST_CASE("decoupled weight decay shrinks parameters by lr*decay") {
  Tensor w = Tensor::row({1.0, -2.0});
  Tensor g = Tensor::zeros({1, 2});
  std::vector<Tensor*> params = {&w};
  AdamState state = AdamState::for_params(params);
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.weight_decay = 0.1;
  adam_step(params, {&g}, state, cfg);
  CHECK(w.data[0] == doctest::Approx(1.0 * (1.0 - 0.001)).epsilon(1e-15));
  CHECK(w.data[1] == doctest::Approx(-2.0 * (1.0 - 0.001)).epsilon(1e-15));
  adam_step(params, {&g}, state, cfg);
  CHECK(w.data[0] == doctest::Approx(1.0 * (1.0 - 0.001) * (1.0 - 0.001)));
}

TEST_CASE("adam drives a quadratic toward zero") {
  Tensor w = Tensor::scalar(1.0);
  std::vector<Tensor*> params = {&w};
  AdamState state = AdamState::for_params(params);
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  for (int step = 0; step < 100; ++step) {
    Tensor g = Tensor::scalar(2.0 * w.data[0]);
    adam_step(params, {&g}, state, cfg);
  }
  CHECK(std::abs(w.data[0]) < 0.5);
}

TEST_CASE("adam rejects mismatched shapes") {
  Tensor w = Tensor::row({1.0, 2.0});
  Tensor g = Tensor::row({1.0});
  std::vector<Tensor*> params = {&w};
  AdamState state = AdamState::for_params(params);
  CHECK_THROWS_AS(adam_step(params, {&g}, state, AdamConfig{}), ShapeError);
}

TEST_CASE("tape replay is deterministic") {
  auto run = [] {
    Rng rng(3);
    Tensor w = Tensor::zeros({2, 2});
    for (double& v : w.data) v = rng.normal();
    Tensor x = Tensor::matrix(3, 2, {0.1, -0.2, 0.4, 0.8, -1.1, 0.5});
    Tensor labels = Tensor::column({1.0, 0.0, 1.0});
    Tape tape;
    ValueId wid = tape.param(w);
    ValueId probs = tape.sigmoid(tape.matmul(tape.input(x), wid));
    ValueId picked = tape.gather_elements(probs, {0, 3, 4});
    ValueId loss = tape.bce_mean(picked, tape.input(labels));
    std::vector<Tensor*> params = {&w};
    AdamState state = AdamState::for_params(params);
    AdamConfig cfg;
    cfg.learning_rate = 0.05;
    for (int i = 0; i < 50; ++i) {
      tape.backward(loss);
      std::vector<const Tensor*> grads = {&tape.grad(wid)};
      adam_step(params, grads, state, cfg);
      tape.set_leaf(wid, w);
      tape.forward();
    }
    return w.data;
  };
  CHECK(run() == run());
}
