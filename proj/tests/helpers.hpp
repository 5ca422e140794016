#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kglab/family_tree.hpp"
#include "kglab/rng.hpp"
#include "kglab/tape.hpp"
#include "kglab/tensor.hpp"
#include "kglab/trainer.hpp"

namespace kglab::testing {

// Central finite differences against the tape's analytic gradients.
// Returns the worst relative error over every element of every listed
// parameter. Independent of the backward pass: only forward re-evaluation.
inline double max_gradient_error(
    Tape& tape, ValueId loss,
    const std::vector<std::pair<ValueId, Tensor*>>& params, double h = 1e-5) {
  tape.forward();
  tape.backward(loss);
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (const auto& [id, master] : params) {
    (void)master;
    analytic.push_back(tape.grad(id));
  }
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto [id, master] = params[p];
    for (std::size_t i = 0; i < master->size(); ++i) {
      double original = master->data[i];
      master->data[i] = original + h;
      tape.set_leaf(id, *master);
      tape.forward();
      double up = tape.value(loss).data[0];
      master->data[i] = original - h;
      tape.set_leaf(id, *master);
      tape.forward();
      double down = tape.value(loss).data[0];
      master->data[i] = original;
      tape.set_leaf(id, *master);
      double fd = (up - down) / (2.0 * h);
      double a = analytic[p].data[i];
      double err = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-6});
      worst = std::max(worst, err);
    }
  }
  tape.forward();
  return worst;
}

// Embeds a family forest so that the componentwise-dominance order over the
// points equals the ancestor partial order exactly: a DFS over "couple
// units" assigns nested (preorder, n - postorder) intervals, so descendants
// strictly dominate their ancestors in both coordinates and unrelated
// people are incomparable. Useful as a ground-truth cone pose.
inline Representation canonical_cone_pose(const BaseFacts& base) {
  base.validate();
  int n = base.num_persons();
  std::vector<int> unit_of(n, -1);
  std::vector<std::vector<int>> unit_members;
  for (auto [a, b] : base.spouse_pairs) {
    if (unit_of[a] != -1 || unit_of[b] != -1)
      throw std::invalid_argument("cone pose: supports at most one marriage each");
    unit_of[a] = unit_of[b] = static_cast<int>(unit_members.size());
    unit_members.push_back({a, b});
  }
  for (int i = 0; i < n; ++i)
    if (unit_of[i] == -1) {
      unit_of[i] = static_cast<int>(unit_members.size());
      unit_members.push_back({i});
    }
  int units = static_cast<int>(unit_members.size());
  std::vector<std::vector<int>> unit_children(units);
  std::vector<int> unit_parent(units, -1);
  for (auto [p, c] : base.parent_pairs) {
    int pu = unit_of[p], cu = unit_of[c];
    if (unit_parent[cu] == -1 && pu != cu) {
      unit_parent[cu] = pu;
      unit_children[pu].push_back(cu);
    }
  }
  std::vector<double> pre(units), post(units);
  double counter = 0;
  std::function<void(int)> dfs = [&](int u) {
    pre[u] = counter++;
    for (int c : unit_children[u]) dfs(c);
    post[u] = counter++;
  };
  for (int u = 0; u < units; ++u)
    if (unit_parent[u] == -1) dfs(u);

  Representation rep;
  rep.objects.reserve(n);
  for (const auto& [id, g] : base.persons) {
    (void)g;
    rep.objects.push_back(id);
  }
  rep.matrix = Tensor::zeros({static_cast<std::size_t>(n), 2});
  for (int u = 0; u < units; ++u) {
    for (std::size_t k = 0; k < unit_members[u].size(); ++k) {
      int person = unit_members[u][k];
      double offset = k == 0 ? 0.0 : 0.25;
      rep.matrix.at(person, 0) = pre[u] + offset;
      rep.matrix.at(person, 1) = counter - post[u] - offset;
    }
  }
  return rep;
}

inline Representation scalar_representation(const std::vector<double>& values) {
  Representation rep;
  rep.matrix = Tensor::zeros({values.size(), 1});
  for (std::size_t i = 0; i < values.size(); ++i) {
    rep.matrix.data[i] = values[i];
    rep.objects.push_back("x" + std::to_string(i));
  }
  return rep;
}

}  // namespace kglab::testing
