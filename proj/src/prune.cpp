#include "kglab/prune.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kglab/rng.hpp"

namespace kglab {

NoisyOracle::NoisyOracle(const KnowledgeGraph& kg, double flip_probability,
                         std::uint64_t seed)
    : kg_(&kg), flip_probability_(flip_probability), seed_(seed) {
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
    throw std::invalid_argument("noisy oracle: flip probability in [0, 1]");
}

void NoisyOracle::set_node_flip_probability(int node, double probability) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw std::invalid_argument("noisy oracle: flip probability in [0, 1]");
  node_flip_[node] = probability;
}

bool NoisyOracle::answer(int subject, int relation, int object) const {
  double p = flip_probability_;
  if (!node_flip_.empty()) {
    auto it = node_flip_.find(subject);
    if (it != node_flip_.end()) p = std::max(p, it->second);
    it = node_flip_.find(object);
    if (it != node_flip_.end()) p = std::max(p, it->second);
  }
  bool truth = kg_->has_edge(relation, subject, object);
  std::uint64_t h = derive_seed(
      seed_, static_cast<std::uint64_t>(subject) << 32 |
                 static_cast<std::uint64_t>(static_cast<std::uint32_t>(object)),
      static_cast<std::uint64_t>(relation));
  double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < p ? !truth : truth;
}

bool ScriptedOracle::answer(int subject, int relation, int object) const {
  auto it = table_.find({subject, relation, object});
  if (it != table_.end()) return it->second;
  if (fallback_) return fallback_->has_edge(relation, subject, object);
  throw std::out_of_range("scripted oracle: no entry for question");
}

std::string PruneResult::describe(const KnowledgeGraph& kg) const {
  std::ostringstream os;
  os << "accepted " << accepted.size() << " node(s):";
  for (int v : accepted) os << " " << kg.objects[v];
  os << "\n";
  for (const auto& r : rejected)
    os << "rejected " << kg.objects[r.node] << ": " << r.reason << "\n";
  return os.str();
}

PruneResult prune(const KnowledgeGraph& kg, int root,
                  const RelationOracle& oracle, double threshold) {
  kg.validate();
  if (root < 0 || root >= kg.num_objects())
    throw std::invalid_argument("prune: root node does not exist");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("prune: threshold in (0, 1]");

  int n = kg.num_objects();
  std::vector<std::set<int>> neighbors(n);
  for (const auto& es : kg.edges)
    for (auto [i, j] : es) {
      if (i == j) continue;
      neighbors[i].insert(j);
      neighbors[j].insert(i);
    }

  PruneResult result;
  std::vector<bool> queued(n, false);
  std::deque<int> frontier;
  frontier.push_back(root);
  queued[root] = true;

  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop_front();

    NodeTally tally;
    tally.node = v;
    bool is_root = result.accepted.empty() && v == root;
    if (is_root) {
      // No accepted nodes to ask about yet: vacuously accepted.
      result.accepted.push_back(v);
      result.tallies.push_back(tally);
    } else {
      bool missed_positive = false;
      std::optional<std::string> oracle_error;
      for (int u : result.accepted) {
        for (int r = 0; r < kg.num_relations() && !oracle_error; ++r) {
          const std::pair<int, int> questions[2] = {{v, u}, {u, v}};
          for (auto [s, o] : questions) {
            bool truth = kg.has_edge(r, s, o);
            bool reply;
            try {
              reply = oracle.answer(s, r, o);
            } catch (const std::exception& e) {
              oracle_error = e.what();
              break;
            }
            tally.asked += 1;
            if (reply == truth) tally.correct += 1;
            if (truth) {
              tally.positive_total += 1;
              if (reply)
                tally.positive_correct += 1;
              else
                missed_positive = true;
            }
          }
        }
        if (oracle_error) break;
      }
      result.tallies.push_back(tally);
      if (oracle_error) {
        result.rejected.push_back({v, "oracle failure: " + *oracle_error});
      } else {
        double fraction = tally.asked == 0
                              ? 1.0
                              : static_cast<double>(tally.correct) /
                                    static_cast<double>(tally.asked);
        bool perfect = tally.correct == tally.asked;
        if (missed_positive) {
          result.rejected.push_back({v, "missed a positive question"});
        } else if (!perfect && !(fraction > threshold)) {
          std::ostringstream os;
          os << "correct fraction " << fraction << " not above threshold "
             << threshold;
          result.rejected.push_back({v, os.str()});
        } else {
          result.accepted.push_back(v);
        }
      }
    }

    for (int u : neighbors[v]) {
      if (queued[u]) continue;
      queued[u] = true;
      frontier.push_back(u);
    }
  }
  return result;
}

PruneResult prune(const KnowledgeGraph& kg, const std::string& root_id,
                  const RelationOracle& oracle, double threshold) {
  for (int i = 0; i < kg.num_objects(); ++i)
    if (kg.objects[i] == root_id) return prune(kg, i, oracle, threshold);
  throw std::invalid_argument("prune: root node does not exist: " + root_id);
}

}  // namespace kglab
