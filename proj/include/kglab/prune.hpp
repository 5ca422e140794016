#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "kglab/knowledge_graph.hpp"

namespace kglab {

// Yes/no interface for "does `relation` hold between subject and object?".
// Implementations may throw; prune() records that as a rejection reason.
class RelationOracle {
 public:
  virtual ~RelationOracle() = default;
  virtual bool answer(int subject, int relation, int object) const = 0;
};

// Answers straight from the knowledge graph.
class ExactOracle : public RelationOracle {
 public:
  explicit ExactOracle(const KnowledgeGraph& kg) : kg_(&kg) {}
  bool answer(int subject, int relation, int object) const override {
    return kg_->has_edge(relation, subject, object);
  }

 private:
  const KnowledgeGraph* kg_;
};

// Flips the true answer with a per-question probability: the global
// flip_probability, or the larger per-node probability of the two endpoints
// when per-node values are set. Decisions are hashed from (seed, question),
// so an answer is stable no matter how often or in what order it is asked.
class NoisyOracle : public RelationOracle {
 public:
  NoisyOracle(const KnowledgeGraph& kg, double flip_probability,
              std::uint64_t seed);
  void set_node_flip_probability(int node, double probability);
  bool answer(int subject, int relation, int object) const override;

 private:
  const KnowledgeGraph* kg_;
  double flip_probability_;
  std::uint64_t seed_;
  std::map<int, double> node_flip_;
};

// Explicit answer table; unlisted questions fall back to the knowledge
// graph when fallback is enabled, otherwise they throw.
class ScriptedOracle : public RelationOracle {
 public:
  using Key = std::tuple<int, int, int>;  // subject, relation, object

  explicit ScriptedOracle(std::map<Key, bool> table)
      : table_(std::move(table)) {}
  ScriptedOracle(std::map<Key, bool> table, const KnowledgeGraph& fallback)
      : table_(std::move(table)), fallback_(&fallback) {}

  bool answer(int subject, int relation, int object) const override;

 private:
  std::map<Key, bool> table_;
  const KnowledgeGraph* fallback_ = nullptr;
};

struct NodeTally {
  int node = 0;
  std::size_t asked = 0;
  std::size_t correct = 0;
  std::size_t positive_total = 0;
  std::size_t positive_correct = 0;
};

struct PruneResult {
  std::vector<int> accepted;  // in visit order; the root is always first
  std::vector<NodeTally> tallies;
  struct Rejection {
    int node = 0;
    std::string reason;
  };
  std::vector<Rejection> rejected;
  std::string describe(const KnowledgeGraph& kg) const;
};

// Knowledge-extraction BFS from `root` over the union of the graph's edges
// (direction-agnostic; neighbors in ascending index order). The root is
// accepted unconditionally. Every later node v is asked, for each already
// accepted node u and every relation r, both (v, r, u) and (u, r, v); v is
// accepted iff every question whose true answer is yes was answered yes AND
// the overall correct fraction strictly exceeds `threshold` (a perfect
// score always passes, so threshold = 1 with an exact oracle accepts
// everything). Children of rejected nodes are still visited.
PruneResult prune(const KnowledgeGraph& kg, int root,
                  const RelationOracle& oracle, double threshold);
PruneResult prune(const KnowledgeGraph& kg, const std::string& root_id,
                  const RelationOracle& oracle, double threshold);

}  // namespace kglab
