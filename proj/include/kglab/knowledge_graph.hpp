#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kglab {

// n objects, m named binary relations, one ordered edge set per relation.
// Edge sets are kept sorted and duplicate-free; validate() enforces the
// invariants after hand construction or deserialization.
struct KnowledgeGraph {
  std::vector<std::string> objects;
  std::vector<std::string> relations;
  std::vector<std::vector<std::pair<int, int>>> edges;

  int num_objects() const { return static_cast<int>(objects.size()); }
  int num_relations() const { return static_cast<int>(relations.size()); }
  std::size_t num_triples() const {
    return static_cast<std::size_t>(num_relations()) * num_objects() *
           num_objects();
  }

  // -1 when the name is unknown.
  int relation_index(const std::string& name) const;
  bool has_edge(int relation, int i, int j) const;
  // Dense n×n 0/1 matrix for one relation.
  std::vector<std::uint8_t> dense_relation(int relation) const;

  void add_edge(int relation, int i, int j);
  void sort_edges();
  void validate() const;

  bool operator==(const KnowledgeGraph&) const = default;
};

enum class PropertyKind { symmetric, antisymmetric, transitive, meta_transitive };

std::string to_string(PropertyKind kind);
PropertyKind property_kind_from_string(const std::string& name);

// symmetric/antisymmetric/transitive name one relation; meta_transitive names
// r1, r2, r3 and asserts r1(i,j) ∧ r2(j,k) ⇒ r3(i,k).
struct PropertySpec {
  PropertyKind kind = PropertyKind::transitive;
  std::vector<std::string> relations;

  static PropertySpec single(PropertyKind kind, std::string relation) {
    return {kind, {std::move(relation)}};
  }
  static PropertySpec meta(std::string r1, std::string r2, std::string r3) {
    return {PropertyKind::meta_transitive,
            {std::move(r1), std::move(r2), std::move(r3)}};
  }
  std::string describe() const;
};

// A witness violating the property identity: (i,j) for the pair kinds,
// (i,j,k) for the transitive kinds.
struct PropertyViolation {
  std::vector<int> witness;
  bool operator==(const PropertyViolation&) const = default;
};

// Exhaustive check over all pairs (resp. triples). Empty result means the
// property holds. Throws std::invalid_argument for unknown relation names.
std::vector<PropertyViolation> check_property(const KnowledgeGraph& kg,
                                              const PropertySpec& spec);

// One labeled link-prediction example: does `relation` hold for (subject,
// object)?
struct Triple {
  int relation = 0;
  int subject = 0;
  int object = 0;
  int label = 0;
  bool operator==(const Triple&) const = default;
};

// Exact partition of all m·n² labeled triples (self-pairs included).
struct TripleSplit {
  std::vector<Triple> train;
  std::vector<Triple> test;
  std::uint64_t seed = 0;
  double fraction = 0.0;
};

std::vector<Triple> all_triples(const KnowledgeGraph& kg);
TripleSplit split_triples(const KnowledgeGraph& kg, double fraction,
                          std::uint64_t seed);

// Single-relation graph with an edge (i,j) iff i > j.
KnowledgeGraph greater_than_kg(int n);

// Copy of kg with one extra relation equal to the union of `members`.
KnowledgeGraph with_union_relation(const KnowledgeGraph& kg,
                                   const std::vector<std::string>& members,
                                   const std::string& name);

}  // namespace kglab
