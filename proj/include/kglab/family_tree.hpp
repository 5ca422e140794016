#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kglab/knowledge_graph.hpp"

namespace kglab {

enum class Gender { male, female };

std::string to_string(Gender g);
Gender gender_from_string(const std::string& name);

// Raw genealogy: people with genders, parent->child pairs, and unordered
// spouse pairs (stored with the smaller index first). Everything else (the
// 18 named relations) is derived.
struct BaseFacts {
  std::vector<std::pair<std::string, Gender>> persons;
  std::vector<std::pair<int, int>> parent_pairs;
  std::vector<std::pair<int, int>> spouse_pairs;

  int num_persons() const { return static_cast<int>(persons.size()); }
  int person_index(const std::string& id) const;  // -1 if unknown
  void normalize();  // sort + dedupe both pair lists, orient spouse pairs
  // Checks: indices in range, unique ids, parent graph acyclic, at most two
  // parents per person, spouse pairs disjoint from parent pairs.
  void validate() const;

  bool operator==(const BaseFacts&) const = default;
};

// Random multi-generation genealogy. Generation 0 is a founder couple; each
// couple has 1..max_children children (0 when max_children is 0); a child in
// a non-final generation marries a new opposite-gender spouse with
// probability spouse_probability, and only married children have children.
// Deterministic per seed. Invalid arguments are rejected, not clamped.
BaseFacts generate_synthetic_tree(int generations, int max_children,
                                  double spouse_probability,
                                  std::uint64_t seed);

enum class RelationSet { descendant_only, full_18 };

// The 18 relation names in canonical order.
const std::vector<std::string>& family_relation_names();

// Derives a KnowledgeGraph from base facts.
//
// descendant_only: the single relation descendant(i, j), which holds iff j
// is an ancestor of i (i is the one who descends). full_18: father, mother,
// husband, wife, son, daughter, brother, sister, grandfather, grandmother,
// aunt, uncle, nephew, niece, brother-in-law, sister-in-law, ancestor,
// descendant, under standard kinship readings (siblings share at least one
// parent; uncle/aunt include spouses of parents' siblings; nephew/niece are
// their converses gendered by the subject; in-law = sibling-of-spouse or
// spouse-of-sibling).
KnowledgeGraph derive_kg(const BaseFacts& base, RelationSet relation_set);

// Generation number per person: founders 0, children one past their highest
// parent, married-in spouses matched to their partner's generation.
std::vector<int> generation_index(const BaseFacts& base);

// Gender per person as 0/1 labels (male=0, female=1).
std::vector<int> gender_labels(const BaseFacts& base);

}  // namespace kglab
