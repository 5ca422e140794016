#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "kglab/family_tree.hpp"
#include "kglab/knowledge_graph.hpp"
#include "kglab/serialize.hpp"

using namespace kglab;

namespace {

// Adam(M) -> Bob(M) -> Carol(F): two parent edges, no spouses.
BaseFacts three_chain() {
  BaseFacts base;
  base.persons = {{"Adam", Gender::male},
                  {"Bob", Gender::male},
                  {"Carol", Gender::female}};
  base.parent_pairs = {{0, 1}, {1, 2}};
  return base;
}

bool edge(const KnowledgeGraph& kg, const std::string& rel, int i, int j) {
  return kg.has_edge(kg.relation_index(rel), i, j);
}

}  // namespace

TEST_CASE("degenerate tree is a single founder couple") {
  BaseFacts base = generate_synthetic_tree(1, 0, 0.0, 0);
  CHECK(base.num_persons() == 2);
  CHECK(base.parent_pairs.empty());
  CHECK(base.spouse_pairs.size() == 1);
}

TEST_CASE("tree generation is deterministic per seed") {
  BaseFacts a = generate_synthetic_tree(3, 2, 1.0, 7);
  BaseFacts b = generate_synthetic_tree(3, 2, 1.0, 7);
  CHECK(a == b);
  BaseFacts c = generate_synthetic_tree(3, 2, 1.0, 8);
  CHECK_FALSE(a == c);
}

TEST_CASE("generated trees satisfy the structural invariants, brute-forced") {
  BaseFacts base = generate_synthetic_tree(4, 3, 0.5, 1);
  int n = base.num_persons();
  // Parent counts, independent of validate().
  std::vector<int> parent_count(n, 0);
  std::vector<std::vector<int>> parents(n);
  for (auto [p, c] : base.parent_pairs) {
    parent_count[c] += 1;
    parents[c].push_back(p);
  }
  for (int i = 0; i < n; ++i) CHECK(parent_count[i] <= 2);
  // Acyclicity: walk every ancestor chain from every person.
  for (int start = 0; start < n; ++start) {
    std::set<int> reached;
    std::vector<int> stack = parents[start];
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (!reached.insert(v).second) continue;
      for (int p : parents[v]) stack.push_back(p);
    }
    CHECK(reached.count(start) == 0);
  }
  // Non-founders have at least one parent by construction: everyone without
  // parents must be a member of generation 0 or married in.
  std::vector<int> gen = generation_index(base);
  for (int i = 0; i < n; ++i)
    if (parent_count[i] == 0) {
      bool married = false;
      for (auto [a, b] : base.spouse_pairs) married |= a == i || b == i;
      CHECK((gen[i] == 0 || married));
    }
}

TEST_CASE("invalid generator arguments are usage errors") {
  CHECK_THROWS_AS(generate_synthetic_tree(0, 2, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic_tree(2, -1, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic_tree(2, 2, 1.5, 1), std::invalid_argument);
}

TEST_CASE("relation derivation on the three-person chain") {
  KnowledgeGraph kg = derive_kg(three_chain(), RelationSet::full_18);
  CHECK(kg.relations == family_relation_names());
  CHECK(edge(kg, "grandfather", 0, 2));
  CHECK(edge(kg, "son", 1, 0));
  CHECK(edge(kg, "ancestor", 0, 2));
  CHECK(edge(kg, "father", 0, 1));
  CHECK(edge(kg, "descendant", 2, 0));
  CHECK_FALSE(edge(kg, "descendant", 0, 2));
  // No shared-parent pairs anywhere: sister is empty.
  CHECK(kg.edges[kg.relation_index("sister")].empty());
  CHECK(kg.edges[kg.relation_index("brother")].empty());
}

TEST_CASE("descendant_only derives the converse of ancestor") {
  BaseFacts base = generate_synthetic_tree(4, 3, 0.6, 11);
  KnowledgeGraph full = derive_kg(base, RelationSet::full_18);
  KnowledgeGraph desc = derive_kg(base, RelationSet::descendant_only);
  REQUIRE(desc.relations == std::vector<std::string>{"descendant"});
  int anc = full.relation_index("ancestor");
  int n = full.num_objects();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      CHECK(desc.has_edge(0, i, j) == full.has_edge(anc, j, i));
}

TEST_CASE("derive_kg is pure") {
  BaseFacts base = generate_synthetic_tree(3, 2, 0.5, 5);
  CHECK(derive_kg(base, RelationSet::full_18) ==
        derive_kg(base, RelationSet::full_18));
}

TEST_CASE("property checks on the chain") {
  KnowledgeGraph kg = derive_kg(three_chain(), RelationSet::full_18);
  CHECK(check_property(kg, PropertySpec::single(PropertyKind::transitive,
                                                "ancestor"))
            .empty());
  CHECK(check_property(kg, PropertySpec::meta("father", "father", "grandfather"))
            .empty());
  // parent = father ∪ mother is not transitive on a 3-chain: exactly the
  // (Adam, Bob, Carol) witness.
  KnowledgeGraph with_parent = with_union_relation(kg, {"father", "mother"}, "parent");
  auto violations = check_property(
      with_parent, PropertySpec::single(PropertyKind::transitive, "parent"));
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].witness == std::vector<int>{0, 1, 2});
}

TEST_CASE("unknown relation names are rejected") {
  KnowledgeGraph kg = greater_than_kg(3);
  CHECK_THROWS_AS(check_property(kg, PropertySpec::single(
                                         PropertyKind::transitive, "nope")),
                  std::invalid_argument);
}

TEST_CASE("derived full graphs satisfy the kinship identities") {
  for (std::uint64_t seed : {1, 2, 3}) {
    BaseFacts base = generate_synthetic_tree(4, 3, 0.7, seed);
    KnowledgeGraph kg = derive_kg(base, RelationSet::full_18);
    CHECK(check_property(kg, PropertySpec::single(PropertyKind::transitive,
                                                  "ancestor"))
              .empty());
    CHECK(check_property(kg, PropertySpec::single(PropertyKind::antisymmetric,
                                                  "ancestor"))
              .empty());
    int n = kg.num_objects();
    int anc = kg.relation_index("ancestor");
    int desc = kg.relation_index("descendant");
    int husband = kg.relation_index("husband");
    int wife = kg.relation_index("wife");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CHECK(kg.has_edge(desc, i, j) == kg.has_edge(anc, j, i));
        CHECK(kg.has_edge(husband, i, j) == kg.has_edge(wife, j, i));
      }
    KnowledgeGraph ext = with_union_relation(kg, {"father", "mother"}, "parent");
    ext = with_union_relation(ext, {"grandfather", "grandmother"}, "grandparent");
    CHECK(check_property(ext, PropertySpec::meta("parent", "parent", "grandparent"))
              .empty());
  }
}

TEST_CASE("greater_than_kg matches its definition") {
  KnowledgeGraph kg = greater_than_kg(3);
  std::vector<std::pair<int, int>> expected = {{1, 0}, {2, 0}, {2, 1}};
  CHECK(kg.edges[0] == expected);
  CHECK(check_property(kg, PropertySpec::single(PropertyKind::antisymmetric,
                                                "greater_than"))
            .empty());
  CHECK(check_property(kg, PropertySpec::single(PropertyKind::transitive,
                                                "greater_than"))
            .empty());
  CHECK_THROWS_AS(greater_than_kg(1), std::invalid_argument);
}

TEST_CASE("split counting and determinism") {
  KnowledgeGraph kg = greater_than_kg(4);
  TripleSplit split = split_triples(kg, 0.75, 0);
  CHECK(split.train.size() == 12);
  CHECK(split.test.size() == 4);
  TripleSplit again = split_triples(kg, 0.75, 0);
  CHECK(split.train == again.train);
  CHECK(split.test == again.test);

  KnowledgeGraph wide;
  for (int i = 0; i < 10; ++i) wide.objects.push_back("o" + std::to_string(i));
  for (const auto& name : family_relation_names()) wide.relations.push_back(name);
  wide.edges.resize(18);
  TripleSplit half = split_triples(wide, 0.5, 3);
  CHECK(half.train.size() == 900);
  CHECK(half.test.size() == 900);
}

TEST_CASE("split partitions the triple universe exactly") {
  BaseFacts base = generate_synthetic_tree(3, 3, 0.8, 2);
  KnowledgeGraph kg = derive_kg(base, RelationSet::full_18);
  TripleSplit split = split_triples(kg, 0.6, 9);
  auto key = [](const Triple& t) {
    return std::tuple{t.relation, t.subject, t.object, t.label};
  };
  std::set<std::tuple<int, int, int, int>> seen;
  for (const Triple& t : split.train) CHECK(seen.insert(key(t)).second);
  for (const Triple& t : split.test) CHECK(seen.insert(key(t)).second);
  std::set<std::tuple<int, int, int, int>> universe;
  for (const Triple& t : all_triples(kg)) universe.insert(key(t));
  CHECK(seen == universe);
  CHECK_THROWS_AS(split_triples(kg, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_triples(kg, 1.0, 1), std::invalid_argument);
}

TEST_CASE("self-pairs carry label zero for derived relations") {
  BaseFacts base = generate_synthetic_tree(3, 2, 1.0, 4);
  KnowledgeGraph kg = derive_kg(base, RelationSet::full_18);
  for (const Triple& t : all_triples(kg))
    if (t.subject == t.object) CHECK(t.label == 0);
}

TEST_CASE("base facts and knowledge graphs round-trip through json") {
  BaseFacts base = generate_synthetic_tree(4, 3, 0.5, 13);
  CHECK(base_facts_from_json(to_json(base)) == base);
  KnowledgeGraph kg = derive_kg(base, RelationSet::full_18);
  CHECK(knowledge_graph_from_json(to_json(kg)) == kg);
}

TEST_CASE("base facts invariants are enforced") {
  BaseFacts cyclic;
  cyclic.persons = {{"a", Gender::male}, {"b", Gender::female}};
  cyclic.parent_pairs = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(cyclic.validate(), std::invalid_argument);

  BaseFacts many_parents;
  many_parents.persons = {{"a", Gender::male},
                          {"b", Gender::female},
                          {"c", Gender::male},
                          {"d", Gender::female}};
  many_parents.parent_pairs = {{0, 3}, {1, 3}, {2, 3}};
  CHECK_THROWS_AS(many_parents.validate(), std::invalid_argument);

  BaseFacts overlap;
  overlap.persons = {{"a", Gender::male}, {"b", Gender::female}};
  overlap.parent_pairs = {{0, 1}};
  overlap.spouse_pairs = {{0, 1}};
  CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);

  CHECK_THROWS_AS(derive_kg(cyclic, RelationSet::full_18), std::invalid_argument);
}

TEST_CASE("generation index tracks depth and couples") {
  BaseFacts base = generate_synthetic_tree(3, 2, 1.0, 6);
  std::vector<int> gen = generation_index(base);
  CHECK(gen[0] == 0);
  CHECK(gen[1] == 0);
  for (auto [p, c] : base.parent_pairs) CHECK(gen[c] == gen[p] + 1);
  for (auto [a, b] : base.spouse_pairs) CHECK(gen[a] == gen[b]);
}

TEST_CASE("aunts, uncles and in-laws follow the stated rules") {
  // Founder couple with two children; the elder child marries and has a son.
  BaseFacts base;
  base.persons = {{"f", Gender::male},    {"m", Gender::female},
                  {"elder", Gender::male}, {"aunt2", Gender::female},
                  {"wife2", Gender::female}, {"kid", Gender::male}};
  base.parent_pairs = {{0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 5}, {4, 5}};
  base.spouse_pairs = {{0, 1}, {2, 4}};
  KnowledgeGraph kg = derive_kg(base, RelationSet::full_18);
  CHECK(edge(kg, "aunt", 3, 5));        // father's sister
  CHECK(edge(kg, "nephew", 5, 3));
  CHECK(edge(kg, "sister-in-law", 3, 4));  // sibling of spouse
  CHECK(edge(kg, "sister-in-law", 4, 3));  // spouse of sibling
  CHECK(edge(kg, "brother-in-law", 2, 2) == false);
  CHECK_FALSE(edge(kg, "uncle", 3, 5));
  CHECK(edge(kg, "grandmother", 1, 5));
  CHECK(edge(kg, "husband", 2, 4));
  CHECK(edge(kg, "wife", 4, 2));
}
