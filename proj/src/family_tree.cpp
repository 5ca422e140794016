#include "kglab/family_tree.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "kglab/rng.hpp"

namespace kglab {

std::string to_string(Gender g) { return g == Gender::male ? "male" : "female"; }

Gender gender_from_string(const std::string& name) {
  if (name == "male") return Gender::male;
  if (name == "female") return Gender::female;
  throw std::invalid_argument("unknown gender: " + name);
}

int BaseFacts::person_index(const std::string& id) const {
  for (int i = 0; i < num_persons(); ++i)
    if (persons[i].first == id) return i;
  return -1;
}

void BaseFacts::normalize() {
  for (auto& [a, b] : spouse_pairs)
    if (a > b) std::swap(a, b);
  std::sort(parent_pairs.begin(), parent_pairs.end());
  parent_pairs.erase(std::unique(parent_pairs.begin(), parent_pairs.end()),
                     parent_pairs.end());
  std::sort(spouse_pairs.begin(), spouse_pairs.end());
  spouse_pairs.erase(std::unique(spouse_pairs.begin(), spouse_pairs.end()),
                     spouse_pairs.end());
}

void BaseFacts::validate() const {
  int n = num_persons();
  std::set<std::string> ids;
  for (const auto& [id, gender] : persons) {
    (void)gender;
    if (!ids.insert(id).second)
      throw std::invalid_argument("base facts: duplicate person id " + id);
  }
  auto in_range = [n](int i) { return i >= 0 && i < n; };
  std::vector<int> parent_count(n, 0);
  for (auto [p, c] : parent_pairs) {
    if (!in_range(p) || !in_range(c))
      throw std::invalid_argument("base facts: parent pair index out of range");
    if (p == c) throw std::invalid_argument("base facts: person is own parent");
    parent_count[c] += 1;
  }
  for (int i = 0; i < n; ++i)
    if (parent_count[i] > 2)
      throw std::invalid_argument("base facts: person " + persons[i].first +
                                  " has more than two parents");
  std::set<std::pair<int, int>> parent_set(parent_pairs.begin(),
                                           parent_pairs.end());
  for (auto [a, b] : spouse_pairs) {
    if (!in_range(a) || !in_range(b))
      throw std::invalid_argument("base facts: spouse pair index out of range");
    if (a == b) throw std::invalid_argument("base facts: person married to self");
    if (parent_set.count({a, b}) || parent_set.count({b, a}))
      throw std::invalid_argument("base facts: spouse pair overlaps a parent pair");
  }
  // Acyclicity: walk up from every person; a repeat visit on the current
  // path means someone is their own ancestor.
  std::vector<std::vector<int>> parents(n);
  for (auto [p, c] : parent_pairs) parents[c].push_back(p);
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on path, 2 done
  std::function<void(int)> visit = [&](int v) {
    if (state[v] == 2) return;
    if (state[v] == 1)
      throw std::invalid_argument("base facts: parent graph has a cycle");
    state[v] = 1;
    for (int p : parents[v]) visit(p);
    state[v] = 2;
  };
  for (int i = 0; i < n; ++i) visit(i);
}

BaseFacts generate_synthetic_tree(int generations, int max_children,
                                  double spouse_probability,
                                  std::uint64_t seed) {
  if (generations < 1)
    throw std::invalid_argument("generate_synthetic_tree: generations must be >= 1");
  if (max_children < 0)
    throw std::invalid_argument("generate_synthetic_tree: max_children must be >= 0");
  if (!(spouse_probability >= 0.0 && spouse_probability <= 1.0))
    throw std::invalid_argument(
        "generate_synthetic_tree: spouse_probability must be in [0, 1]");

  Rng rng(derive_seed(seed, 0xfa311));
  BaseFacts base;
  auto add_person = [&base](Gender g) {
    int idx = base.num_persons();
    base.persons.emplace_back("p" + std::to_string(idx), g);
    return idx;
  };

  int father0 = add_person(Gender::male);
  int mother0 = add_person(Gender::female);
  base.spouse_pairs.emplace_back(father0, mother0);
  std::vector<std::pair<int, int>> couples = {{father0, mother0}};

  for (int g = 1; g < generations; ++g) {
    std::vector<std::pair<int, int>> next_couples;
    for (auto [a, b] : couples) {
      int children =
          max_children == 0
              ? 0
              : 1 + static_cast<int>(rng.uniform_int(
                        static_cast<std::uint64_t>(max_children)));
      for (int c = 0; c < children; ++c) {
        Gender gender = rng.bernoulli(0.5) ? Gender::male : Gender::female;
        int child = add_person(gender);
        base.parent_pairs.emplace_back(a, child);
        base.parent_pairs.emplace_back(b, child);
        bool last_generation = g == generations - 1;
        if (!last_generation && rng.bernoulli(spouse_probability)) {
          Gender spouse_gender =
              gender == Gender::male ? Gender::female : Gender::male;
          int spouse = add_person(spouse_gender);
          base.spouse_pairs.emplace_back(child, spouse);
          next_couples.emplace_back(child, spouse);
        }
      }
    }
    couples = std::move(next_couples);
  }
  base.normalize();
  base.validate();
  return base;
}

const std::vector<std::string>& family_relation_names() {
  static const std::vector<std::string> names = {
      "father",      "mother",         "husband",        "wife",
      "son",         "daughter",       "brother",        "sister",
      "grandfather", "grandmother",    "aunt",           "uncle",
      "nephew",      "niece",          "brother-in-law", "sister-in-law",
      "ancestor",    "descendant"};
  return names;
}

namespace {

struct Kinship {
  int n = 0;
  std::vector<bool> male;
  std::vector<std::vector<int>> parents;   // parents of i
  std::vector<std::vector<int>> children;  // children of i
  std::vector<std::vector<int>> spouses;
  std::vector<std::uint8_t> is_parent;   // is_parent[i*n+j]: i parent of j
  std::vector<std::uint8_t> is_sibling;  // share >= 1 parent, i != j
  std::vector<std::uint8_t> is_ancestor;

  explicit Kinship(const BaseFacts& base) {
    n = base.num_persons();
    male.resize(n);
    for (int i = 0; i < n; ++i) male[i] = base.persons[i].second == Gender::male;
    parents.resize(n);
    children.resize(n);
    spouses.resize(n);
    is_parent.assign(static_cast<std::size_t>(n) * n, 0);
    for (auto [p, c] : base.parent_pairs) {
      parents[c].push_back(p);
      children[p].push_back(c);
      is_parent[static_cast<std::size_t>(p) * n + c] = 1;
    }
    for (auto [a, b] : base.spouse_pairs) {
      spouses[a].push_back(b);
      spouses[b].push_back(a);
    }
    is_sibling.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int p : parents[i])
          if (is_parent[static_cast<std::size_t>(p) * n + j]) {
            is_sibling[static_cast<std::size_t>(i) * n + j] = 1;
            break;
          }
      }
    // Transitive closure of parent-of via DFS from each node downwards.
    is_ancestor.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
      std::vector<int> stack = children[i];
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        auto& cell = is_ancestor[static_cast<std::size_t>(i) * n + v];
        if (cell) continue;
        cell = 1;
        for (int c : children[v]) stack.push_back(c);
      }
    }
  }

  bool parent_of(int i, int j) const {
    return is_parent[static_cast<std::size_t>(i) * n + j];
  }
  bool sibling(int i, int j) const {
    return is_sibling[static_cast<std::size_t>(i) * n + j];
  }
  bool ancestor(int i, int j) const {
    return is_ancestor[static_cast<std::size_t>(i) * n + j];
  }
  bool spouse(int i, int j) const {
    return std::find(spouses[i].begin(), spouses[i].end(), j) != spouses[i].end();
  }
  // i is a sibling of some parent of j, or married to a sibling of some
  // parent of j.
  bool parents_sibling_or_their_spouse(int i, int j) const {
    for (int p : parents[j]) {
      if (sibling(i, p)) return true;
      for (int s : spouses[i])
        if (sibling(s, p)) return true;
    }
    return false;
  }
  // i is a sibling of j's spouse, or a spouse of j's sibling.
  bool in_law(int i, int j) const {
    for (int s : spouses[j])
      if (sibling(i, s)) return true;
    for (int s : spouses[i])
      if (sibling(s, j)) return true;
    return false;
  }
};

}  // namespace

KnowledgeGraph derive_kg(const BaseFacts& base, RelationSet relation_set) {
  base.validate();
  Kinship kin(base);
  int n = kin.n;

  KnowledgeGraph kg;
  kg.objects.reserve(n);
  for (const auto& [id, gender] : base.persons) {
    (void)gender;
    kg.objects.push_back(id);
  }

  if (relation_set == RelationSet::descendant_only) {
    kg.relations = {"descendant"};
    kg.edges.resize(1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (kin.ancestor(j, i)) kg.add_edge(0, i, j);
    kg.sort_edges();
    kg.validate();
    return kg;
  }

  kg.relations = family_relation_names();
  kg.edges.resize(kg.relations.size());
  for (int i = 0; i < n; ++i) {
    bool male = kin.male[i];
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (kin.parent_of(i, j)) kg.add_edge(male ? 0 : 1, i, j);   // father/mother
      if (kin.spouse(i, j)) kg.add_edge(male ? 2 : 3, i, j);      // husband/wife
      if (kin.parent_of(j, i)) kg.add_edge(male ? 4 : 5, i, j);   // son/daughter
      if (kin.sibling(i, j)) kg.add_edge(male ? 6 : 7, i, j);     // brother/sister
      bool grand = false;
      for (int c : kin.children[i])
        if (kin.parent_of(c, j)) {
          grand = true;
          break;
        }
      if (grand) kg.add_edge(male ? 8 : 9, i, j);                 // grandfather/mother
      if (kin.parents_sibling_or_their_spouse(i, j))
        kg.add_edge(male ? 11 : 10, i, j);                        // uncle/aunt
      if (kin.parents_sibling_or_their_spouse(j, i))
        kg.add_edge(male ? 12 : 13, i, j);                        // nephew/niece
      if (kin.in_law(i, j)) kg.add_edge(male ? 14 : 15, i, j);    // in-laws
      if (kin.ancestor(i, j)) kg.add_edge(16, i, j);              // ancestor
      if (kin.ancestor(j, i)) kg.add_edge(17, i, j);              // descendant
    }
  }
  kg.sort_edges();
  kg.validate();
  return kg;
}

std::vector<int> generation_index(const BaseFacts& base) {
  base.validate();
  int n = base.num_persons();
  std::vector<std::vector<int>> parents(n);
  for (auto [p, c] : base.parent_pairs) parents[c].push_back(p);
  std::vector<int> gen(n, -1);
  std::function<int(int)> depth = [&](int v) {
    if (gen[v] >= 0) return gen[v];
    int g = 0;
    for (int p : parents[v]) g = std::max(g, depth(p) + 1);
    gen[v] = g;
    return g;
  };
  for (int i = 0; i < n; ++i) depth(i);
  // Married-in spouses have no parents of their own; align them with their
  // partner so couples share a generation.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [a, b] : base.spouse_pairs) {
      int g = std::max(gen[a], gen[b]);
      if (gen[a] != g || gen[b] != g) {
        gen[a] = gen[b] = g;
        changed = true;
      }
    }
  }
  return gen;
}

std::vector<int> gender_labels(const BaseFacts& base) {
  std::vector<int> out(base.num_persons());
  for (int i = 0; i < base.num_persons(); ++i)
    out[i] = base.persons[i].second == Gender::male ? 0 : 1;
  return out;
}

}  // namespace kglab
