#include "kglab/knowledge_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kglab/rng.hpp"

namespace kglab {

int KnowledgeGraph::relation_index(const std::string& name) const {
  for (int k = 0; k < num_relations(); ++k)
    if (relations[k] == name) return k;
  return -1;
}

bool KnowledgeGraph::has_edge(int relation, int i, int j) const {
  const auto& es = edges[relation];
  return std::binary_search(es.begin(), es.end(), std::make_pair(i, j));
}

std::vector<std::uint8_t> KnowledgeGraph::dense_relation(int relation) const {
  std::size_t n = objects.size();
  std::vector<std::uint8_t> m(n * n, 0);
  for (auto [i, j] : edges[relation]) m[static_cast<std::size_t>(i) * n + j] = 1;
  return m;
}

void KnowledgeGraph::add_edge(int relation, int i, int j) {
  edges[relation].emplace_back(i, j);
}

void KnowledgeGraph::sort_edges() {
  for (auto& es : edges) {
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
  }
}

void KnowledgeGraph::validate() const {
  if (edges.size() != relations.size())
    throw std::invalid_argument("knowledge graph: one edge set per relation required");
  std::set<std::string> names(relations.begin(), relations.end());
  if (names.size() != relations.size())
    throw std::invalid_argument("knowledge graph: duplicate relation name");
  int n = num_objects();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& es = edges[k];
    if (!std::is_sorted(es.begin(), es.end()))
      throw std::invalid_argument("knowledge graph: edge set not sorted");
    if (std::adjacent_find(es.begin(), es.end()) != es.end())
      throw std::invalid_argument("knowledge graph: duplicate edge in relation " +
                                  relations[k]);
    for (auto [i, j] : es)
      if (i < 0 || i >= n || j < 0 || j >= n)
        throw std::invalid_argument("knowledge graph: edge index out of range in " +
                                    relations[k]);
  }
}

std::string to_string(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::symmetric: return "symmetric";
    case PropertyKind::antisymmetric: return "antisymmetric";
    case PropertyKind::transitive: return "transitive";
    case PropertyKind::meta_transitive: return "meta_transitive";
  }
  return "unknown";
}

PropertyKind property_kind_from_string(const std::string& name) {
  if (name == "symmetric") return PropertyKind::symmetric;
  if (name == "antisymmetric") return PropertyKind::antisymmetric;
  if (name == "transitive") return PropertyKind::transitive;
  if (name == "meta_transitive" || name == "meta-transitive")
    return PropertyKind::meta_transitive;
  throw std::invalid_argument("unknown property kind: " + name);
}

std::string PropertySpec::describe() const {
  std::ostringstream os;
  os << to_string(kind) << "(";
  for (std::size_t i = 0; i < relations.size(); ++i)
    os << (i ? ", " : "") << relations[i];
  os << ")";
  return os.str();
}

namespace {

int require_relation(const KnowledgeGraph& kg, const std::string& name) {
  int k = kg.relation_index(name);
  if (k < 0) throw std::invalid_argument("unknown relation: " + name);
  return k;
}

}  // namespace

std::vector<PropertyViolation> check_property(const KnowledgeGraph& kg,
                                              const PropertySpec& spec) {
  std::size_t expected = spec.kind == PropertyKind::meta_transitive ? 3 : 1;
  if (spec.relations.size() != expected)
    throw std::invalid_argument("property " + to_string(spec.kind) + " needs " +
                                std::to_string(expected) + " relation name(s)");
  std::size_t n = kg.objects.size();
  std::vector<PropertyViolation> out;
  switch (spec.kind) {
    case PropertyKind::symmetric: {
      auto r = kg.dense_relation(require_relation(kg, spec.relations[0]));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (r[i * n + j] && !r[j * n + i])
            out.push_back({{static_cast<int>(i), static_cast<int>(j)}});
      break;
    }
    case PropertyKind::antisymmetric: {
      auto r = kg.dense_relation(require_relation(kg, spec.relations[0]));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j && r[i * n + j] && r[j * n + i])
            out.push_back({{static_cast<int>(i), static_cast<int>(j)}});
      break;
    }
    case PropertyKind::transitive: {
      auto r = kg.dense_relation(require_relation(kg, spec.relations[0]));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (!r[i * n + j]) continue;
          for (std::size_t k = 0; k < n; ++k)
            if (r[j * n + k] && !r[i * n + k])
              out.push_back({{static_cast<int>(i), static_cast<int>(j),
                              static_cast<int>(k)}});
        }
      break;
    }
    case PropertyKind::meta_transitive: {
      auto r1 = kg.dense_relation(require_relation(kg, spec.relations[0]));
      auto r2 = kg.dense_relation(require_relation(kg, spec.relations[1]));
      auto r3 = kg.dense_relation(require_relation(kg, spec.relations[2]));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (!r1[i * n + j]) continue;
          for (std::size_t k = 0; k < n; ++k)
            if (r2[j * n + k] && !r3[i * n + k])
              out.push_back({{static_cast<int>(i), static_cast<int>(j),
                              static_cast<int>(k)}});
        }
      break;
    }
  }
  return out;
}

std::vector<Triple> all_triples(const KnowledgeGraph& kg) {
  int n = kg.num_objects(), m = kg.num_relations();
  std::vector<Triple> out;
  out.reserve(kg.num_triples());
  for (int k = 0; k < m; ++k) {
    auto dense = kg.dense_relation(k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.push_back({k, i, j, dense[static_cast<std::size_t>(i) * n + j]});
  }
  return out;
}

TripleSplit split_triples(const KnowledgeGraph& kg, double fraction,
                          std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("split_triples: fraction must be in (0, 1)");
  std::vector<Triple> triples = all_triples(kg);
  Rng rng(derive_seed(seed, 0x5cf17));
  rng.shuffle(triples);
  auto train_count = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(triples.size())));
  train_count = std::min(train_count, triples.size());
  TripleSplit split;
  split.seed = seed;
  split.fraction = fraction;
  split.train.assign(triples.begin(), triples.begin() + train_count);
  split.test.assign(triples.begin() + train_count, triples.end());
  return split;
}

KnowledgeGraph greater_than_kg(int n) {
  if (n < 2) throw std::invalid_argument("greater_than_kg: n must be >= 2");
  KnowledgeGraph kg;
  kg.relations = {"greater_than"};
  kg.edges.resize(1);
  for (int i = 0; i < n; ++i) kg.objects.push_back("x" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) kg.add_edge(0, i, j);
  kg.sort_edges();
  return kg;
}

KnowledgeGraph with_union_relation(const KnowledgeGraph& kg,
                                   const std::vector<std::string>& members,
                                   const std::string& name) {
  if (kg.relation_index(name) >= 0)
    throw std::invalid_argument("with_union_relation: name already exists: " + name);
  KnowledgeGraph out = kg;
  out.relations.push_back(name);
  std::vector<std::pair<int, int>> merged;
  for (const auto& member : members) {
    int k = require_relation(kg, member);
    merged.insert(merged.end(), kg.edges[k].begin(), kg.edges[k].end());
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  out.edges.push_back(std::move(merged));
  return out;
}

}  // namespace kglab
