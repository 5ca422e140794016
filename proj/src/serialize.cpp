#include "kglab/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace kglab {

using nlohmann::json;

namespace {

void require_schema(const json& j, const std::string& expected) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
    throw std::invalid_argument("document is missing its schema field");
  if (j["schema"].get<std::string>() != expected)
    throw std::invalid_argument("expected schema " + expected + ", found " +
                                j["schema"].get<std::string>());
}

json pairs_to_json(const std::vector<std::pair<int, int>>& pairs) {
  json out = json::array();
  for (auto [a, b] : pairs) out.push_back(json::array({a, b}));
  return out;
}

std::vector<std::pair<int, int>> pairs_from_json(const json& j) {
  std::vector<std::pair<int, int>> out;
  for (const auto& p : j) out.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  return out;
}

}  // namespace

json tensor_to_json(const Tensor& t) {
  if (t.empty()) return json::array();
  if (t.rank() == 1) return json(t.data);
  if (t.rank() == 2) {
    json rows = json::array();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < t.cols(); ++c) row.push_back(t.at(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  }
  // rank 3: nested list of matrices
  json out = json::array();
  std::size_t a = t.shape[0], b = t.shape[1], c = t.shape[2];
  for (std::size_t i = 0; i < a; ++i) {
    json mat = json::array();
    for (std::size_t j = 0; j < b; ++j) {
      json row = json::array();
      for (std::size_t k = 0; k < c; ++k)
        row.push_back(t.data[(i * b + j) * c + k]);
      mat.push_back(std::move(row));
    }
    out.push_back(std::move(mat));
  }
  return out;
}

Tensor tensor_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("tensor: array expected");
  if (j.empty()) return Tensor();
  if (!j[0].is_array()) {
    std::vector<double> data = j.get<std::vector<double>>();
    std::size_t n = data.size();
    return Tensor({n}, std::move(data));
  }
  if (!j[0][0].is_array()) {
    std::size_t rows = j.size(), cols = j[0].size();
    Tensor t = Tensor::zeros({rows, cols});
    for (std::size_t r = 0; r < rows; ++r) {
      if (j[r].size() != cols)
        throw std::invalid_argument("tensor: ragged rows");
      for (std::size_t c = 0; c < cols; ++c) t.at(r, c) = j[r][c].get<double>();
    }
    return t;
  }
  std::size_t a = j.size(), b = j[0].size(), c = j[0][0].size();
  Tensor t = Tensor::zeros({a, b, c});
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t l = 0; l < b; ++l)
      for (std::size_t k = 0; k < c; ++k)
        t.data[(i * b + l) * c + k] = j[i][l][k].get<double>();
  return t;
}

json to_json(const BaseFacts& base) {
  json persons = json::array();
  for (const auto& [id, gender] : base.persons)
    persons.push_back({{"id", id}, {"gender", to_string(gender)}});
  return {{"schema", "kglab/base-facts@1"},
          {"persons", persons},
          {"parent_pairs", pairs_to_json(base.parent_pairs)},
          {"spouse_pairs", pairs_to_json(base.spouse_pairs)}};
}

BaseFacts base_facts_from_json(const json& j) {
  require_schema(j, "kglab/base-facts@1");
  BaseFacts base;
  for (const auto& p : j.at("persons"))
    base.persons.emplace_back(p.at("id").get<std::string>(),
                              gender_from_string(p.at("gender").get<std::string>()));
  base.parent_pairs = pairs_from_json(j.at("parent_pairs"));
  base.spouse_pairs = pairs_from_json(j.at("spouse_pairs"));
  base.normalize();
  base.validate();
  return base;
}

json to_json(const KnowledgeGraph& kg) {
  json edges = json::object();
  for (int k = 0; k < kg.num_relations(); ++k)
    edges[kg.relations[k]] = pairs_to_json(kg.edges[k]);
  return {{"schema", "kglab/knowledge-graph@1"},
          {"objects", kg.objects},
          {"relations", kg.relations},
          {"edges", edges}};
}

KnowledgeGraph knowledge_graph_from_json(const json& j) {
  require_schema(j, "kglab/knowledge-graph@1");
  KnowledgeGraph kg;
  kg.objects = j.at("objects").get<std::vector<std::string>>();
  kg.relations = j.at("relations").get<std::vector<std::string>>();
  for (const auto& name : kg.relations)
    kg.edges.push_back(pairs_from_json(j.at("edges").at(name)));
  kg.sort_edges();
  kg.validate();
  return kg;
}

json to_json(const TrainConfig& cfg) {
  return {{"embedding_dim", cfg.embedding_dim},
          {"decoder_depth", cfg.decoder_depth},
          {"decoder_width", cfg.decoder_width},
          {"learning_rate", cfg.learning_rate},
          {"weight_decay", cfg.weight_decay},
          {"steps", cfg.steps},
          {"seed", cfg.seed},
          {"train_fraction", cfg.train_fraction},
          {"activation", to_string(cfg.activation)}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  cfg.embedding_dim = j.at("embedding_dim").get<int>();
  cfg.decoder_depth = j.at("decoder_depth").get<int>();
  cfg.decoder_width = j.at("decoder_width").get<int>();
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.weight_decay = j.at("weight_decay").get<double>();
  cfg.steps = j.at("steps").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.train_fraction = j.at("train_fraction").get<double>();
  cfg.activation = activation_from_string(j.at("activation").get<std::string>());
  cfg.validate();
  return cfg;
}

json to_json(const RunRecord& record) {
  json layers = json::array();
  for (std::size_t l = 0; l < record.decoder.weights.size(); ++l)
    layers.push_back({{"weights", tensor_to_json(record.decoder.weights[l])},
                      {"bias", tensor_to_json(record.decoder.biases[l])}});
  return {{"schema", "kglab/run-record@1"},
          {"config", to_json(record.config)},
          {"kg", to_json(record.kg)},
          {"representation", tensor_to_json(record.representation.matrix)},
          {"decoder",
           {{"activation", to_string(record.decoder.activation)},
            {"layers", layers}}},
          {"train_loss_curve", record.train_loss_curve},
          {"final_train_accuracy", record.final_train_accuracy},
          {"final_test_accuracy", record.final_test_accuracy},
          {"converged", record.converged},
          {"failed", record.failed},
          {"failure_reason", record.failure_reason}};
}

RunRecord run_record_from_json(const json& j) {
  require_schema(j, "kglab/run-record@1");
  RunRecord record;
  record.config = train_config_from_json(j.at("config"));
  record.kg = knowledge_graph_from_json(j.at("kg"));
  record.representation.matrix = tensor_from_json(j.at("representation"));
  record.representation.objects = record.kg.objects;
  record.decoder.activation =
      activation_from_string(j.at("decoder").at("activation").get<std::string>());
  for (const auto& layer : j.at("decoder").at("layers")) {
    record.decoder.weights.push_back(tensor_from_json(layer.at("weights")));
    Tensor b = tensor_from_json(layer.at("bias"));
    record.decoder.biases.push_back(std::move(b));
  }
  record.train_loss_curve = j.at("train_loss_curve").get<std::vector<double>>();
  record.final_train_accuracy = j.at("final_train_accuracy").get<double>();
  record.final_test_accuracy = j.at("final_test_accuracy").get<double>();
  record.converged = j.at("converged").get<bool>();
  record.failed = j.at("failed").get<bool>();
  record.failure_reason = j.at("failure_reason").get<std::string>();
  if (!record.failed) {
    record.representation.validate();
    record.decoder.validate();
  }
  return record;
}

json to_json(const AatParams& params) {
  return {{"schema", "kglab/aat-params@1"},
          {"bias", tensor_to_json(params.bias)},
          {"linear", tensor_to_json(params.linear)},
          {"quadratic", params.epsilon == 0.0 ? json(nullptr)
                                              : tensor_to_json(params.quadratic)},
          {"epsilon", params.epsilon}};
}

AatParams aat_params_from_json(const json& j) {
  require_schema(j, "kglab/aat-params@1");
  AatParams p;
  p.epsilon = j.at("epsilon").get<double>();
  Tensor bias = tensor_from_json(j.at("bias"));
  p.bias = bias;
  p.linear = tensor_from_json(j.at("linear"));
  if (!j.at("quadratic").is_null()) {
    p.quadratic = tensor_from_json(j.at("quadratic"));
  }
  p.validate();
  return p;
}

json to_json(const OptimalityReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"kind", to_string(c.spec.kind)},
                      {"relations", c.spec.relations},
                      {"violations", c.violations},
                      {"checked", c.checked}});
  return {{"schema", "kglab/optimality-report@1"},
          {"checks", checks},
          {"optimal", report.optimal()}};
}

json to_json(const PruneResult& result, const KnowledgeGraph& kg) {
  json accepted = json::array();
  for (int v : result.accepted) accepted.push_back(kg.objects[v]);
  json tallies = json::array();
  for (const auto& t : result.tallies)
    tallies.push_back({{"node", kg.objects[t.node]},
                       {"asked", t.asked},
                       {"correct", t.correct},
                       {"positive_total", t.positive_total},
                       {"positive_correct", t.positive_correct}});
  json rejected = json::array();
  for (const auto& r : result.rejected)
    rejected.push_back({{"node", kg.objects[r.node]}, {"reason", r.reason}});
  return {{"schema", "kglab/prune-result@1"},
          {"accepted", accepted},
          {"tallies", tallies},
          {"rejected", rejected}};
}

json to_json(const OracleScript& script) {
  json entries = json::array();
  for (const auto& [key, answer] : script.entries) {
    const auto& [subject, relation, object] = key;
    entries.push_back({{"subject", subject},
                       {"relation", relation},
                       {"object", object},
                       {"answer", answer}});
  }
  return {{"schema", "kglab/oracle-script@1"},
          {"fallback", script.fallback_exact ? "exact" : "none"},
          {"entries", entries}};
}

OracleScript oracle_script_from_json(const json& j) {
  require_schema(j, "kglab/oracle-script@1");
  OracleScript script;
  std::string fallback = j.at("fallback").get<std::string>();
  if (fallback != "exact" && fallback != "none")
    throw std::invalid_argument("oracle script: fallback must be exact or none");
  script.fallback_exact = fallback == "exact";
  for (const auto& e : j.at("entries"))
    script.entries[{e.at("subject").get<std::string>(),
                    e.at("relation").get<std::string>(),
                    e.at("object").get<std::string>()}] =
        e.at("answer").get<bool>();
  return script;
}

ScriptedOracle make_scripted_oracle(const OracleScript& script,
                                    const KnowledgeGraph& kg) {
  std::map<ScriptedOracle::Key, bool> table;
  auto object_index = [&kg](const std::string& id) {
    for (int i = 0; i < kg.num_objects(); ++i)
      if (kg.objects[i] == id) return i;
    throw std::invalid_argument("oracle script: unknown object " + id);
  };
  for (const auto& [key, answer] : script.entries) {
    const auto& [subject, relation, object] = key;
    int r = kg.relation_index(relation);
    if (r < 0)
      throw std::invalid_argument("oracle script: unknown relation " + relation);
    table[{object_index(subject), r, object_index(object)}] = answer;
  }
  if (script.fallback_exact) return ScriptedOracle(std::move(table), kg);
  return ScriptedOracle(std::move(table));
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace kglab
