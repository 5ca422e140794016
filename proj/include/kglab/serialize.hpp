#pragma once

#include <map>
#include <string>
#include <tuple>

#include <json.hpp>

#include "kglab/aat.hpp"
#include "kglab/cone.hpp"
#include "kglab/family_tree.hpp"
#include "kglab/knowledge_graph.hpp"
#include "kglab/prune.hpp"
#include "kglab/trainer.hpp"

namespace kglab {

// All on-disk artifacts are JSON documents with a versioned "schema" field
// ("kglab/<kind>@<version>"). Loaders reject unknown schemas.

nlohmann::json to_json(const BaseFacts& base);
BaseFacts base_facts_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KnowledgeGraph& kg);
KnowledgeGraph knowledge_graph_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AatParams& params);
AatParams aat_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const OptimalityReport& report);

nlohmann::json to_json(const PruneResult& result, const KnowledgeGraph& kg);

nlohmann::json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const nlohmann::json& j);

// Oracle answer table: entries keyed by object/relation names, resolved
// against a knowledge graph at load time, plus an optional exact fallback.
struct OracleScript {
  std::map<std::tuple<std::string, std::string, std::string>, bool> entries;
  bool fallback_exact = true;
};

nlohmann::json to_json(const OracleScript& script);
OracleScript oracle_script_from_json(const nlohmann::json& j);
ScriptedOracle make_scripted_oracle(const OracleScript& script,
                                    const KnowledgeGraph& kg);

void save_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json_file(const std::string& path);

}  // namespace kglab
