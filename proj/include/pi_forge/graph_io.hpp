#pragma once

// Serialization of learned structures, search traces and score reports.
//   graph JSON: {"nodes": [...], "arcs": [[from, to]...]} or "links" for skeletons
//   DOT:        digraph / graph blocks
//   traces:     JSON lines, one step per line

#include <string>
#include <vector>

#include "pi_forge/dag.hpp"
#include "pi_forge/learners.hpp"
#include "pi_forge/model_io.hpp"
#include "pi_forge/scores.hpp"

namespace pi_forge {

Json dag_to_json(const Dag& dag, const std::vector<VariableSpec>& vars);
Json ugraph_to_json(const UGraph& graph, const std::vector<VariableSpec>& vars);
Dag dag_from_json(const Json& doc, const std::vector<VariableSpec>& vars);

std::string dag_to_dot(const Dag& dag, const std::vector<VariableSpec>& vars);
std::string ugraph_to_dot(const UGraph& graph, const std::vector<VariableSpec>& vars);

Json score_to_json(const ScoreValue& score);

std::string trace_to_jsonl(const SearchTrace& trace, const std::vector<VariableSpec>& vars);
std::string pc_log_to_jsonl(const PcResult& result, const std::vector<VariableSpec>& vars);

}  // namespace pi_forge
