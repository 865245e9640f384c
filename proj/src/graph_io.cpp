#include "pi_forge/graph_io.hpp"

#include <cmath>

#include "pi_forge/error.hpp"

namespace pi_forge {

namespace {

Json node_names(const std::vector<VariableSpec>& vars) {
  Json out = Json::array();
  for (const auto& v : vars) out.push_back(v.name);
  return out;
}

Json arcs_json(const std::vector<Arc>& arcs, const std::vector<VariableSpec>& vars) {
  Json out = Json::array();
  for (const auto& [p, c] : arcs) out.push_back({vars.at(p).name, vars.at(c).name});
  return out;
}

// JSON has no infinity; non-finite scores are written as strings.
Json number_or_string(double value) {
  if (std::isfinite(value)) return value;
  return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
}

std::size_t index_by_name(const std::vector<VariableSpec>& vars, const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  throw Error(ErrorCode::InvalidInput, "unknown node '" + name + "'");
}

}  // namespace

Json dag_to_json(const Dag& dag, const std::vector<VariableSpec>& vars) {
  Json doc;
  doc["nodes"] = node_names(vars);
  doc["arcs"] = arcs_json(dag.arcs(), vars);
  return doc;
}

Json ugraph_to_json(const UGraph& graph, const std::vector<VariableSpec>& vars) {
  Json doc;
  doc["nodes"] = node_names(vars);
  Json links = Json::array();
  for (const auto& [a, b] : graph.links()) links.push_back({vars.at(a).name, vars.at(b).name});
  doc["links"] = std::move(links);
  return doc;
}

Dag dag_from_json(const Json& doc, const std::vector<VariableSpec>& vars) {
  Dag dag(vars.size());
  for (const auto& arc : doc.at("arcs")) {
    dag.add_arc(index_by_name(vars, arc.at(0).get<std::string>()),
                index_by_name(vars, arc.at(1).get<std::string>()));
  }
  return dag;
}

std::string dag_to_dot(const Dag& dag, const std::vector<VariableSpec>& vars) {
  std::string out = "digraph learned {\n";
  for (const auto& v : vars) out += "  \"" + v.name + "\";\n";
  for (const auto& [p, c] : dag.arcs()) out += "  \"" + vars[p].name + "\" -> \"" + vars[c].name + "\";\n";
  return out + "}\n";
}

std::string ugraph_to_dot(const UGraph& graph, const std::vector<VariableSpec>& vars) {
  std::string out = "graph skeleton {\n";
  for (const auto& v : vars) out += "  \"" + v.name + "\";\n";
  for (const auto& [a, b] : graph.links()) out += "  \"" + vars[a].name + "\" -- \"" + vars[b].name + "\";\n";
  return out + "}\n";
}

Json score_to_json(const ScoreValue& score) {
  Json doc;
  doc["kind"] = std::string(to_string(score.kind));
  doc["value"] = number_or_string(score.value);
  Json terms = Json::array();
  for (double t : score.node_terms) terms.push_back(number_or_string(t));
  doc["node_terms"] = std::move(terms);
  return doc;
}

std::string trace_to_jsonl(const SearchTrace& trace, const std::vector<VariableSpec>& vars) {
  std::string out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    Json line;
    line["step"] = i;
    line["kind"] = std::string(to_string(trace.kind));
    line["arcs"] = arcs_json(s.arcs, vars);
    line["score_before"] = number_or_string(s.score_before);
    line["score_after"] = number_or_string(s.score_after);
    line["accepted"] = s.accepted;
    out += line.dump() + "\n";
  }
  return out;
}

std::string pc_log_to_jsonl(const PcResult& result, const std::vector<VariableSpec>& vars) {
  std::string out;
  for (const auto& r : result.removals) {
    Json line;
    line["pass"] = r.pass;
    line["link"] = {vars.at(r.link.first).name, vars.at(r.link.second).name};
    Json sep = Json::array();
    for (auto z : r.separating_set) sep.push_back(vars.at(z).name);
    line["separating_set"] = std::move(sep);
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace pi_forge
