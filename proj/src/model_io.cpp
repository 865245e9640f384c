#include "pi_forge/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pi_forge/detail/indexing.hpp"
#include "pi_forge/error.hpp"

namespace pi_forge {

namespace {

Json vars_to_json(const std::vector<VariableSpec>& vars) {
  Json out = Json::array();
  for (const auto& v : vars) out.push_back({{"name", v.name}, {"cardinality", v.cardinality}});
  return out;
}

std::vector<VariableSpec> vars_from_json(const Json& doc) {
  if (!doc.contains("variables") || !doc["variables"].is_array()) {
    throw Error(ErrorCode::InvalidInput, "document has no \"variables\" array");
  }
  std::vector<VariableSpec> vars;
  for (const auto& v : doc["variables"]) {
    vars.push_back({v.at("name").get<std::string>(), v.at("cardinality").get<std::size_t>()});
  }
  return vars;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidInput, "malformed probability '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_decimal(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidInput, "cannot format value");
  return std::string(buf, ptr);
}

Json table_to_json(const JointTable& table, const Json& metadata) {
  Json doc;
  doc["variables"] = vars_to_json(table.vars());
  Json probs = Json::array();
  for (double p : table.probs()) probs.push_back(format_decimal(p));
  doc["probs"] = std::move(probs);
  if (!metadata.is_null()) doc["metadata"] = metadata;
  return doc;
}

JointTable table_from_json(const Json& doc) {
  auto vars = vars_from_json(doc);
  if (!doc.contains("probs") || !doc["probs"].is_array()) {
    throw Error(ErrorCode::InvalidInput, "model has no \"probs\" array");
  }
  std::vector<double> probs;
  for (const auto& p : doc["probs"]) {
    if (p.is_string()) {
      probs.push_back(parse_double(p.get<std::string>()));
    } else if (p.is_number()) {
      probs.push_back(p.get<double>());
    } else {
      throw Error(ErrorCode::InvalidInput, "probabilities must be strings or numbers");
    }
  }
  return JointTable(std::move(vars), std::move(probs));
}

std::string serialize_table(const JointTable& table, const Json& metadata) {
  return table_to_json(table, metadata).dump(2) + "\n";
}

Json dataset_to_json(const Dataset& data) {
  Json doc;
  doc["variables"] = vars_to_json(data.vars());
  doc["m"] = data.m();
  doc["counts"] = std::vector<std::uint64_t>(data.counts().begin(), data.counts().end());
  return doc;
}

Dataset dataset_from_json(const Json& doc) {
  auto vars = vars_from_json(doc);
  Dataset data(std::move(vars), doc.at("counts").get<std::vector<std::uint64_t>>());
  if (doc.contains("m") && doc["m"].get<std::uint64_t>() != data.m()) {
    throw Error(ErrorCode::InvalidInput, "\"m\" does not match the sum of counts");
  }
  return data;
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t i = 0; i < data.num_vars(); ++i) {
    if (i) out += ',';
    out += data.vars()[i].name;
  }
  out += '\n';
  std::vector<std::size_t> config(data.num_vars(), 0);
  std::size_t flat = 0;
  do {
    const auto n = data.counts()[flat++];
    if (n == 0) continue;
    std::string row;
    for (auto v : config) row += (row.empty() ? "" : ",") + std::to_string(v);
    row += '\n';
    for (std::uint64_t k = 0; k < n; ++k) out += row;
  } while (detail::next_config(config, data.cardinalities()));
  return out;
}

Dataset dataset_from_csv(std::string_view text, const std::optional<std::vector<VariableSpec>>& vars) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw Error(ErrorCode::InvalidInput, "CSV has no header");
  const auto header = split(lines.front(), ',');
  std::vector<std::vector<std::size_t>> cases;
  std::vector<std::size_t> max_seen(header.size(), 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::InvalidInput, "CSV row " + std::to_string(r) + " has the wrong arity");
    }
    std::vector<std::size_t> row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::size_t value = 0;
      const auto [ptr, ec] = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), value);
      if (ec != std::errc() || ptr != cells[i].data() + cells[i].size()) {
        throw Error(ErrorCode::InvalidInput, "CSV values must be non-negative integers");
      }
      max_seen[i] = std::max(max_seen[i], value);
      row.push_back(value);
    }
    cases.push_back(std::move(row));
  }
  std::vector<VariableSpec> specs;
  if (vars) {
    specs = *vars;
    if (specs.size() != header.size()) throw Error(ErrorCode::InvalidInput, "CSV header does not match variables");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (specs[i].name != header[i]) throw Error(ErrorCode::InvalidInput, "CSV header does not match variables");
    }
  } else {
    for (std::size_t i = 0; i < header.size(); ++i) specs.push_back({std::string(header[i]), max_seen[i] + 1});
  }
  return Dataset::from_cases(std::move(specs), cases);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace pi_forge
