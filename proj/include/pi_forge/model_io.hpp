#pragma once

// File formats for models and datasets.
//
// Model JSON:   {"variables": [{"name", "cardinality"}...], "probs": ["0.125", ...]}
//               probabilities are shortest round-trip decimal strings, flat
//               order with the last variable fastest. An optional "metadata"
//               object may follow.
// Dataset JSON: {"variables": [...], "m": m, "counts": [...]} (same layout).
// Dataset CSV:  header of variable names, then one row per case, cases
//               expanded from the counts in configuration-index order.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pi_forge/dataset.hpp"
#include "pi_forge/jpd.hpp"

namespace pi_forge {

using Json = nlohmann::ordered_json;

/// Shortest decimal that parses back to exactly `value`.
std::string format_decimal(double value);

Json table_to_json(const JointTable& table, const Json& metadata = Json());
JointTable table_from_json(const Json& doc);

/// Pretty-printed JSON text with a trailing newline.
std::string serialize_table(const JointTable& table, const Json& metadata = Json());

Json dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const Json& doc);

std::string dataset_to_csv(const Dataset& data);
/// Cardinalities come from `vars` when given, else max observed value + 1 (at least 2).
Dataset dataset_from_csv(std::string_view text,
                         const std::optional<std::vector<VariableSpec>>& vars = std::nullopt);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace pi_forge
