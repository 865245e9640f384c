#include "pi_forge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pi_forge/detail/indexing.hpp"
#include "pi_forge/error.hpp"

namespace pi_forge {

Dataset::Dataset(std::vector<VariableSpec> vars, std::vector<std::uint64_t> counts)
    : vars_(std::move(vars)), counts_(std::move(counts)) {
  for (const auto& v : vars_) {
    if (v.cardinality < 2) throw Error(ErrorCode::InvalidInput, "variable cardinality < 2");
    cards_.push_back(v.cardinality);
  }
  if (counts_.size() != detail::cell_count(cards_)) {
    throw Error(ErrorCode::InvalidInput, "count array does not match the variable cardinalities");
  }
  for (auto c : counts_) m_ += c;
  if (m_ == 0) throw Error(ErrorCode::InvalidInput, "dataset must contain at least one case");
}

Dataset Dataset::from_cases(std::vector<VariableSpec> vars,
                            const std::vector<std::vector<std::size_t>>& cases) {
  std::vector<std::size_t> cards;
  for (const auto& v : vars) cards.push_back(v.cardinality);
  const auto strides = detail::strides_of(cards);
  std::vector<std::uint64_t> counts(detail::cell_count(cards), 0);
  for (const auto& row : cases) {
    if (row.size() != cards.size()) throw Error(ErrorCode::InvalidInput, "case has wrong arity");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] >= cards[i]) throw Error(ErrorCode::InvalidAssignment, "case value out of range");
      flat += row[i] * strides[i];
    }
    ++counts[flat];
  }
  return Dataset(std::move(vars), std::move(counts));
}

std::uint64_t Dataset::count(const Assignment& partial) const {
  for (const auto& [var, value] : partial) {
    if (var >= vars_.size() || value >= cards_[var]) {
      throw Error(ErrorCode::InvalidAssignment, "partial assignment out of range");
    }
  }
  std::uint64_t total = 0;
  std::vector<std::size_t> config(vars_.size(), 0);
  std::size_t flat = 0;
  do {
    bool consistent = true;
    for (const auto& [var, value] : partial) consistent = consistent && config[var] == value;
    if (consistent) total += counts_[flat];
    ++flat;
  } while (detail::next_config(config, cards_));
  return total;
}

std::vector<std::uint64_t> Dataset::project(std::span<const std::size_t> order) const {
  for (auto v : order) {
    if (v >= vars_.size()) throw Error(ErrorCode::InvalidQuery, "variable index out of range");
  }
  return detail::project<std::uint64_t>(cards_, counts_, order);
}

Dataset sample(const JointTable& table, std::uint64_t m, std::uint64_t seed) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  const auto probs = table.probs();
  std::vector<double> cdf(probs.size());
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    running += probs[i];
    cdf[i] = running;
    if (probs[i] > 0.0) last_positive = i;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t draw = 0; draw < m; ++draw) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * running;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t cell =
        it == cdf.end() ? last_positive : static_cast<std::size_t>(it - cdf.begin());
    ++counts[cell];
  }
  return Dataset(table.vars(), std::move(counts));
}

Dataset exact_dataset(const JointTable& table, std::uint64_t m) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  std::vector<std::uint64_t> counts(table.size(), 0);
  std::uint64_t total = 0;
  for (std::size_t c = 0; c < table.size(); ++c) {
    const double expected = static_cast<double>(m) * table[c];
    const double rounded = std::round(expected);
    if (std::fabs(expected - rounded) > 1e-9 * std::max(1.0, expected)) {
      std::string config;
      for (auto v : table.config_of(c)) config += (config.empty() ? "" : ",") + std::to_string(v);
      throw Error(ErrorCode::NonRealizable, "m * P(" + config + ") = " + std::to_string(expected) +
                                                " is not an integer for m = " + std::to_string(m));
    }
    counts[c] = static_cast<std::uint64_t>(rounded);
    total += counts[c];
  }
  if (total != m) {
    throw Error(ErrorCode::NonRealizable, "rounded counts sum to " + std::to_string(total) +
                                              ", not " + std::to_string(m));
  }
  return Dataset(table.vars(), std::move(counts));
}

JointTable empirical(const Dataset& dataset) {
  std::vector<double> probs;
  probs.reserve(dataset.counts().size());
  const double m = static_cast<double>(dataset.m());
  for (auto c : dataset.counts()) probs.push_back(static_cast<double>(c) / m);
  return JointTable(dataset.vars(), std::move(probs));
}

}  // namespace pi_forge
