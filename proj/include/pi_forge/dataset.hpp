#pragma once

// Complete-case datasets stored as contingency counts over full
// configurations (same flat layout as JointTable). Case order is never kept.

#include <cstdint>
#include <span>
#include <vector>

#include "pi_forge/jpd.hpp"

namespace pi_forge {

class Dataset {
 public:
  Dataset(std::vector<VariableSpec> vars, std::vector<std::uint64_t> counts);

  /// Builds counts from explicit cases (one value tuple per case).
  static Dataset from_cases(std::vector<VariableSpec> vars,
                            const std::vector<std::vector<std::size_t>>& cases);

  std::size_t num_vars() const { return vars_.size(); }
  const std::vector<VariableSpec>& vars() const { return vars_; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::span<const std::size_t> cardinalities() const { return cards_; }
  std::uint64_t m() const { return m_; }

  /// Number of cases consistent with a partial assignment; count({}) == m().
  std::uint64_t count(const Assignment& partial) const;

  /// Contingency counts over `order` (in the given order, last fastest).
  std::vector<std::uint64_t> project(std::span<const std::size_t> order) const;

  bool operator==(const Dataset& other) const {
    return vars_ == other.vars_ && counts_ == other.counts_;
  }

 private:
  std::vector<VariableSpec> vars_;
  std::vector<std::size_t> cards_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t m_ = 0;
};

/// m i.i.d. draws by inverse CDF over the flat table. The generator is
/// std::mt19937_64 seeded with `seed`; each draw consumes one 64-bit output,
/// mapped to [0, 1) through its top 53 bits, so results are reproducible
/// across platforms.
Dataset sample(const JointTable& table, std::uint64_t m, std::uint64_t seed);

/// Dataset whose counts equal m * P(c) exactly for every configuration.
/// Throws NonRealizable when some m * P(c) is not an integer (within 1e-9).
Dataset exact_dataset(const JointTable& table, std::uint64_t m);

/// Relative-frequency table counts[c] / m.
JointTable empirical(const Dataset& dataset);

}  // namespace pi_forge
