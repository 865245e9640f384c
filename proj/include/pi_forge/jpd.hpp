#pragma once

// Dense joint probability tables over discrete variables and the exact
// queries the learners are built on: marginals, conditionals, entropy,
// mutual information and conditional independence.
//
// All information quantities are in nats.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pi_forge {

struct VariableSpec {
  std::string name;
  std::size_t cardinality = 2;

  bool operator==(const VariableSpec&) const = default;
};

/// Variable index -> value index. Used both for full configurations and for
/// partial (evidence) assignments.
using Assignment = std::map<std::size_t, std::size_t>;

/// Sorted, duplicate-free list of variable indices.
using VarSet = std::vector<std::size_t>;

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kDefaultIndependenceTolerance = 1e-9;

/// `count` binary variables named X1..Xn.
std::vector<VariableSpec> binary_variables(std::size_t count);

/// Joint distribution stored as a flat array, last variable varying fastest.
/// Immutable once constructed.
class JointTable {
 public:
  /// Default cap on the number of cells (20 binary variables).
  static constexpr std::size_t kDefaultMaxCells = std::size_t{1} << 20;

  JointTable(std::vector<VariableSpec> vars, std::vector<double> probs,
             std::size_t max_cells = kDefaultMaxCells);

  static JointTable uniform(std::vector<VariableSpec> vars);

  std::size_t num_vars() const { return vars_.size(); }
  std::size_t size() const { return probs_.size(); }
  const std::vector<VariableSpec>& vars() const { return vars_; }
  std::span<const double> probs() const { return probs_; }
  std::span<const std::size_t> cardinalities() const { return cards_; }
  double operator[](std::size_t flat) const { return probs_[flat]; }

  /// Probability of a full configuration given as a value tuple.
  double at(std::span<const std::size_t> config) const;

  std::size_t index_of(const Assignment& full) const;
  std::size_t index_of(std::span<const std::size_t> config) const;
  std::vector<std::size_t> config_of(std::size_t flat) const;

  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const JointTable& other) const {
    return vars_ == other.vars_ && probs_ == other.probs_;
  }

 private:
  std::vector<VariableSpec> vars_;
  std::vector<std::size_t> cards_;
  std::vector<std::size_t> strides_;
  std::vector<double> probs_;
};

/// Marginal over `keep`, variables in their original relative order.
JointTable marginalize(const JointTable& table, const VarSet& keep);

/// Marginal over `order` in exactly the given order (which need not be
/// sorted). Returns the raw flat array, last listed variable fastest.
std::vector<double> project(const JointTable& table, std::span<const std::size_t> order);

/// Renormalized table over the variables `evidence` leaves unbound.
JointTable condition(const JointTable& table, const Assignment& evidence);

/// Shannon entropy with 0 ln 0 = 0.
double entropy(std::span<const double> probs);
double entropy(const JointTable& table);

/// Average mutual information I(X;Y).
double mutual_information(const JointTable& table, std::size_t x, std::size_t y);

/// I(U;V|Z). A fast screening form of the independence test; is_independent
/// remains the authoritative check.
double conditional_mutual_information(const JointTable& table, const VarSet& u, const VarSet& z,
                                      const VarSet& v);

/// Ind(U, Z, V): for every configuration with P(v,z) > 0,
/// |P(u|v,z) - P(u|z)| <= tol. `z` may be empty (marginal independence).
bool is_independent(const JointTable& table, const VarSet& u, const VarSet& z, const VarSet& v,
                    double tol = kDefaultIndependenceTolerance);

/// Joint of two independent tables; variables of `a` come first.
JointTable independent_product(const JointTable& a, const JointTable& b);

/// The product of all singleton marginals of `table`.
JointTable product_of_marginals(const JointTable& table);

}  // namespace pi_forge
