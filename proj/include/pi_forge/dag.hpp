#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pi_forge/jpd.hpp"

namespace pi_forge {

/// (parent, child)
using Arc = std::pair<std::size_t, std::size_t>;
/// (a, b) with a < b
using Link = std::pair<std::size_t, std::size_t>;

/// Undirected graph over n nodes; links are stored with the smaller index first.
class UGraph {
 public:
  explicit UGraph(std::size_t n) : n_(n) {}
  static UGraph complete(std::size_t n);

  std::size_t size() const { return n_; }
  void add_link(std::size_t a, std::size_t b);
  void remove_link(std::size_t a, std::size_t b);
  bool has_link(std::size_t a, std::size_t b) const;
  const std::set<Link>& links() const { return links_; }
  VarSet neighbors(std::size_t x) const;
  bool is_connected() const;
  bool is_complete() const;

  bool operator==(const UGraph&) const = default;

 private:
  std::size_t n_;
  std::set<Link> links_;
};

/// DAG with per-node sorted parent sets. When an ordering is attached every
/// arc must point forward in it.
class Dag {
 public:
  explicit Dag(std::size_t n);
  Dag(std::size_t n, std::vector<std::size_t> ordering);

  std::size_t size() const { return parents_.size(); }
  const VarSet& parents(std::size_t x) const { return parents_.at(x); }
  const std::optional<std::vector<std::size_t>>& ordering() const { return ordering_; }

  /// Throws InvalidInput on self-loops, duplicates, cycles or ordering violations.
  void add_arc(std::size_t parent, std::size_t child);
  void remove_arc(std::size_t parent, std::size_t child);
  bool has_arc(std::size_t parent, std::size_t child) const;
  bool can_add_arc(std::size_t parent, std::size_t child) const;

  /// All arcs sorted by (parent, child).
  std::vector<Arc> arcs() const;
  std::size_t num_arcs() const;

  UGraph skeleton() const;
  /// Skeleton plus links between co-parents.
  UGraph moral_graph() const;

  bool operator==(const Dag& other) const { return parents_ == other.parents_; }

 private:
  bool reaches(std::size_t from, std::size_t to) const;

  std::vector<VarSet> parents_;
  std::optional<std::vector<std::size_t>> ordering_;
  std::vector<std::size_t> position_;
};

/// Checks that `ordering` is a permutation of 0..n-1; throws InvalidArgument otherwise.
void validate_ordering(const std::vector<std::size_t>& ordering, std::size_t n);

}  // namespace pi_forge
