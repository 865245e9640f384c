#include "pi_forge/dag.hpp"

#include <algorithm>
#include <string>

#include "pi_forge/error.hpp"

namespace pi_forge {

UGraph UGraph::complete(std::size_t n) {
  UGraph g(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) g.links_.emplace(a, b);
  }
  return g;
}

void UGraph::add_link(std::size_t a, std::size_t b) {
  if (a == b) throw Error(ErrorCode::InvalidInput, "self-loop");
  if (a >= n_ || b >= n_) throw Error(ErrorCode::InvalidInput, "node index out of range");
  links_.emplace(std::min(a, b), std::max(a, b));
}

void UGraph::remove_link(std::size_t a, std::size_t b) { links_.erase({std::min(a, b), std::max(a, b)}); }

bool UGraph::has_link(std::size_t a, std::size_t b) const {
  return links_.contains({std::min(a, b), std::max(a, b)});
}

VarSet UGraph::neighbors(std::size_t x) const {
  VarSet out;
  for (const auto& [a, b] : links_) {
    if (a == x) out.push_back(b);
    if (b == x) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool UGraph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<bool> seen(n_, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    for (auto y : neighbors(x)) {
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

bool UGraph::is_complete() const { return links_.size() == n_ * (n_ - 1) / 2; }

void validate_ordering(const std::vector<std::size_t>& ordering, std::size_t n) {
  if (ordering.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "ordering must list all " + std::to_string(n) + " variables");
  }
  std::vector<bool> seen(n, false);
  for (auto v : ordering) {
    if (v >= n || seen[v]) throw Error(ErrorCode::InvalidArgument, "ordering is not a permutation");
    seen[v] = true;
  }
}

Dag::Dag(std::size_t n) : parents_(n) {}

Dag::Dag(std::size_t n, std::vector<std::size_t> ordering) : parents_(n) {
  validate_ordering(ordering, n);
  position_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) position_[ordering[i]] = i;
  ordering_ = std::move(ordering);
}

bool Dag::reaches(std::size_t from, std::size_t to) const {
  // Walks parent links backwards from `to`.
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack{to};
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    if (x == from) return true;
    for (auto p : parents_[x]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return false;
}

bool Dag::can_add_arc(std::size_t parent, std::size_t child) const {
  if (parent == child || parent >= size() || child >= size()) return false;
  if (has_arc(parent, child)) return false;
  if (ordering_ && position_[parent] >= position_[child]) return false;
  return !reaches(child, parent);
}

void Dag::add_arc(std::size_t parent, std::size_t child) {
  if (!can_add_arc(parent, child)) {
    throw Error(ErrorCode::InvalidInput, "arc " + std::to_string(parent) + "->" +
                                             std::to_string(child) + " is not admissible");
  }
  auto& ps = parents_[child];
  ps.insert(std::lower_bound(ps.begin(), ps.end(), parent), parent);
}

void Dag::remove_arc(std::size_t parent, std::size_t child) {
  auto& ps = parents_.at(child);
  ps.erase(std::remove(ps.begin(), ps.end(), parent), ps.end());
}

bool Dag::has_arc(std::size_t parent, std::size_t child) const {
  const auto& ps = parents_.at(child);
  return std::binary_search(ps.begin(), ps.end(), parent);
}

std::vector<Arc> Dag::arcs() const {
  std::vector<Arc> out;
  for (std::size_t child = 0; child < size(); ++child) {
    for (auto p : parents_[child]) out.emplace_back(p, child);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Dag::num_arcs() const {
  std::size_t total = 0;
  for (const auto& ps : parents_) total += ps.size();
  return total;
}

UGraph Dag::skeleton() const {
  UGraph g(size());
  for (const auto& [p, c] : arcs()) g.add_link(p, c);
  return g;
}

UGraph Dag::moral_graph() const {
  UGraph g = skeleton();
  for (const auto& ps : parents_) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) g.add_link(ps[i], ps[j]);
    }
  }
  return g;
}

}  // namespace pi_forge
