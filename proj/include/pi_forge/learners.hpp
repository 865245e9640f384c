#pragma once

// Structure learners with a configurable lookahead width. Width 1 is the
// classic single-link search; larger widths let one step add several arcs
// into a common child at once.

#include <cstddef>
#include <optional>
#include <vector>

#include "pi_forge/dag.hpp"
#include "pi_forge/dataset.hpp"
#include "pi_forge/jpd.hpp"
#include "pi_forge/scores.hpp"

namespace pi_forge {

/// Entropy and MDL steps must improve by more than this to be accepted;
/// candidates closer than this are tied.
inline constexpr double kImprovementTolerance = 1e-12;

enum class TraceMode {
  /// Each accepted step adds its arcs to the current structure.
  Incremental,
  /// Each step is a complete candidate; an accepted one replaces the incumbent.
  Candidates,
};

struct SearchStep {
  std::vector<Arc> arcs;
  double score_before = 0.0;
  double score_after = 0.0;
  bool accepted = false;
};

struct SearchTrace {
  ScoreKind kind = ScoreKind::EntropyNats;
  TraceMode mode = TraceMode::Incremental;
  std::vector<SearchStep> steps;
  ScoreValue final_score;
  /// Lam-Bacchus only: the MI-descending link list.
  std::vector<LinkWeight> link_list;
};

struct LearnResult {
  Dag dag;
  SearchTrace trace;
};

/// Rebuilds the learned structure by applying the accepted steps to `initial`.
Dag replay(const SearchTrace& trace, Dag initial);

/// Entropy-driven search from the empty graph. Every step scores all sets of
/// up to `lookahead` arcs that share one child and respect `ordering`, and
/// takes the one with the lowest network entropy if it improves.
LearnResult kutato_learn(const JointTable& source, const std::vector<std::size_t>& ordering,
                         std::size_t lookahead = 1);
LearnResult kutato_learn(const Dataset& data, const std::vector<std::size_t>& ordering,
                         std::size_t lookahead = 1);

/// K2: for each node in `ordering`, grows its parent set from its
/// predecessors by the candidate set (size <= lookahead) with the highest
/// K2 score, while that strictly improves and |parents| < max_parents.
/// Near-ties in log space are settled with the exact rational score.
LearnResult k2_learn(const Dataset& data, const std::vector<std::size_t>& ordering,
                     std::size_t max_parents, std::size_t lookahead = 1);

struct PcRemoval {
  std::size_t pass = 0;
  Link link;
  VarSet separating_set;
};

struct PcResult {
  UGraph skeleton;
  std::vector<PcRemoval> removals;
  std::size_t passes_run = 0;
};

/// PC adjacency phase (order-independent variant). Pass d tests each
/// remaining link against every size-d subset of either endpoint's neighbors
/// as they stood at the start of the pass. Stops after pass `max_order`
/// (default n - 2) or when no endpoint has d other neighbors.
PcResult pc_skeleton(const JointTable& source, double tol = kDefaultIndependenceTolerance,
                     std::optional<std::size_t> max_order = std::nullopt);

struct LamBacchusOptions {
  /// Candidates evaluated per link-count class; the first is always the
  /// prefix of the link list.
  std::size_t budget_per_class = 1;
  /// Largest link-count class explored. Defaults to n - 1.
  std::optional<std::size_t> max_links;
  /// Sample size used by the MDL score for table sources.
  double sample_size = 1000.0;
};

struct LamBacchusClass {
  std::size_t links = 0;
  std::size_t candidates_evaluated = 0;
  std::vector<Arc> best_arcs;
  double cross_entropy = 0.0;
  double description_length = 0.0;
};

struct LamBacchusResult {
  Dag dag;
  SearchTrace trace;
  std::vector<LamBacchusClass> classes;
};

/// MDL search over candidates generated from the MI-descending link list.
/// Within a class the candidate with the smallest cross entropy wins; across
/// classes the smallest description length wins. Links are oriented from the
/// lower to the higher variable index.
LamBacchusResult lam_bacchus_learn(const JointTable& source, const LamBacchusOptions& options = {});
LamBacchusResult lam_bacchus_learn(const Dataset& data, LamBacchusOptions options = {});

}  // namespace pi_forge
