#include "pi_forge/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pi_forge/detail/indexing.hpp"
#include "pi_forge/error.hpp"
#include "pi_forge/parallel.hpp"

namespace pi_forge {

namespace {

struct Candidate {
  std::size_t child = 0;
  VarSet added;  // new parents, sorted
  std::vector<Arc> arcs;
  double score = 0.0;
};

VarSet merged(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VarSet predecessors(const std::vector<std::size_t>& ordering, std::size_t pos, const VarSet& exclude) {
  VarSet out;
  for (std::size_t i = 0; i < pos; ++i) {
    if (!std::binary_search(exclude.begin(), exclude.end(), ordering[i])) out.push_back(ordering[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Every non-empty subset of `pool` with at most `width` members.
void append_subsets(const VarSet& pool, std::size_t width, std::size_t child,
                    std::vector<Candidate>& out) {
  for (std::size_t size = 1; size <= std::min(width, pool.size()); ++size) {
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    do {
      Candidate c;
      c.child = child;
      for (auto i : idx) {
        c.added.push_back(pool[i]);
        c.arcs.emplace_back(pool[i], child);
      }
      out.push_back(std::move(c));
    } while (detail::next_combination(idx, pool.size()));
  }
}

void check_lookahead(std::size_t lookahead) {
  if (lookahead < 1) throw Error(ErrorCode::InvalidArgument, "lookahead width must be at least 1");
}

}  // namespace

Dag replay(const SearchTrace& trace, Dag initial) {
  for (const auto& step : trace.steps) {
    if (!step.accepted) continue;
    if (trace.mode == TraceMode::Candidates) {
      for (const auto& [p, c] : initial.arcs()) initial.remove_arc(p, c);
    }
    for (const auto& [p, c] : step.arcs) initial.add_arc(p, c);
  }
  return initial;
}

LearnResult kutato_learn(const JointTable& source, const std::vector<std::size_t>& ordering,
                         std::size_t lookahead) {
  check_lookahead(lookahead);
  const std::size_t n = source.num_vars();
  Dag dag(n, ordering);
  SearchTrace trace;
  trace.kind = ScoreKind::EntropyNats;
  ScoreValue current = network_entropy(source, dag);

  while (true) {
    std::vector<Candidate> candidates;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t child = ordering[pos];
      append_subsets(predecessors(ordering, pos, dag.parents(child)), lookahead, child, candidates);
    }
    if (candidates.empty()) break;

    parallel_for(candidates.size(), [&](std::size_t i) {
      auto& c = candidates[i];
      const double term = node_entropy_term(source, c.child, merged(dag.parents(c.child), c.added));
      c.score = current.value - current.node_terms[c.child] + term;
    });

    const double best_score =
        std::min_element(candidates.begin(), candidates.end(),
                         [](const Candidate& a, const Candidate& b) { return a.score < b.score; })
            ->score;
    const Candidate* best = nullptr;
    for (const auto& c : candidates) {
      if (c.score <= best_score + kImprovementTolerance && (!best || c.arcs < best->arcs)) best = &c;
    }

    SearchStep step{best->arcs, current.value, best->score, false};
    if (best->score < current.value - kImprovementTolerance) {
      step.accepted = true;
      for (const auto& [p, c] : best->arcs) dag.add_arc(p, c);
      current = network_entropy(source, dag);
      step.score_after = current.value;
      trace.steps.push_back(std::move(step));
    } else {
      trace.steps.push_back(std::move(step));
      break;
    }
  }
  trace.final_score = current;
  return {std::move(dag), std::move(trace)};
}

LearnResult kutato_learn(const Dataset& data, const std::vector<std::size_t>& ordering,
                         std::size_t lookahead) {
  return kutato_learn(empirical(data), ordering, lookahead);
}

namespace {

// Orders two parent sets of x by K2 score: >0 when `a` scores higher.
int compare_k2(const Dataset& data, std::size_t x, const VarSet& a, double log_a, const VarSet& b,
               double log_b) {
  const double scale = std::max({1.0, std::fabs(log_a), std::fabs(log_b)});
  if (std::fabs(log_a - log_b) > 1e-9 * scale) return log_a > log_b ? 1 : -1;
  const Rational ga = k2_g_exact(data, x, a);
  const Rational gb = k2_g_exact(data, x, b);
  if (ga == gb) return 0;
  return ga > gb ? 1 : -1;
}

}  // namespace

LearnResult k2_learn(const Dataset& data, const std::vector<std::size_t>& ordering,
                     std::size_t max_parents, std::size_t lookahead) {
  check_lookahead(lookahead);
  if (max_parents < 1) throw Error(ErrorCode::InvalidArgument, "max_parents must be at least 1");
  const std::size_t n = data.num_vars();
  Dag dag(n, ordering);
  SearchTrace trace;
  trace.kind = ScoreKind::LogK2;
  ScoreValue total = k2_network_score(data, dag);

  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t x = ordering[pos];
    double current_log = total.node_terms[x];
    while (dag.parents(x).size() < max_parents) {
      const VarSet parents = dag.parents(x);
      std::vector<Candidate> candidates;
      append_subsets(predecessors(ordering, pos, parents), std::min(lookahead, max_parents - parents.size()),
                     x, candidates);
      if (candidates.empty()) break;
      std::sort(candidates.begin(), candidates.end(),
                [](const Candidate& a, const Candidate& b) { return a.arcs < b.arcs; });

      parallel_for(candidates.size(), [&](std::size_t i) {
        candidates[i].score = k2_g_log(data, x, merged(parents, candidates[i].added));
      });

      const Candidate* best = &candidates.front();
      VarSet best_set = merged(parents, best->added);
      for (std::size_t i = 1; i < candidates.size(); ++i) {
        VarSet set = merged(parents, candidates[i].added);
        if (compare_k2(data, x, set, candidates[i].score, best_set, best->score) > 0) {
          best = &candidates[i];
          best_set = std::move(set);
        }
      }

      const double before = total.value;
      const double after = before - current_log + best->score;
      SearchStep step{best->arcs, before, after, false};
      if (compare_k2(data, x, best_set, best->score, parents, current_log) > 0) {
        step.accepted = true;
        for (const auto& [p, c] : best->arcs) dag.add_arc(p, c);
        total.node_terms[x] = best->score;
        total.value = after;
        current_log = best->score;
        trace.steps.push_back(std::move(step));
      } else {
        trace.steps.push_back(std::move(step));
        break;
      }
    }
  }
  trace.final_score = k2_network_score(data, dag);
  return {std::move(dag), std::move(trace)};
}

PcResult pc_skeleton(const JointTable& source, double tol, std::optional<std::size_t> max_order) {
  const std::size_t n = source.num_vars();
  const std::size_t last_order = max_order.value_or(n >= 2 ? n - 2 : 0);
  PcResult out{UGraph::complete(n), {}, 0};

  for (std::size_t order = 0; order <= last_order; ++order) {
    std::vector<VarSet> adjacency(n);
    for (std::size_t x = 0; x < n; ++x) adjacency[x] = out.skeleton.neighbors(x);
    const auto links = out.skeleton.links();

    bool testable = false;
    for (const auto& [a, b] : links) {
      bool removed = false;
      for (const auto& [x, y] : {Link{a, b}, Link{b, a}}) {
        VarSet pool;
        for (auto v : adjacency[x]) {
          if (v != y) pool.push_back(v);
        }
        if (pool.size() < order) continue;
        testable = true;
        std::vector<std::size_t> idx(order);
        for (std::size_t i = 0; i < order; ++i) idx[i] = i;
        do {
          VarSet z;
          for (auto i : idx) z.push_back(pool[i]);
          if (is_independent(source, {a}, z, {b}, tol)) {
            out.skeleton.remove_link(a, b);
            out.removals.push_back({order, {a, b}, std::move(z)});
            removed = true;
            break;
          }
        } while (detail::next_combination(idx, pool.size()));
        if (removed) break;
      }
    }
    if (!testable) break;
    out.passes_run = order + 1;
  }
  return out;
}

LamBacchusResult lam_bacchus_learn(const JointTable& source, const LamBacchusOptions& options) {
  if (options.budget_per_class < 1) {
    throw Error(ErrorCode::InvalidArgument, "budget_per_class must be at least 1");
  }
  const std::size_t n = source.num_vars();
  LamBacchusResult out{Dag(n), {}, {}};
  out.trace.kind = ScoreKind::MdlBits;
  out.trace.mode = TraceMode::Candidates;
  out.trace.link_list = link_weights(source);
  const auto& list = out.trace.link_list;
  const std::size_t last_class = std::min(options.max_links.value_or(n - 1), list.size());

  double incumbent = std::numeric_limits<double>::infinity();
  for (std::size_t links = 0; links <= last_class; ++links) {
    LamBacchusClass cls;
    cls.links = links;
    cls.cross_entropy = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(links);
    for (std::size_t i = 0; i < links; ++i) idx[i] = i;
    std::optional<Dag> best;
    do {
      Dag candidate(n);
      for (auto i : idx) candidate.add_arc(list[i].link.first, list[i].link.second);
      const double ce = cross_entropy(source, candidate, source).value;
      ++cls.candidates_evaluated;
      if (!best || ce < cls.cross_entropy - kImprovementTolerance) {
        cls.cross_entropy = ce;
        best = std::move(candidate);
      }
    } while (cls.candidates_evaluated < options.budget_per_class &&
             detail::next_combination(idx, list.size()));

    cls.best_arcs = best->arcs();
    cls.description_length = description_length(*best, source, options.sample_size).value;
    SearchStep step{cls.best_arcs, incumbent, cls.description_length, false};
    if (cls.description_length < incumbent - kImprovementTolerance) {
      step.accepted = true;
      incumbent = cls.description_length;
      out.dag = *best;
    }
    out.trace.steps.push_back(std::move(step));
    out.classes.push_back(std::move(cls));
  }
  out.trace.final_score = description_length(out.dag, source, options.sample_size);
  return out;
}

LamBacchusResult lam_bacchus_learn(const Dataset& data, LamBacchusOptions options) {
  options.sample_size = static_cast<double>(data.m());
  return lam_bacchus_learn(empirical(data), options);
}

}  // namespace pi_forge
