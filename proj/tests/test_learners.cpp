#include <algorithm>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "pi_forge/learners.hpp"
#include "pi_forge/pi_models.hpp"
#include "support.hpp"

using namespace pi_forge;

namespace {

const double kLn2 = std::numbers::ln2;

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  return o;
}

std::vector<std::vector<std::size_t>> all_orderings(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  auto o = identity(n);
  do out.push_back(o);
  while (std::next_permutation(o.begin(), o.end()));
  return out;
}

// Textbook single-arc greedy: rescore the whole network for every legal arc.
// Scores within 1e-12 of the best tie and go to the smallest arc.
Dag naive_kutato(const JointTable& t, const std::vector<std::size_t>& ordering) {
  const std::size_t n = t.num_vars();
  Dag dag(n, ordering);
  double current = network_entropy(t, dag).value;
  while (true) {
    std::vector<std::pair<Arc, double>> scored;
    for (std::size_t pc = 0; pc < n; ++pc) {
      for (std::size_t pp = 0; pp < pc; ++pp) {
        const Arc arc{ordering[pp], ordering[pc]};
        if (dag.has_arc(arc.first, arc.second)) continue;
        Dag trial = dag;
        trial.add_arc(arc.first, arc.second);
        scored.emplace_back(arc, network_entropy(t, trial).value);
      }
    }
    if (scored.empty()) return dag;
    double low = scored.front().second;
    for (const auto& [arc, s] : scored) low = std::min(low, s);
    std::optional<Arc> best;
    for (const auto& [arc, s] : scored) {
      if (s <= low + 1e-12 && (!best || arc < *best)) best = arc;
    }
    if (!(low < current - 1e-12)) return dag;
    dag.add_arc(best->first, best->second);
    current = network_entropy(t, dag).value;
  }
}

// K2 with single-parent additions, scored in exact rationals.
Dag naive_k2(const Dataset& d, const std::vector<std::size_t>& ordering, std::size_t max_parents) {
  Dag dag(d.num_vars(), ordering);
  for (std::size_t pos = 0; pos < ordering.size(); ++pos) {
    const std::size_t x = ordering[pos];
    Rational current = k2_g_exact(d, x, {});
    while (dag.parents(x).size() < max_parents) {
      std::optional<std::size_t> best;
      Rational best_score = current;
      for (std::size_t pp = 0; pp < pos; ++pp) {
        const std::size_t y = ordering[pp];
        if (dag.has_arc(y, x)) continue;
        auto parents = dag.parents(x);
        parents.push_back(y);
        std::sort(parents.begin(), parents.end());
        const Rational s = k2_g_exact(d, x, parents);
        if (s > best_score || (best && s == best_score && y < *best)) {
          best = y;
          best_score = s;
        }
      }
      if (!best || !(best_score > current)) break;
      dag.add_arc(*best, x);
      current = best_score;
    }
  }
  return dag;
}

struct ThreadsEnv {
  explicit ThreadsEnv(const char* value) { setenv("PI_FORGE_THREADS", value, 1); }
  ~ThreadsEnv() { unsetenv("PI_FORGE_THREADS"); }
};

}  // namespace

TEST_CASE("single-link Kutato misses every full PI model") {
  const auto t1 = fixture("table1");
  for (const auto& o : all_orderings(4)) {
    const auto r = kutato_learn(t1, o, 1);
    CHECK(r.dag.num_arcs() == 0);
    CHECK(r.trace.final_score.value == doctest::Approx(4 * kLn2));
  }
  for (int eta = 3; eta <= 5; ++eta) {
    CHECK(kutato_learn(construct_full_pi({eta, 0.3}), identity(eta), 1).dag.num_arcs() == 0);
  }
  std::mt19937_64 rng(2);
  const auto p = product_of_marginals(testing::random_table(rng, {2, 3, 2}));
  CHECK(kutato_learn(p, identity(3), 1).dag.num_arcs() == 0);
}

TEST_CASE("wide lookahead recovers the parity structure") {
  const auto r = kutato_learn(fixture("table1"), identity(4), 3);
  const std::vector<Arc> expected{{0, 3}, {1, 3}, {2, 3}};
  CHECK(r.dag.arcs() == expected);
  CHECK(r.trace.final_score.value == doctest::Approx(3 * kLn2).epsilon(1e-12));
  CHECK(replay(r.trace, Dag(4, identity(4))) == r.dag);

  for (int eta = 3; eta <= 5; ++eta) {
    const auto t = construct_full_pi({eta, 0.9});
    auto reversed = identity(eta);
    std::reverse(reversed.begin(), reversed.end());
    const auto w = kutato_learn(t, reversed, eta - 1);
    CHECK(w.dag.skeleton().is_connected());
  }
}

TEST_CASE("Kutato agrees with a naive greedy search") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 15; ++trial) {
    const auto t = testing::random_table(rng, {2, 2, 3, 2});
    auto o = identity(4);
    std::shuffle(o.begin(), o.end(), rng);
    const auto r = kutato_learn(t, o, 1);
    CHECK(r.dag == naive_kutato(t, o));
    CHECK(replay(r.trace, Dag(4, o)) == r.dag);
    CHECK(r.trace.final_score.value == doctest::Approx(network_entropy(t, r.dag).value));
    for (const auto& step : r.trace.steps) {
      if (step.accepted) CHECK(step.score_after < step.score_before);
    }
    for (const auto& [p, c] : r.dag.arcs()) {
      CHECK(std::find(o.begin(), o.end(), p) < std::find(o.begin(), o.end(), c));
    }
  }
}

TEST_CASE("learners are deterministic across thread counts") {
  std::mt19937_64 rng(55);
  const auto t = testing::random_table(rng, {2, 2, 2, 2, 2});
  const auto data = sample(t, 200, 3);
  LearnResult a{Dag(0), {}}, b{Dag(0), {}}, c{Dag(0), {}}, d{Dag(0), {}};
  {
    ThreadsEnv env("1");
    a = kutato_learn(t, identity(5), 2);
    c = k2_learn(data, identity(5), 3, 2);
  }
  {
    ThreadsEnv env("8");
    b = kutato_learn(t, identity(5), 2);
    d = k2_learn(data, identity(5), 3, 2);
  }
  CHECK(a.dag == b.dag);
  CHECK(a.trace.final_score.value == b.trace.final_score.value);
  CHECK(c.dag == d.dag);
}

TEST_CASE("single-parent K2 misses the parity model") {
  for (std::uint64_t m : {16u, 24u, 40u, 80u}) {
    const auto d = exact_dataset(fixture("table1"), m);
    for (const auto& o : all_orderings(4)) CHECK(k2_learn(d, o, 3, 1).dag.num_arcs() == 0);
  }
  const auto one = Dataset::from_cases(binary_variables(3), {{0, 1, 1}});
  CHECK(k2_learn(one, identity(3), 2, 1).dag.num_arcs() == 0);
}

TEST_CASE("K2 with lookahead three finds the parity parents") {
  const auto d = exact_dataset(fixture("table1"), 16);
  CHECK(k2_g_exact(d, 3, {0, 1, 2}) > k2_g_exact(d, 3, {}));
  const auto r = k2_learn(d, identity(4), 3, 3);
  CHECK(r.dag.parents(3) == VarSet{0, 1, 2});
  CHECK(replay(r.trace, Dag(4, identity(4))) == r.dag);
}

TEST_CASE("K2 agrees with an exact naive search") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 15; ++trial) {
    const auto t = testing::random_table(rng, {2, 2, 2, 2}, 0.3);
    const auto d = sample(t, 60, trial);
    auto o = identity(4);
    std::shuffle(o.begin(), o.end(), rng);
    for (std::size_t max_parents : {1u, 2u, 3u}) {
      const auto r = k2_learn(d, o, max_parents, 1);
      CHECK(r.dag == naive_k2(d, o, max_parents));
      for (std::size_t x = 0; x < 4; ++x) CHECK(r.dag.parents(x).size() <= max_parents);
    }
  }
}

TEST_CASE("PC skeleton") {
  const auto r4 = pc_skeleton(fixture("table4"), 1e-9, 2);
  std::set<Link> expected{{1, 2}, {1, 3}, {2, 3}};
  CHECK(r4.skeleton.links() == expected);
  std::set<Link> pass0;
  for (const auto& rm : r4.removals) {
    if (rm.pass == 0) pass0.insert(rm.link);
  }
  CHECK(pass0 == std::set<Link>{{0, 1}, {0, 2}});

  const auto r1 = pc_skeleton(fixture("table1"), 1e-9, 2);
  CHECK(r1.skeleton.links().empty());
  CHECK(r1.removals.size() == 6);
  for (const auto& rm : r1.removals) CHECK(rm.pass == 0);

  const JointTable chain(binary_variables(3), {0.36, 0.04, 0.01, 0.09, 0.09, 0.01, 0.04, 0.36});
  const auto rc = pc_skeleton(chain, 1e-9, 2);
  CHECK(rc.skeleton.links() == std::set<Link>{{0, 1}, {1, 2}});
  REQUIRE(rc.removals.size() == 1);
  CHECK(rc.removals[0].separating_set == VarSet{1});

  CHECK(pc_skeleton(fixture("table4"), 1e-9, 0).skeleton.links().size() == 4);
}

TEST_CASE("PC removals are justified and generic tables stay complete") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = testing::random_table(rng, {2, 2}, 0.0);
    const auto b = testing::random_table(rng, {3, 2}, 0.0, "W");
    const auto t = independent_product(a, b);
    const auto r = pc_skeleton(t);
    for (const auto& rm : r.removals) {
      CHECK(is_independent(t, {rm.link.first}, rm.separating_set, {rm.link.second}));
    }
    CHECK(r.skeleton.links() == std::set<Link>{{0, 1}, {2, 3}});

    const auto g = testing::random_table(rng, {2, 2, 2, 2}, 0.0);
    CHECK(pc_skeleton(g).skeleton.is_complete());
  }
}

TEST_CASE("Lam-Bacchus") {
  const auto r3 = lam_bacchus_learn(fixture("table3"));
  REQUIRE(r3.trace.link_list.size() == 3);
  CHECK(r3.trace.link_list[1].mi < 1e-12);
  CHECK(r3.trace.link_list[2].mi < 1e-12);
  CHECK(r3.dag.arcs() == std::vector<Arc>{{1, 2}});

  const auto r1 = lam_bacchus_learn(fixture("table1"));
  CHECK(r1.dag.num_arcs() == 0);
  CHECK(r1.classes.size() == 4);

  LamBacchusOptions all;
  all.max_links = 6;
  all.budget_per_class = 20;
  const auto wide = lam_bacchus_learn(fixture("table1"), all);
  CHECK(wide.classes.size() == 7);
  CHECK(wide.classes.back().cross_entropy == doctest::Approx(0.0).scale(1.0));

  std::mt19937_64 rng(12);
  const auto p = product_of_marginals(testing::random_table(rng, {2, 3, 2}));
  CHECK(lam_bacchus_learn(p).dag.num_arcs() == 0);

  const auto t = testing::random_table(rng, {2, 2, 2, 2});
  LamBacchusOptions opts;
  opts.budget_per_class = 3;
  const auto r = lam_bacchus_learn(t, opts);
  CHECK(replay(r.trace, Dag(4)) == r.dag);
  for (const auto& cls : r.classes) CHECK(cls.candidates_evaluated <= 3);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cls : r.classes) best = std::min(best, cls.description_length);
  CHECK(r.trace.final_score.value == doctest::Approx(best));
  for (const auto& [a, b] : r.dag.arcs()) CHECK(a < b);

  const auto from_data = lam_bacchus_learn(exact_dataset(fixture("table3"), 40));
  CHECK(from_data.trace.link_list.size() == 3);
}

TEST_CASE("learner argument validation") {
  const auto t1 = fixture("table1");
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [&] { (void)kutato_learn(t1, identity(4), 0); }));
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [&] { (void)kutato_learn(t1, {0, 1, 1, 2}, 1); }));
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [&] { (void)kutato_learn(t1, {0, 1, 2}, 1); }));
  const auto d = exact_dataset(t1, 16);
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [&] { (void)k2_learn(d, identity(4), 0, 1); }));
  LamBacchusOptions zero;
  zero.budget_per_class = 0;
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [&] { (void)lam_bacchus_learn(t1, zero); }));
}
