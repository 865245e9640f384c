#include "pi_forge/repro.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pi_forge/error.hpp"
#include "pi_forge/k2_analysis.hpp"
#include "pi_forge/learners.hpp"
#include "pi_forge/pi_models.hpp"
#include "pi_forge/scores.hpp"

namespace pi_forge {

namespace {

constexpr int kEtas[] = {3, 4, 5, 6};
constexpr const char* kQs[] = {"0.1", "0.3", "0.7", "0.9", "1.0"};

struct NamedModel {
  std::string name;
  JointTable table;
};

std::vector<NamedModel> generated_models(bool with_table1) {
  std::vector<NamedModel> models;
  for (int eta : kEtas) {
    for (const char* q : kQs) {
      models.push_back({"eta=" + std::to_string(eta) + ",q=" + q, construct_full_pi({eta, std::stod(q)})});
    }
  }
  if (with_table1) models.push_back({"table1", fixture("table1")});
  return models;
}

std::vector<std::vector<std::size_t>> three_orderings(std::size_t n) {
  std::vector<std::size_t> identity(n), reversed(n), rotated(n);
  for (std::size_t i = 0; i < n; ++i) {
    identity[i] = i;
    reversed[i] = n - 1 - i;
    rotated[i] = (i + 1) % n;
  }
  return {identity, reversed, rotated};
}

Json ordering_json(const std::vector<std::size_t>& ordering) { return ordering; }

CriterionResult constructor_fidelity() {
  CriterionResult r{1, "construct_full_pi(4, 1.0) equals table1 exactly", false, Json::object()};
  const auto built = construct_full_pi_exact(4, parse_decimal("1.0"));
  const auto reference = fixture_exact("table1");
  const bool exact_equal = built == reference;
  const bool double_equal = construct_full_pi({4, 1.0}) == fixture("table1");
  r.measured["exact_rational_equal"] = exact_equal;
  r.measured["double_equal"] = double_equal;
  r.passed = exact_equal && double_equal;
  return r;
}

CriterionResult generated_model_properties() {
  CriterionResult r{2, "construct_full_pi satisfies S1 exactly and S2 at tol 1e-9", true, Json::object()};
  Json failures = Json::array();
  std::size_t models = 0;
  for (int eta : kEtas) {
    for (const char* q : kQs) {
      ++models;
      const std::string name = "eta=" + std::to_string(eta) + ",q=" + q;
      const auto exact = construct_full_pi_exact(eta, parse_decimal(q));
      const Rational target(BigInt(1), BigInt(1) << (eta - 1));
      bool s1_exact = exact.total() == 1;
      for (int y = 0; y < eta && s1_exact; ++y) {
        VarSet rest;
        for (int i = 0; i < eta; ++i) {
          if (i != y) rest.push_back(static_cast<std::size_t>(i));
        }
        for (const auto& p : exact.marginalize(rest).probs) s1_exact = s1_exact && p == target;
      }
      const auto verdict = classify(construct_full_pi({eta, std::stod(q)}), 1e-9);
      if (!s1_exact || verdict.verdict != PiVerdict::FullPI) {
        failures.push_back({{"model", name}, {"s1_exact", s1_exact}, {"verdict", to_string(verdict.verdict)}});
        r.passed = false;
      }
    }
  }
  r.measured["models_checked"] = models;
  r.measured["failures"] = std::move(failures);
  return r;
}

CriterionResult fixture_classifications() {
  CriterionResult r{3, "fixture classifications and marginals", false, Json::object()};
  const auto v1 = classify(fixture("table1"));
  const auto t2 = fixture("table2");
  const auto v2 = classify(t2);
  const auto v3 = classify(fixture("table3"));
  const auto t4 = fixture("table4");

  const double expected_marginals[] = {0.6, 0.4, 0.2};
  bool marginals_ok = true;
  Json marginals = Json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    const double p0 = marginalize(t2, {i})[0];
    marginals.push_back(p0);
    marginals_ok = marginals_ok && std::fabs(p0 - expected_marginals[i]) <= 1e-12;
  }
  const std::vector<std::pair<std::size_t, std::size_t>> expected_pairs{{0, 1}, {0, 2}};
  const bool pairs_ok = v3.independent_pairs == expected_pairs;
  const bool embedded_exact = fixture_exact("table4").marginalize({0, 1, 2}) == fixture_exact("table3");
  const double p_x4 = marginalize(t4, {3})[0];

  Json pairs = Json::array();
  for (const auto& [a, b] : v3.independent_pairs) pairs.push_back({a, b});
  r.measured["table1"] = to_string(v1.verdict);
  r.measured["table2"] = to_string(v2.verdict);
  r.measured["table2_marginals_p0"] = std::move(marginals);
  r.measured["table3"] = to_string(v3.verdict);
  r.measured["table3_independent_pairs"] = std::move(pairs);
  r.measured["table4_marginal_123_equals_table3_exactly"] = embedded_exact;
  r.measured["table4_p_x4_0"] = p_x4;
  r.passed = v1.verdict == PiVerdict::FullPI && v2.verdict == PiVerdict::FullPI && marginals_ok &&
             v3.verdict == PiVerdict::PartialPI && pairs_ok && embedded_exact &&
             std::fabs(p_x4 - 0.365) <= 1e-12;
  return r;
}

CriterionResult kutato_failure() {
  CriterionResult r{4, "Kutato k=1 returns the empty dag; single arcs leave H(N) unchanged", true,
                    Json::object()};
  Json failures = Json::array();
  double max_delta = 0.0;
  std::size_t runs = 0;
  for (const auto& [name, table] : generated_models(true)) {
    const std::size_t n = table.num_vars();
    for (const auto& ordering : three_orderings(n)) {
      ++runs;
      const auto result = kutato_learn(table, ordering, 1);
      if (result.dag.num_arcs() != 0) {
        failures.push_back({{"model", name}, {"ordering", ordering_json(ordering)}});
        r.passed = false;
      }
    }
    const double empty = network_entropy(table, Dag(n)).value;
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < n; ++x) {
        if (x == y) continue;
        Dag one(n);
        one.add_arc(y, x);
        max_delta = std::max(max_delta, std::fabs(network_entropy(table, one).value - empty));
      }
    }
  }
  r.passed = r.passed && max_delta <= 1e-12;
  r.measured["runs"] = runs;
  r.measured["max_single_arc_entropy_change"] = max_delta;
  r.measured["failures"] = std::move(failures);
  return r;
}

CriterionResult kutato_recovery() {
  CriterionResult r{5, "Kutato k=eta-1 connects all variables; table1 reaches 3 ln 2", true, Json::object()};
  Json failures = Json::array();
  Json table1_entropy = Json::array();
  for (const auto& [name, table] : generated_models(true)) {
    const std::size_t n = table.num_vars();
    for (const auto& ordering : three_orderings(n)) {
      const auto result = kutato_learn(table, ordering, n - 1);
      if (!result.dag.skeleton().is_connected()) {
        failures.push_back({{"model", name}, {"ordering", ordering_json(ordering)}});
        r.passed = false;
      }
      if (name == "table1") {
        const double h = result.trace.final_score.value;
        table1_entropy.push_back(h);
        if (std::fabs(h - 3.0 * std::numbers::ln2) > 1e-9) r.passed = false;
      }
    }
  }
  r.measured["expected_table1_entropy"] = 3.0 * std::numbers::ln2;
  r.measured["table1_final_entropy"] = std::move(table1_entropy);
  r.measured["failures"] = std::move(failures);
  return r;
}

CriterionResult k2_failure() {
  CriterionResult r{6, "K2 k=1 on exact table1 datasets returns the empty dag", true, Json::object()};
  Json failures = Json::array();
  const auto table1 = fixture("table1");
  std::size_t runs = 0;
  for (std::uint64_t m : {16u, 24u, 40u, 80u}) {
    const auto data = exact_dataset(table1, m);
    for (const auto& ordering : three_orderings(4)) {
      ++runs;
      if (k2_learn(data, ordering, 3, 1).dag.num_arcs() != 0) {
        failures.push_back({{"m", m}, {"ordering", ordering_json(ordering)}});
        r.passed = false;
      }
    }
  }
  r.measured["runs"] = runs;
  r.measured["failures"] = std::move(failures);
  return r;
}

CriterionResult k2_ratio_checkpoints() {
  CriterionResult r{7, "K2 ratio checkpoints", false, Json::object()};
  const double mrp14 = min_r_prime(14);
  const double mrp12 = min_r_prime(12);
  const auto report12 = exhaustive_min_r(12);
  const double min_r12 = report12.min_r.value_or(0.0);
  bool small_m_ok = true;
  Json small = Json::array();
  for (std::int64_t m = 4; m <= 13; ++m) {
    const auto report = exhaustive_min_r(m);
    if (!report.min_r) continue;
    small.push_back({{"m", m}, {"min_r", *report.min_r}});
    small_m_ok = small_m_ok && *report.min_r > 1.0;
  }
  r.measured["min_r_prime_14"] = {{"measured", mrp14}, {"reference", 1.0096}, {"tolerance", 5e-4}};
  r.measured["min_r_prime_12"] = {{"measured", mrp12}, {"reference", 0.9855}, {"tolerance", 5e-4}};
  r.measured["exhaustive_min_r_12"] = {{"measured", min_r12}, {"reference", 1.3846}, {"tolerance", 1e-4}};
  r.measured["min_r_for_m_4_to_13"] = std::move(small);
  r.passed = std::fabs(mrp14 - 1.0096) <= 5e-4 && std::fabs(mrp12 - 0.9855) <= 5e-4 &&
             std::fabs(min_r12 - 1.3846) <= 1e-4 && small_m_ok;
  return r;
}

CriterionResult ratio_bound_properties() {
  CriterionResult r{8, "h(v) increasing, r' minimized at v=2, r > r' on random cells", true, Json::object()};
  std::size_t grid_cases = 0;
  Json failures = Json::array();
  for (double m : {8.0, 12.0, 20.0, 40.0}) {
    for (int j = 0; j < 5; ++j) {
      const double w = 2.0 + (m / 2.0 - 2.0) * j / 4.0;
      ++grid_cases;
      bool increasing = true;
      std::size_t argmin = 0;
      double best = ratio_r_prime(m, w, 2.0);
      double prev = h_of_v(m, w, 2.0);
      for (int i = 1; i < 100; ++i) {
        const double v = 2.0 + (m / 2.0 - 2.0) * i / 99.0;
        const double h = h_of_v(m, w, v);
        increasing = increasing && h > prev;
        prev = h;
        const double rp = ratio_r_prime(m, w, v);
        if (rp < best) {
          best = rp;
          argmin = static_cast<std::size_t>(i);
        }
      }
      if (!increasing || argmin != 0) {
        failures.push_back({{"m", m}, {"w", w}, {"h_increasing", increasing}, {"argmin_index", argmin}});
        r.passed = false;
      }
    }
  }

  std::mt19937_64 rng(20240531);
  std::size_t sampled = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  while (sampled < 500) {
    const std::int64_t m = 4 + static_cast<std::int64_t>(rng() % 61);
    const auto cells = independence_cells(m);
    if (cells.empty()) continue;
    const auto& cell = cells[rng() % cells.size()];
    const double gap = ratio_r(cell) - ratio_r_prime(double(cell.m), double(cell.w), double(cell.v));
    min_gap = std::min(min_gap, gap);
    if (!(gap > 0.0)) {
      failures.push_back({{"cell", {cell.m, cell.w, cell.v, cell.u, cell.z}}});
      r.passed = false;
    }
    ++sampled;
  }
  r.measured["grid_cases"] = grid_cases;
  r.measured["random_cells"] = sampled;
  r.measured["min_r_minus_r_prime"] = min_gap;
  r.measured["failures"] = std::move(failures);
  return r;
}

CriterionResult pc_failure() {
  CriterionResult r{9, "PC drops the marginally independent links of the embedded PI model", false,
                    Json::object()};
  const auto t4 = pc_skeleton(fixture("table4"), 1e-9, 2);
  std::vector<Link> pass0;
  for (const auto& removal : t4.removals) {
    if (removal.pass == 0) pass0.push_back(removal.link);
  }
  const std::vector<Link> expected{{0, 1}, {0, 2}};
  bool retained = true;
  for (const auto& removal : t4.removals) {
    const auto& l = removal.link;
    if (l == Link{1, 2} || l == Link{1, 3} || l == Link{2, 3}) retained = false;
  }
  const auto t1 = pc_skeleton(fixture("table1"), 1e-9, 2);

  Json removed = Json::array();
  for (const auto& l : pass0) removed.push_back({l.first, l.second});
  Json final_links = Json::array();
  for (const auto& l : t4.skeleton.links()) final_links.push_back({l.first, l.second});
  r.measured["table4_pass0_removed"] = std::move(removed);
  r.measured["table4_final_links"] = std::move(final_links);
  r.measured["table1_links"] = t1.skeleton.links().size();
  r.passed = pass0 == expected && retained && t1.skeleton.links().empty();
  return r;
}

CriterionResult lam_bacchus_ordering() {
  CriterionResult r{10, "zero-MI links sit at the end of the link list", false, Json::object()};
  const auto t3 = link_weights(fixture("table3"));
  const auto t1 = link_weights(fixture("table1"));
  const bool tail_ok = t3.size() == 3 && t3[1].link == Link{0, 1} && t3[2].link == Link{0, 2} &&
                       t3[1].mi < 1e-12 && t3[2].mi < 1e-12;
  double t1_max = 0.0;
  for (const auto& lw : t1) t1_max = std::max(t1_max, lw.mi);
  Json list = Json::array();
  for (const auto& lw : t3) list.push_back({{"link", {lw.link.first, lw.link.second}}, {"mi", lw.mi}});
  r.measured["table3_link_list"] = std::move(list);
  r.measured["table1_max_mi"] = t1_max;
  r.measured["table1_pairs"] = t1.size();
  r.passed = tail_ok && t1.size() == 6 && t1_max < 1e-12;
  return r;
}

CriterionResult score_oracles() {
  CriterionResult r{11, "log-space K2 matches the exact oracle; empty-dag entropy decomposes", true,
                    Json::object()};
  std::mt19937_64 rng(1995);
  double max_rel = 0.0;
  double max_entropy_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const std::uint64_t m = 1 + rng() % 30;
    std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
    for (std::uint64_t k = 0; k < m; ++k) ++counts[rng() % counts.size()];
    const Dataset data(binary_variables(n), counts);

    const std::size_t x = rng() % n;
    VarSet parents;
    for (std::size_t p = 0; p < n; ++p) {
      if (p != x && rng() % 2 == 0) parents.push_back(p);
    }
    const double approx = std::exp(k2_g_log(data, x, parents));
    const double exact = to_double(k2_g_exact(data, x, parents));
    max_rel = std::max(max_rel, std::fabs(approx - exact) / exact);

    const auto table = empirical(data);
    double marginal_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) marginal_sum += entropy(marginalize(table, {i}));
    max_entropy_gap = std::max(max_entropy_gap, std::fabs(network_entropy(table, Dag(n)).value - marginal_sum));
  }
  r.measured["max_relative_error"] = max_rel;
  r.measured["max_empty_dag_entropy_gap"] = max_entropy_gap;
  r.passed = max_rel <= 1e-9 && max_entropy_gap <= 1e-12;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
  switch (id) {
    case 1: return constructor_fidelity();
    case 2: return generated_model_properties();
    case 3: return fixture_classifications();
    case 4: return kutato_failure();
    case 5: return kutato_recovery();
    case 6: return k2_failure();
    case 7: return k2_ratio_checkpoints();
    case 8: return ratio_bound_properties();
    case 9: return pc_failure();
    case 10: return lam_bacchus_ordering();
    case 11: return score_oracles();
    default: throw Error(ErrorCode::InvalidArgument, "no criterion " + std::to_string(id));
  }
}

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) results.push_back(run_criterion(id));
  return results;
}

Json acceptance_report(const std::vector<CriterionResult>& results) {
  Json doc;
  bool all = true;
  Json items = Json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    items.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"measured", r.measured}});
  }
  doc["passed"] = all;
  doc["criteria"] = std::move(items);
  return doc;
}

}  // namespace pi_forge
