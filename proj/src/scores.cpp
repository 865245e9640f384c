#include "pi_forge/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pi_forge/detail/indexing.hpp"
#include "pi_forge/error.hpp"

namespace pi_forge {

namespace {

void check_dag_matches(const Dag& dag, std::size_t n) {
  if (dag.size() != n) {
    throw Error(ErrorCode::InvalidInput, "dag has " + std::to_string(dag.size()) +
                                             " nodes but the source has " + std::to_string(n));
  }
}

std::vector<std::size_t> parents_then_child(const VarSet& parents, std::size_t x) {
  std::vector<std::size_t> order(parents.begin(), parents.end());
  order.push_back(x);
  return order;
}

double log_factorial(std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::EntropyNats: return "entropy-nats";
    case ScoreKind::LogK2: return "log-k2";
    case ScoreKind::MdlBits: return "mdl-bits";
    case ScoreKind::CrossEntropyNats: return "cross-entropy-nats";
  }
  return "unknown";
}

bool minimized(ScoreKind kind) { return kind != ScoreKind::LogK2; }

bool better(const ScoreValue& a, const ScoreValue& b) {
  if (a.kind != b.kind) throw Error(ErrorCode::InvalidArgument, "comparing scores of different kinds");
  return minimized(a.kind) ? a.value < b.value : a.value > b.value;
}

double node_entropy_term(const JointTable& source, std::size_t x, const VarSet& parents) {
  if (x >= source.num_vars()) throw Error(ErrorCode::InvalidInput, "node index out of range");
  const auto joint = project(source, parents_then_child(parents, x));
  const std::size_t card = source.vars()[x].cardinality;
  double term = 0.0;
  for (std::size_t row = 0; row < joint.size(); row += card) {
    double p_parent = 0.0;
    for (std::size_t k = 0; k < card; ++k) p_parent += joint[row + k];
    if (!(p_parent > 0.0)) continue;
    double h = 0.0;
    for (std::size_t k = 0; k < card; ++k) {
      const double cond = joint[row + k] / p_parent;
      if (cond > 0.0) h -= cond * std::log(cond);
    }
    term += p_parent * h;
  }
  return term;
}

ScoreValue network_entropy(const JointTable& source, const Dag& dag) {
  check_dag_matches(dag, source.num_vars());
  ScoreValue out{ScoreKind::EntropyNats, 0.0, {}};
  for (std::size_t x = 0; x < dag.size(); ++x) {
    out.node_terms.push_back(node_entropy_term(source, x, dag.parents(x)));
    out.value += out.node_terms.back();
  }
  return out;
}

double k2_g_log(const Dataset& data, std::size_t x, const VarSet& parents) {
  if (x >= data.num_vars()) throw Error(ErrorCode::InvalidInput, "node index out of range");
  if (std::find(parents.begin(), parents.end(), x) != parents.end()) {
    throw Error(ErrorCode::InvalidInput, "a node cannot be its own parent");
  }
  const auto counts = data.project(parents_then_child(parents, x));
  const std::size_t card = data.vars()[x].cardinality;
  const double log_r_minus_1 = log_factorial(card - 1);
  double total = 0.0;
  for (std::size_t row = 0; row < counts.size(); row += card) {
    std::uint64_t n_parent = 0;
    for (std::size_t k = 0; k < card; ++k) n_parent += counts[row + k];
    if (n_parent == 0) continue;
    total += log_r_minus_1 - log_factorial(n_parent + card - 1);
    for (std::size_t k = 0; k < card; ++k) total += log_factorial(counts[row + k]);
  }
  return total;
}

Rational k2_g_exact(const Dataset& data, std::size_t x, const VarSet& parents) {
  if (x >= data.num_vars()) throw Error(ErrorCode::InvalidInput, "node index out of range");
  const auto counts = data.project(parents_then_child(parents, x));
  const std::size_t card = data.vars()[x].cardinality;
  BigInt numerator = 1;
  BigInt denominator = 1;
  const BigInt r_minus_1 = factorial(static_cast<unsigned>(card - 1));
  for (std::size_t row = 0; row < counts.size(); row += card) {
    std::uint64_t n_parent = 0;
    for (std::size_t k = 0; k < card; ++k) n_parent += counts[row + k];
    if (n_parent == 0) continue;
    numerator *= r_minus_1;
    denominator *= factorial(static_cast<unsigned>(n_parent + card - 1));
    for (std::size_t k = 0; k < card; ++k) numerator *= factorial(static_cast<unsigned>(counts[row + k]));
  }
  return Rational(numerator, denominator);
}

ScoreValue k2_network_score(const Dataset& data, const Dag& dag) {
  check_dag_matches(dag, data.num_vars());
  ScoreValue out{ScoreKind::LogK2, 0.0, {}};
  for (std::size_t x = 0; x < dag.size(); ++x) {
    out.node_terms.push_back(k2_g_log(data, x, dag.parents(x)));
    out.value += out.node_terms.back();
  }
  return out;
}

std::vector<LinkWeight> link_weights(const JointTable& source) {
  const std::size_t n = source.num_vars();
  if (n < 2) throw Error(ErrorCode::InvalidQuery, "link weights need at least two variables");
  std::vector<LinkWeight> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) out.push_back({{a, b}, mutual_information(source, a, b)});
  }
  // Quantized keys keep the comparator a strict weak ordering.
  const auto key = [](double mi) { return std::llround(mi * 1e12); };
  std::stable_sort(out.begin(), out.end(), [&](const LinkWeight& l, const LinkWeight& r) {
    const auto kl = key(l.mi), kr = key(r.mi);
    if (kl != kr) return kl > kr;
    return l.link < r.link;
  });
  return out;
}

std::size_t parameter_count(const Dag& dag, std::span<const std::size_t> cards) {
  std::size_t total = 0;
  for (std::size_t x = 0; x < dag.size(); ++x) {
    std::size_t rows = 1;
    for (auto p : dag.parents(x)) rows *= cards[p];
    total += (cards[x] - 1) * rows;
  }
  return total;
}

ScoreValue description_length(const Dag& dag, const JointTable& source, double sample_size) {
  check_dag_matches(dag, source.num_vars());
  if (!(sample_size >= 1.0)) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  const double n = static_cast<double>(dag.size());
  const double log2_n = n > 1.0 ? std::log2(n) : 0.0;
  const double half_log2_m = std::log2(sample_size) / 2.0;
  ScoreValue out{ScoreKind::MdlBits, 0.0, {}};
  for (std::size_t x = 0; x < dag.size(); ++x) {
    const auto& ps = dag.parents(x);
    std::size_t rows = 1;
    for (auto p : ps) rows *= source.vars()[p].cardinality;
    const double params = static_cast<double>((source.vars()[x].cardinality - 1) * rows);
    const double structure_bits = static_cast<double>(ps.size()) * log2_n + params * half_log2_m;
    const double data_bits = sample_size * node_entropy_term(source, x, ps) / std::numbers::ln2;
    out.node_terms.push_back(structure_bits + data_bits);
    out.value += out.node_terms.back();
  }
  return out;
}

ScoreValue description_length(const Dag& dag, const Dataset& data) {
  return description_length(dag, empirical(data), static_cast<double>(data.m()));
}

JointTable factorized(const Dag& dag, const JointTable& source) {
  check_dag_matches(dag, source.num_vars());
  const std::size_t n = dag.size();
  // Conditional tables P(x | parents), rows indexed by parent configuration.
  std::vector<std::vector<double>> cpts(n);
  std::vector<std::vector<std::size_t>> parent_strides(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto& ps = dag.parents(x);
    auto joint = project(source, parents_then_child(ps, x));
    const std::size_t card = source.vars()[x].cardinality;
    for (std::size_t row = 0; row < joint.size(); row += card) {
      double mass = 0.0;
      for (std::size_t k = 0; k < card; ++k) mass += joint[row + k];
      for (std::size_t k = 0; k < card; ++k) joint[row + k] = mass > 0.0 ? joint[row + k] / mass : 0.0;
    }
    cpts[x] = std::move(joint);
    std::vector<std::size_t> cards;
    for (auto p : ps) cards.push_back(source.vars()[p].cardinality);
    parent_strides[x] = detail::strides_of(cards);
  }
  std::vector<double> q(source.size(), 1.0);
  std::vector<std::size_t> config(n, 0);
  std::size_t flat = 0;
  do {
    for (std::size_t x = 0; x < n; ++x) {
      const auto& ps = dag.parents(x);
      std::size_t row = 0;
      for (std::size_t k = 0; k < ps.size(); ++k) row += config[ps[k]] * parent_strides[x][k];
      q[flat] *= cpts[x][row * source.vars()[x].cardinality + config[x]];
    }
    ++flat;
  } while (detail::next_config(config, source.cardinalities()));

  // Factorizations of a normalized source are normalized up to rounding.
  long double total = 0.0L;
  for (double v : q) total += v;
  for (auto& v : q) v = static_cast<double>(v / total);
  return JointTable(source.vars(), std::move(q));
}

ScoreValue cross_entropy(const JointTable& p, const Dag& dag, const JointTable& source) {
  if (p.vars() != source.vars()) throw Error(ErrorCode::InvalidInput, "variable sets differ");
  const auto q = factorized(dag, source);
  double kl = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (!(p[c] > 0.0)) continue;
    if (!(q[c] > 0.0)) {
      return {ScoreKind::CrossEntropyNats, std::numeric_limits<double>::infinity(), {}};
    }
    kl += p[c] * std::log(p[c] / q[c]);
  }
  return {ScoreKind::CrossEntropyNats, std::max(kl, 0.0), {}};
}

}  // namespace pi_forge
