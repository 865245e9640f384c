#pragma once

// Structure scores: network entropy, the K2 Bayesian score (log space, with
// an exact rational oracle), pairwise mutual-information link weights, a
// two-part MDL score and the KL cross entropy of a factorization.

#include <string_view>
#include <vector>

#include "pi_forge/dag.hpp"
#include "pi_forge/dataset.hpp"
#include "pi_forge/exact.hpp"
#include "pi_forge/jpd.hpp"

namespace pi_forge {

enum class ScoreKind { EntropyNats, LogK2, MdlBits, CrossEntropyNats };

std::string_view to_string(ScoreKind kind);

/// Lower is better for everything except LogK2.
bool minimized(ScoreKind kind);

struct ScoreValue {
  ScoreKind kind = ScoreKind::EntropyNats;
  double value = 0.0;
  /// Per-node contributions where the score decomposes; empty otherwise.
  std::vector<double> node_terms;
};

/// True when `a` is strictly better than `b`. Throws InvalidArgument on kind mismatch.
bool better(const ScoreValue& a, const ScoreValue& b);

/// sum over parent configurations of P(pi) * H(X | pi); zero-probability
/// configurations contribute nothing.
double node_entropy_term(const JointTable& source, std::size_t x, const VarSet& parents);

ScoreValue network_entropy(const JointTable& source, const Dag& dag);

/// ln g(X, parents) via log-gamma of the integer counts. Only parent
/// configurations that occur in the data contribute.
double k2_g_log(const Dataset& data, std::size_t x, const VarSet& parents);

/// Exact g(X, parents) as a ratio of factorial products. Test oracle and
/// tie-breaker; cost grows with m.
Rational k2_g_exact(const Dataset& data, std::size_t x, const VarSet& parents);

/// Sum of ln g over all nodes of the dag.
ScoreValue k2_network_score(const Dataset& data, const Dag& dag);

struct LinkWeight {
  Link link;
  double mi = 0.0;
};

/// All unordered pairs with their mutual information, descending. Values
/// that agree to 1e-12 are treated as tied and ordered by pair index.
std::vector<LinkWeight> link_weights(const JointTable& source);

/// Two-part description length in bits:
///   sum_X |parents(X)| log2(n) + (#parameters) log2(m) / 2
///   + m * sum_X H(X | parents(X)) / ln 2
/// where the entropies are taken from `source` and m is the sample size.
ScoreValue description_length(const Dag& dag, const JointTable& source, double sample_size);
ScoreValue description_length(const Dag& dag, const Dataset& data);

/// Number of free parameters: sum_X (|X| - 1) * prod |parents|.
std::size_t parameter_count(const Dag& dag, std::span<const std::size_t> cards);

/// KL(p || Q) where Q(c) = prod_X source(x | parents). +infinity when p has
/// mass where Q vanishes.
ScoreValue cross_entropy(const JointTable& p, const Dag& dag, const JointTable& source);

/// The dag's factorization of `source` as a dense table.
JointTable factorized(const Dag& dag, const JointTable& source);

}  // namespace pi_forge
