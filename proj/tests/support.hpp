#pragma once

// Seeded generators and brute-force oracles shared by the unit tests. The
// oracles deliberately avoid the library's indexing helpers: they walk the
// full table by decoding flat indices by hand.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "pi_forge/dataset.hpp"
#include "pi_forge/error.hpp"
#include "pi_forge/jpd.hpp"

namespace testing {

// The code of the pi_forge::Error thrown by `fn`, or nullopt if none is thrown.
template <class F>
std::optional<pi_forge::ErrorCode> error_code(F&& fn) {
  try {
    fn();
  } catch (const pi_forge::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

template <class F>
bool throws_code(pi_forge::ErrorCode code, F&& fn) {
  return error_code(std::forward<F>(fn)) == code;
}

using pi_forge::JointTable;
using pi_forge::VariableSpec;

inline std::vector<VariableSpec> vars_with_cards(const std::vector<std::size_t>& cards,
                                                 const std::string& prefix = "V") {
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < cards.size(); ++i) vars.push_back({prefix + std::to_string(i + 1), cards[i]});
  return vars;
}

// Random table with some exact zeros, normalized in long double.
inline JointTable random_table(std::mt19937_64& rng, const std::vector<std::size_t>& cards,
                               double zero_fraction = 0.2, const std::string& prefix = "V") {
  std::size_t cells = 1;
  for (auto c : cards) cells *= c;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(cells);
  long double total = 0;
  for (auto& x : w) {
    x = unit(rng) < zero_fraction ? 0.0 : unit(rng) + 1e-3;
    total += x;
  }
  if (total == 0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x = static_cast<double>(x / total);
  return JointTable(vars_with_cards(cards, prefix), std::move(w));
}

// Decodes flat index `flat` with the last variable varying fastest.
inline std::vector<std::size_t> decode(std::size_t flat, const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> config(cards.size());
  for (std::size_t i = cards.size(); i-- > 0;) {
    config[i] = flat % cards[i];
    flat /= cards[i];
  }
  return config;
}

inline std::vector<std::size_t> cards_of(const JointTable& t) {
  return {t.cardinalities().begin(), t.cardinalities().end()};
}

// Marginal over `keep` (in the given order) as a map from sub-configuration to mass.
inline std::map<std::vector<std::size_t>, long double> brute_marginal(const JointTable& t,
                                                                      const std::vector<std::size_t>& keep) {
  std::map<std::vector<std::size_t>, long double> out;
  const auto cards = cards_of(t);
  for (std::size_t f = 0; f < t.size(); ++f) {
    const auto config = decode(f, cards);
    std::vector<std::size_t> key;
    for (auto k : keep) key.push_back(config[k]);
    out[key] += t[f];
  }
  return out;
}

inline double brute_entropy(const JointTable& t, const std::vector<std::size_t>& keep) {
  long double h = 0;
  for (const auto& [key, p] : brute_marginal(t, keep)) {
    if (p > 0) h -= p * std::log(p);
  }
  return static_cast<double>(h);
}

// I(X;Y) = H(X) + H(Y) - H(X,Y)
inline double brute_mi(const JointTable& t, std::size_t x, std::size_t y) {
  return brute_entropy(t, {x}) + brute_entropy(t, {y}) - brute_entropy(t, {x, y});
}

// I(U;V|Z) = H(U,Z) + H(V,Z) - H(U,V,Z) - H(Z)
inline double brute_cmi(const JointTable& t, const std::vector<std::size_t>& u, const std::vector<std::size_t>& z,
                        const std::vector<std::size_t>& v) {
  auto uz = u, vz = v, uvz = u;
  uz.insert(uz.end(), z.begin(), z.end());
  vz.insert(vz.end(), z.begin(), z.end());
  uvz.insert(uvz.end(), v.begin(), v.end());
  uvz.insert(uvz.end(), z.begin(), z.end());
  return brute_entropy(t, uz) + brute_entropy(t, vz) - brute_entropy(t, uvz) - brute_entropy(t, z);
}

inline pi_forge::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::uint64_t m) {
  const auto vars = pi_forge::binary_variables(n);
  std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
  std::uniform_int_distribution<std::size_t> cell(0, counts.size() - 1);
  for (std::uint64_t i = 0; i < m; ++i) ++counts[cell(rng)];
  return pi_forge::Dataset(vars, counts);
}

}  // namespace testing
