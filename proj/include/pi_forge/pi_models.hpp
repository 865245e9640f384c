#pragma once

// Pseudo-independent (PI) models: the parity-style constructor over η binary
// variables, the four reference tables, and a classifier that decides
// whether a table is full PI, partial PI or neither.

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pi_forge/exact.hpp"
#include "pi_forge/jpd.hpp"

namespace pi_forge {

struct PiSpec {
  int eta = 3;
  double q = 1.0;

  /// Throws InvalidSpec unless eta >= 3, q in [0, 1] and q != 0.5.
  void validate() const;
};

enum class PiVerdict { FullPI, PartialPI, NonPIIndependent, NonPIOther };

std::string_view to_string(PiVerdict verdict);

struct PiClassification {
  PiVerdict verdict = PiVerdict::NonPIOther;
  /// Every (n-1)-variable marginal factorizes into singleton marginals.
  bool s1_holds = false;
  /// No pair is independent given all remaining variables.
  bool s2_holds = false;
  /// Pairs (i < j) that are marginally independent.
  std::vector<std::pair<std::size_t, std::size_t>> independent_pairs;
};

/// Configurations with an even number of ones get 0.5^(eta-1) * q, odd ones
/// 0.5^(eta-1) * (1 - q).
JointTable construct_full_pi(const PiSpec& spec);

/// Same construction in exact arithmetic, `q` given as a rational.
ExactTable construct_full_pi_exact(int eta, const Rational& q);

PiClassification classify(const JointTable& table, double tol = kDefaultIndependenceTolerance);

/// Built-in reference tables: "table1" .. "table4".
JointTable fixture(std::string_view name);
ExactTable fixture_exact(std::string_view name);
std::span<const std::string_view> fixture_names();

struct EmbeddedPi {
  VarSet subset;
  PiClassification classification;
};

/// Classifies the marginal of every variable subset of size 3..max_subset and
/// returns the full or partial PI ones, smallest subsets first.
std::vector<EmbeddedPi> find_embedded_pi(const JointTable& table, std::size_t max_subset = 5,
                                         double tol = kDefaultIndependenceTolerance);

}  // namespace pi_forge
