#pragma once

// Exact rational arithmetic for the places where floating point is not good
// enough: fixture identities, constructor checks and the K2 oracle.

#include <boost/multiprecision/cpp_int.hpp>

#include <string_view>
#include <vector>

#include "pi_forge/jpd.hpp"

namespace pi_forge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses a plain decimal literal ("0.0225", "1", "-3.5", "1e-3") exactly.
Rational parse_decimal(std::string_view text);

double to_double(const Rational& value);

BigInt factorial(unsigned n);

/// Joint table with rational entries. Same layout as JointTable.
struct ExactTable {
  std::vector<VariableSpec> vars;
  std::vector<Rational> probs;

  Rational total() const;
  ExactTable marginalize(const VarSet& keep) const;
  /// Rounds every entry to the nearest double.
  JointTable to_table() const;

  bool operator==(const ExactTable&) const = default;
};

}  // namespace pi_forge
