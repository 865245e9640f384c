#pragma once

// Ratio analysis of the K2 score for a binary child X and a single binary
// candidate parent Y that is independent of X, with exact-frequency counts:
//   w = #(X=0), v = #(Y=0), u = #(X=0,Y=0), z = #(X=0,Y=1), m cases.
// r = g(X, {}) / g(X, {Y}); r > 1 means K2 rejects Y.

#include <cstdint>
#include <optional>
#include <vector>

#include "pi_forge/exact.hpp"

namespace pi_forge {

struct K2Cell {
  std::int64_t m = 0, w = 0, v = 0, u = 0, z = 0;

  /// All four joint counts and both marginal counts are non-negative.
  bool feasible() const;
  /// w/(m-w) = u/(v-u) = z/(m-v-z), checked by cross-multiplication.
  bool independent() const;
  /// 2 <= w, v <= floor(m/2); 1 <= u <= floor(v/2); 1 <= z <= floor((m-v)/2); m >= 4.
  bool in_analysis_range() const;

  auto operator<=>(const K2Cell&) const = default;
};

/// w! (m-w)! / (m+1)!
Rational g_phi(std::int64_t m, std::int64_t w);

/// u! (v-u)! z! (m-v-z)! / ((v+1)! (m-v+1)!)
Rational g_y(const K2Cell& cell);

/// Exact ratio; throws InvalidCell unless the cell is feasible and independent.
Rational ratio_r_exact(const K2Cell& cell);
double ratio_r(const K2Cell& cell);

/// Stirling-based lower bound r'(m, w, v). Throws InvalidArgument unless
/// m >= 4 and 2 <= w, v <= m/2.
double ratio_r_prime(double m, double w, double v);

struct HFactors {
  double h1 = 0.0, h2 = 0.0, h3 = 0.0;
  double product() const { return h1 * h2 * h3; }
};

/// The v-dependent factors of r'. Throws Domain if v is 0 or m.
HFactors h_factors(double m, double w, double v);
double h_of_v(double m, double w, double v);

/// r' at v = 2, w = m/2:
///   121/(24(m+1)) * sqrt(m(m-1)/(6 pi)) * (1 - 1/(12m)) * (1 - 1/(6(m-2)))^2
double min_r_prime(double m);

inline constexpr std::int64_t kDefaultRatioSearchCap = 64;

struct RatioReport {
  std::int64_t m = 0;
  std::optional<double> min_r;
  std::optional<Rational> min_r_exact;
  std::optional<K2Cell> argmin;
  double min_r_prime = 0.0;
  std::size_t cells_examined = 0;
};

/// Every integral independence cell for m with w, v in [2, floor(m/2)] and all
/// four joint counts positive, in (w, v) lexicographic order.
std::vector<K2Cell> independence_cells(std::int64_t m);

/// Exact minimum of r over independence_cells(m). Empty (no min_r) when m
/// admits no integral cell, e.g. prime m.
RatioReport exhaustive_min_r(std::int64_t m, std::int64_t cap = kDefaultRatioSearchCap);

}  // namespace pi_forge
