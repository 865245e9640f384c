#include "pi_forge/k2_analysis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pi_forge/error.hpp"
#include "pi_forge/parallel.hpp"

namespace pi_forge {

bool K2Cell::feasible() const {
  return m >= 0 && w >= 0 && w <= m && v >= 0 && v <= m && u >= 0 && u <= v && z >= 0 &&
         z <= m - v && u + z == w;
}

bool K2Cell::independent() const {
  // w/(m-w) = u/(v-u) and w/(m-w) = z/(m-v-z)
  return w * (v - u) == u * (m - w) && w * (m - v - z) == z * (m - w);
}

bool K2Cell::in_analysis_range() const {
  return m >= 4 && w >= 2 && w <= m / 2 && v >= 2 && v <= m / 2 && u >= 1 && u <= v / 2 && z >= 1 &&
         z <= (m - v) / 2;
}

Rational g_phi(std::int64_t m, std::int64_t w) {
  if (m < 0 || w < 0 || w > m) throw Error(ErrorCode::InvalidArgument, "g_phi needs 0 <= w <= m");
  const auto f = [](std::int64_t k) { return factorial(static_cast<unsigned>(k)); };
  return Rational(f(w) * f(m - w), f(m + 1));
}

Rational g_y(const K2Cell& c) {
  if (c.m < 0 || c.v < 0 || c.v > c.m || c.u < 0 || c.u > c.v || c.z < 0 || c.z > c.m - c.v) {
    throw Error(ErrorCode::InvalidCell, "counts do not form a 2x2 table");
  }
  const auto f = [](std::int64_t k) { return factorial(static_cast<unsigned>(k)); };
  return Rational(f(c.u) * f(c.v - c.u) * f(c.z) * f(c.m - c.v - c.z), f(c.v + 1) * f(c.m - c.v + 1));
}

Rational ratio_r_exact(const K2Cell& cell) {
  if (!cell.feasible()) throw Error(ErrorCode::InvalidCell, "cell is not a feasible 2x2 table");
  if (!cell.independent()) throw Error(ErrorCode::InvalidCell, "cell violates the independence relation");
  return g_phi(cell.m, cell.w) / g_y(cell);
}

double ratio_r(const K2Cell& cell) { return to_double(ratio_r_exact(cell)); }

double ratio_r_prime(double m, double w, double v) {
  if (!(m >= 4.0) || !(w >= 2.0 && w <= m / 2.0) || !(v >= 2.0 && v <= m / 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "r' needs m >= 4 and 2 <= w, v <= m/2");
  }
  const double lead = std::sqrt(v + 1.0) * std::sqrt(m - v + 1.0) * std::pow(m, 1.5) /
                      (std::sqrt(2.0 * std::numbers::pi) * std::sqrt(w) * std::sqrt(m - w) * (m + 1.0));
  return lead * (1.0 - 1.0 / (12.0 * m)) * (1.0 - m / (12.0 * v * w)) *
         (1.0 - m / (12.0 * v * (m - w))) * (1.0 - m / (12.0 * (m - v) * w)) *
         (1.0 - m / (12.0 * (m - v) * (m - w)));
}

HFactors h_factors(double m, double w, double v) {
  if (v == 0.0 || v == m) throw Error(ErrorCode::Domain, "h(v) is undefined at v = 0 and v = m");
  HFactors h;
  h.h1 = std::sqrt(v + 1.0) * std::sqrt(m - v + 1.0);
  h.h2 = (12.0 * v * w - m) / v * (12.0 * (m - v) * w - m) / (m - v);
  h.h3 = (12.0 * v * (m - w) - m) / v * (12.0 * (m - v) * (m - w) - m) / (m - v);
  return h;
}

double h_of_v(double m, double w, double v) { return h_factors(m, w, v).product(); }

double min_r_prime(double m) {
  if (!(m >= 4.0)) throw Error(ErrorCode::InvalidArgument, "min r' needs m >= 4");
  const double tail = 1.0 - 1.0 / (6.0 * (m - 2.0));
  return 121.0 / (24.0 * (m + 1.0)) * std::sqrt(m * (m - 1.0) / (6.0 * std::numbers::pi)) *
         (1.0 - 1.0 / (12.0 * m)) * tail * tail;
}

std::vector<K2Cell> independence_cells(std::int64_t m) {
  std::vector<K2Cell> cells;
  for (std::int64_t w = 2; w <= m / 2; ++w) {
    for (std::int64_t v = 2; v <= m / 2; ++v) {
      if ((v * w) % m != 0 || ((m - v) * w) % m != 0) continue;
      const K2Cell cell{m, w, v, v * w / m, (m - v) * w / m};
      if (cell.u >= 1 && cell.v - cell.u >= 1 && cell.z >= 1 && cell.m - cell.v - cell.z >= 1) {
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

RatioReport exhaustive_min_r(std::int64_t m, std::int64_t cap) {
  if (m < 4 || m > cap) {
    throw Error(ErrorCode::InvalidArgument, "m must lie in [4, " + std::to_string(cap) + "]");
  }
  RatioReport report;
  report.m = m;
  report.min_r_prime = min_r_prime(static_cast<double>(m));
  const auto cells = independence_cells(m);
  report.cells_examined = cells.size();

  std::vector<Rational> ratios(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) { ratios[i] = ratio_r_exact(cells[i]); });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    // Strict comparison keeps the lexicographically first argmin.
    if (!report.min_r_exact || ratios[i] < *report.min_r_exact) {
      report.min_r_exact = ratios[i];
      report.argmin = cells[i];
    }
  }
  if (report.min_r_exact) report.min_r = to_double(*report.min_r_exact);
  return report;
}

}  // namespace pi_forge
