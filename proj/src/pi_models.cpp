#include "pi_forge/pi_models.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "pi_forge/detail/indexing.hpp"
#include "pi_forge/error.hpp"

namespace pi_forge {

namespace {

struct FixtureData {
  std::string_view name;
  std::size_t num_vars;
  std::array<std::string_view, 16> cells;
};

// Flat order, last variable fastest.
constexpr std::array<FixtureData, 4> kFixtures{{
    {"table1", 4,
     {"0.125", "0", "0", "0.125", "0", "0.125", "0.125", "0",  //
      "0", "0.125", "0.125", "0", "0.125", "0", "0", "0.125"}},
    {"table2", 3, {"0.024", "0.216", "0.096", "0.264", "0.056", "0.104", "0.024", "0.216"}},
    {"table3", 3, {"0.225", "0.025", "0.025", "0.225", "0.20", "0.05", "0.05", "0.20"}},
    {"table4", 4,
     {"0.0225", "0.2025", "0.005", "0.02", "0.0175", "0.0075", "0.135", "0.09",  //
      "0.02", "0.18", "0.01", "0.04", "0.035", "0.015", "0.12", "0.08"}},
}};

constexpr std::array<std::string_view, 4> kFixtureNames{"table1", "table2", "table3", "table4"};

const FixtureData& lookup(std::string_view name) {
  for (const auto& f : kFixtures) {
    if (f.name == name) return f;
  }
  throw Error(ErrorCode::NotFound, "unknown fixture '" + std::string(name) + "'");
}

bool tables_close(std::span<const double> a, std::span<const double> b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

VarSet all_but(std::size_t n, std::initializer_list<std::size_t> excluded) {
  VarSet out;
  for (std::size_t i = 0; i < n; ++i) {
    bool skip = false;
    for (auto e : excluded) skip = skip || e == i;
    if (!skip) out.push_back(i);
  }
  return out;
}

}  // namespace

void PiSpec::validate() const {
  if (eta < 3) throw Error(ErrorCode::InvalidSpec, "eta must be at least 3");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::InvalidSpec, "q must lie in [0, 1]");
  if (q == 0.5) throw Error(ErrorCode::InvalidSpec, "q = 0.5 yields a fully independent model");
  if (eta > 20) throw Error(ErrorCode::InvalidSpec, "eta exceeds the 20-variable table limit");
}

std::string_view to_string(PiVerdict verdict) {
  switch (verdict) {
    case PiVerdict::FullPI: return "FullPI";
    case PiVerdict::PartialPI: return "PartialPI";
    case PiVerdict::NonPIIndependent: return "NonPI-Independent";
    case PiVerdict::NonPIOther: return "NonPI-Other";
  }
  return "NonPI-Other";
}

JointTable construct_full_pi(const PiSpec& spec) {
  spec.validate();
  const std::size_t cells = std::size_t{1} << spec.eta;
  const double base = std::ldexp(1.0, -(spec.eta - 1));
  const double even = base * spec.q;
  const double odd = base * (1.0 - spec.q);
  std::vector<double> probs(cells);
  for (std::size_t c = 0; c < cells; ++c) probs[c] = (std::popcount(c) % 2 == 0) ? even : odd;
  return JointTable(binary_variables(static_cast<std::size_t>(spec.eta)), std::move(probs));
}

ExactTable construct_full_pi_exact(int eta, const Rational& q) {
  if (eta < 3 || eta > 20) throw Error(ErrorCode::InvalidSpec, "eta must lie in [3, 20]");
  if (q < 0 || q > 1 || q == Rational(1, 2)) {
    throw Error(ErrorCode::InvalidSpec, "q must lie in [0, 1] and differ from 1/2");
  }
  const std::size_t cells = std::size_t{1} << eta;
  const Rational base(BigInt(1), BigInt(1) << (eta - 1));
  const Rational even = base * q;
  const Rational odd = base * (1 - q);
  ExactTable out{binary_variables(static_cast<std::size_t>(eta)), {}};
  out.probs.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) out.probs.push_back(std::popcount(c) % 2 == 0 ? even : odd);
  return out;
}

JointTable fixture(std::string_view name) {
  const auto& f = lookup(name);
  const std::size_t cells = std::size_t{1} << f.num_vars;
  std::vector<double> probs;
  for (std::size_t i = 0; i < cells; ++i) probs.push_back(std::strtod(std::string(f.cells[i]).c_str(), nullptr));
  return JointTable(binary_variables(f.num_vars), std::move(probs));
}

ExactTable fixture_exact(std::string_view name) {
  const auto& f = lookup(name);
  const std::size_t cells = std::size_t{1} << f.num_vars;
  ExactTable out{binary_variables(f.num_vars), {}};
  for (std::size_t i = 0; i < cells; ++i) out.probs.push_back(parse_decimal(f.cells[i]));
  return out;
}

std::span<const std::string_view> fixture_names() { return kFixtureNames; }

PiClassification classify(const JointTable& table, double tol) {
  const std::size_t n = table.num_vars();
  if (n < 3) throw Error(ErrorCode::InvalidQuery, "classification needs at least 3 variables");

  PiClassification out;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (is_independent(table, {x}, {}, {y}, tol)) out.independent_pairs.emplace_back(x, y);
    }
  }

  out.s1_holds = true;
  for (std::size_t y = 0; y < n && out.s1_holds; ++y) {
    const auto rest = marginalize(table, all_but(n, {y}));
    const auto factored = product_of_marginals(rest);
    out.s1_holds = tables_close(rest.probs(), factored.probs(), tol);
  }

  out.s2_holds = true;
  for (std::size_t x = 0; x < n && out.s2_holds; ++x) {
    for (std::size_t y = x + 1; y < n && out.s2_holds; ++y) {
      if (is_independent(table, {x}, all_but(n, {x, y}), {y}, tol)) out.s2_holds = false;
    }
  }

  const bool fully_independent =
      tables_close(table.probs(), product_of_marginals(table).probs(), tol);
  if (fully_independent) {
    out.verdict = PiVerdict::NonPIIndependent;
  } else if (out.s1_holds && out.s2_holds) {
    out.verdict = PiVerdict::FullPI;
  } else if (out.s2_holds && !out.independent_pairs.empty()) {
    out.verdict = PiVerdict::PartialPI;
  } else {
    out.verdict = PiVerdict::NonPIOther;
  }
  return out;
}

std::vector<EmbeddedPi> find_embedded_pi(const JointTable& table, std::size_t max_subset, double tol) {
  const std::size_t n = table.num_vars();
  if (max_subset < 3 || max_subset > n) {
    throw Error(ErrorCode::InvalidArgument, "max_subset must lie in [3, variable count]");
  }
  std::vector<EmbeddedPi> found;
  for (std::size_t size = 3; size <= max_subset; ++size) {
    VarSet subset(size);
    for (std::size_t i = 0; i < size; ++i) subset[i] = i;
    while (true) {
      auto verdict = classify(marginalize(table, subset), tol);
      if (verdict.verdict == PiVerdict::FullPI || verdict.verdict == PiVerdict::PartialPI) {
        // Report pairs in the caller's variable indices.
        for (auto& [a, b] : verdict.independent_pairs) {
          a = subset[a];
          b = subset[b];
        }
        found.push_back({subset, std::move(verdict)});
      }
      if (!detail::next_combination(subset, n)) break;
    }
  }
  return found;
}

}  // namespace pi_forge
