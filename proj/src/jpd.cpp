#include "pi_forge/jpd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pi_forge/detail/indexing.hpp"
#include "pi_forge/error.hpp"

namespace pi_forge {

namespace {

long double precise_sum(std::span<const double> values) {
  long double total = 0.0L;
  for (double v : values) total += v;
  return total;
}

void check_var_set(const JointTable& table, const VarSet& set, std::string_view what) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] >= table.num_vars()) {
      throw Error(ErrorCode::InvalidQuery,
                  std::string(what) + " references variable " + std::to_string(set[i]) +
                      " outside the table");
    }
    if (i > 0 && set[i] <= set[i - 1]) {
      throw Error(ErrorCode::InvalidQuery, std::string(what) + " must be sorted and duplicate-free");
    }
  }
}

bool disjoint(const VarSet& a, const VarSet& b) {
  VarSet common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.empty();
}

}  // namespace

std::vector<VariableSpec> binary_variables(std::size_t count) {
  std::vector<VariableSpec> vars;
  vars.reserve(count);
  for (std::size_t i = 0; i < count; ++i) vars.push_back({"X" + std::to_string(i + 1), 2});
  return vars;
}

JointTable::JointTable(std::vector<VariableSpec> vars, std::vector<double> probs,
                       std::size_t max_cells)
    : vars_(std::move(vars)), probs_(std::move(probs)) {
  std::set<std::string> names;
  std::size_t cells = 1;
  for (const auto& v : vars_) {
    if (v.cardinality < 2) {
      throw Error(ErrorCode::InvalidInput, "variable '" + v.name + "' has cardinality < 2");
    }
    if (v.name.empty() || !names.insert(v.name).second) {
      throw Error(ErrorCode::InvalidInput, "variable names must be unique and non-empty");
    }
    if (cells > max_cells / v.cardinality) {
      throw Error(ErrorCode::InvalidInput, "table exceeds the configured cell limit");
    }
    cells *= v.cardinality;
    cards_.push_back(v.cardinality);
  }
  if (probs_.size() != cells) {
    throw Error(ErrorCode::InvalidInput, "expected " + std::to_string(cells) +
                                             " probabilities, got " +
                                             std::to_string(probs_.size()));
  }
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::InvalidInput, "probabilities must be finite and non-negative");
    }
  }
  const long double total = precise_sum(probs_);
  if (std::fabs(static_cast<double>(total - 1.0L)) > kNormalizationTolerance) {
    throw Error(ErrorCode::InvalidInput, "probabilities do not sum to 1");
  }
  strides_ = detail::strides_of(cards_);
}

JointTable JointTable::uniform(std::vector<VariableSpec> vars) {
  std::size_t cells = 1;
  for (const auto& v : vars) cells *= v.cardinality;
  std::vector<double> probs(cells, 1.0 / static_cast<double>(cells));
  return JointTable(std::move(vars), std::move(probs));
}

double JointTable::at(std::span<const std::size_t> config) const {
  return probs_[index_of(config)];
}

std::size_t JointTable::index_of(std::span<const std::size_t> config) const {
  if (config.size() != vars_.size()) {
    throw Error(ErrorCode::InvalidAssignment, "configuration length does not match table");
  }
  std::size_t flat = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (config[i] >= cards_[i]) {
      throw Error(ErrorCode::InvalidAssignment,
                  "value " + std::to_string(config[i]) + " out of range for " + vars_[i].name);
    }
    flat += config[i] * strides_[i];
  }
  return flat;
}

std::size_t JointTable::index_of(const Assignment& full) const {
  std::vector<std::size_t> config(vars_.size(), 0);
  for (const auto& [var, value] : full) {
    if (var >= vars_.size()) {
      throw Error(ErrorCode::InvalidAssignment, "unknown variable " + std::to_string(var));
    }
    config[var] = value;
  }
  if (full.size() != vars_.size()) {
    throw Error(ErrorCode::InvalidAssignment, "assignment does not bind every variable");
  }
  return index_of(config);
}

std::vector<std::size_t> JointTable::config_of(std::size_t flat) const {
  if (flat >= probs_.size()) {
    throw Error(ErrorCode::InvalidAssignment, "flat index out of range");
  }
  std::vector<std::size_t> config(vars_.size(), 0);
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    config[i] = flat / strides_[i];
    flat %= strides_[i];
  }
  return config;
}

std::optional<std::size_t> JointTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<double> project(const JointTable& table, std::span<const std::size_t> order) {
  for (auto v : order) {
    if (v >= table.num_vars()) throw Error(ErrorCode::InvalidQuery, "variable index out of range");
  }
  return detail::project<double>(table.cardinalities(), table.probs(), order);
}

JointTable marginalize(const JointTable& table, const VarSet& keep) {
  if (keep.empty()) throw Error(ErrorCode::InvalidQuery, "marginal needs at least one variable");
  check_var_set(table, keep, "keep set");
  std::vector<VariableSpec> vars;
  for (auto v : keep) vars.push_back(table.vars()[v]);
  return JointTable(std::move(vars), project(table, keep));
}

JointTable condition(const JointTable& table, const Assignment& evidence) {
  if (evidence.size() >= table.num_vars()) {
    throw Error(ErrorCode::InvalidQuery, "evidence must leave at least one variable unbound");
  }
  for (const auto& [var, value] : evidence) {
    if (var >= table.num_vars() || value >= table.vars()[var].cardinality) {
      throw Error(ErrorCode::InvalidAssignment, "evidence out of range");
    }
  }
  VarSet free_vars;
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < table.num_vars(); ++i) {
    if (!evidence.contains(i)) {
      free_vars.push_back(i);
      vars.push_back(table.vars()[i]);
    }
  }
  std::vector<std::size_t> free_cards;
  for (auto v : free_vars) free_cards.push_back(table.vars()[v].cardinality);
  const auto free_strides = detail::strides_of(free_cards);

  std::vector<double> probs(detail::cell_count(free_cards), 0.0);
  long double mass = 0.0L;
  std::vector<std::size_t> config(table.num_vars(), 0);
  std::size_t flat = 0;
  do {
    bool consistent = true;
    for (const auto& [var, value] : evidence) {
      if (config[var] != value) {
        consistent = false;
        break;
      }
    }
    if (consistent) {
      std::size_t target = 0;
      for (std::size_t k = 0; k < free_vars.size(); ++k) target += config[free_vars[k]] * free_strides[k];
      probs[target] = table[flat];
      mass += table[flat];
    }
    ++flat;
  } while (detail::next_config(config, table.cardinalities()));

  if (mass <= 0.0L) throw Error(ErrorCode::ZeroEvidence, "evidence has zero probability");
  for (auto& p : probs) p = static_cast<double>(p / mass);
  return JointTable(std::move(vars), std::move(probs));
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double entropy(const JointTable& table) { return entropy(table.probs()); }

double mutual_information(const JointTable& table, std::size_t x, std::size_t y) {
  if (x == y) throw Error(ErrorCode::InvalidQuery, "mutual information needs two distinct variables");
  if (x >= table.num_vars() || y >= table.num_vars()) {
    throw Error(ErrorCode::InvalidQuery, "variable index out of range");
  }
  const std::size_t order[] = {x, y};
  const auto joint = project(table, order);
  const std::size_t cx = table.vars()[x].cardinality;
  const std::size_t cy = table.vars()[y].cardinality;
  std::vector<double> px(cx, 0.0), py(cy, 0.0);
  for (std::size_t a = 0; a < cx; ++a) {
    for (std::size_t b = 0; b < cy; ++b) {
      px[a] += joint[a * cy + b];
      py[b] += joint[a * cy + b];
    }
  }
  double mi = 0.0;
  for (std::size_t a = 0; a < cx; ++a) {
    for (std::size_t b = 0; b < cy; ++b) {
      const double pxy = joint[a * cy + b];
      if (pxy > 0.0) mi += pxy * std::log(pxy / (px[a] * py[b]));
    }
  }
  return std::max(mi, 0.0);
}

namespace {

struct ZuvJoint {
  std::vector<double> joint;  // over (z, u, v), v fastest
  std::size_t nz = 1, nu = 1, nv = 1;
};

ZuvJoint zuv_joint(const JointTable& table, const VarSet& u, const VarSet& z, const VarSet& v) {
  if (u.empty() || v.empty()) throw Error(ErrorCode::InvalidQuery, "u and v must be non-empty");
  check_var_set(table, u, "u");
  check_var_set(table, z, "z");
  check_var_set(table, v, "v");
  if (!disjoint(u, z) || !disjoint(u, v) || !disjoint(z, v)) {
    throw Error(ErrorCode::InvalidQuery, "u, z and v must be pairwise disjoint");
  }
  ZuvJoint out;
  std::vector<std::size_t> order;
  for (auto i : z) {
    order.push_back(i);
    out.nz *= table.vars()[i].cardinality;
  }
  for (auto i : u) {
    order.push_back(i);
    out.nu *= table.vars()[i].cardinality;
  }
  for (auto i : v) {
    order.push_back(i);
    out.nv *= table.vars()[i].cardinality;
  }
  out.joint = project(table, order);
  return out;
}

}  // namespace

double conditional_mutual_information(const JointTable& table, const VarSet& u, const VarSet& z,
                                      const VarSet& v) {
  const auto j = zuv_joint(table, u, z, v);
  double cmi = 0.0;
  for (std::size_t zi = 0; zi < j.nz; ++zi) {
    const double* block = &j.joint[zi * j.nu * j.nv];
    double pz = 0.0;
    std::vector<double> pzu(j.nu, 0.0), pzv(j.nv, 0.0);
    for (std::size_t ui = 0; ui < j.nu; ++ui) {
      for (std::size_t vi = 0; vi < j.nv; ++vi) {
        const double p = block[ui * j.nv + vi];
        pz += p;
        pzu[ui] += p;
        pzv[vi] += p;
      }
    }
    for (std::size_t ui = 0; ui < j.nu; ++ui) {
      for (std::size_t vi = 0; vi < j.nv; ++vi) {
        const double p = block[ui * j.nv + vi];
        if (p > 0.0) cmi += p * std::log(p * pz / (pzu[ui] * pzv[vi]));
      }
    }
  }
  return std::max(cmi, 0.0);
}

bool is_independent(const JointTable& table, const VarSet& u, const VarSet& z, const VarSet& v,
                    double tol) {
  const auto j = zuv_joint(table, u, z, v);
  for (std::size_t zi = 0; zi < j.nz; ++zi) {
    const double* block = &j.joint[zi * j.nu * j.nv];
    double pz = 0.0;
    std::vector<double> pzu(j.nu, 0.0), pzv(j.nv, 0.0);
    for (std::size_t ui = 0; ui < j.nu; ++ui) {
      for (std::size_t vi = 0; vi < j.nv; ++vi) {
        const double p = block[ui * j.nv + vi];
        pz += p;
        pzu[ui] += p;
        pzv[vi] += p;
      }
    }
    for (std::size_t vi = 0; vi < j.nv; ++vi) {
      if (!(pzv[vi] > 0.0)) continue;
      for (std::size_t ui = 0; ui < j.nu; ++ui) {
        const double given_vz = block[ui * j.nv + vi] / pzv[vi];
        const double given_z = pzu[ui] / pz;
        if (std::fabs(given_vz - given_z) > tol) return false;
      }
    }
  }
  return true;
}

JointTable independent_product(const JointTable& a, const JointTable& b) {
  std::vector<VariableSpec> vars = a.vars();
  vars.insert(vars.end(), b.vars().begin(), b.vars().end());
  std::vector<double> probs;
  probs.reserve(a.size() * b.size());
  for (double pa : a.probs()) {
    for (double pb : b.probs()) probs.push_back(pa * pb);
  }
  return JointTable(std::move(vars), std::move(probs));
}

JointTable product_of_marginals(const JointTable& table) {
  std::vector<std::vector<double>> singles;
  for (std::size_t i = 0; i < table.num_vars(); ++i) {
    const std::size_t order[] = {i};
    singles.push_back(project(table, order));
  }
  std::vector<double> probs(table.size(), 1.0);
  std::vector<std::size_t> config(table.num_vars(), 0);
  std::size_t flat = 0;
  do {
    for (std::size_t i = 0; i < config.size(); ++i) probs[flat] *= singles[i][config[i]];
    ++flat;
  } while (detail::next_config(config, table.cardinalities()));
  return JointTable(table.vars(), std::move(probs));
}

}  // namespace pi_forge
