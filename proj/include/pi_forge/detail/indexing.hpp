#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pi_forge::detail {

// Row-major strides: the last variable varies fastest.
inline std::vector<std::size_t> strides_of(std::span<const std::size_t> cards) {
  std::vector<std::size_t> strides(cards.size(), 1);
  for (std::size_t i = cards.size(); i-- > 1;) strides[i - 1] = strides[i] * cards[i];
  return strides;
}

inline std::size_t cell_count(std::span<const std::size_t> cards) {
  std::size_t total = 1;
  for (auto c : cards) total *= c;
  return total;
}

// Odometer over value tuples in flat-index order.
inline bool next_config(std::vector<std::size_t>& config, std::span<const std::size_t> cards) {
  for (std::size_t i = config.size(); i-- > 0;) {
    if (++config[i] < cards[i]) return true;
    config[i] = 0;
  }
  return false;
}

/// Advances `idx` (sorted positions into 0..n-1) to the next k-combination in
/// lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
  if (i == 0) return false;
  ++idx[i - 1];
  for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

/// Sums `values` (laid out over `cards`) onto the variables listed in `order`,
/// producing a dense array over `order` with the last listed variable fastest.
template <class T>
std::vector<T> project(std::span<const std::size_t> cards, std::span<const T> values,
                       std::span<const std::size_t> order) {
  std::vector<std::size_t> out_cards;
  out_cards.reserve(order.size());
  for (auto v : order) out_cards.push_back(cards[v]);
  const auto out_strides = strides_of(out_cards);
  std::vector<T> out(cell_count(out_cards), T{});

  std::vector<std::size_t> config(cards.size(), 0);
  std::size_t flat = 0;
  do {
    std::size_t target = 0;
    for (std::size_t k = 0; k < order.size(); ++k) target += config[order[k]] * out_strides[k];
    out[target] += values[flat];
    ++flat;
  } while (next_config(config, cards));
  return out;
}

}  // namespace pi_forge::detail
