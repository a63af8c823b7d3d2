#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fractarray/core.hpp"

namespace fractarray::detail {

// Removing sensor n drops, at lag m = n - x (x != n), exactly
// 1 + [2n - x is a sensor] ordered pairs. The lag vanishes from the coarray,
// i.e. n is essential, iff that equals w(m). A lone sensor is essential.
//
// `weight(lag)` must return the pair count for any lag; `contains(p)` tests
// sensor membership.
template <class WeightFn, class ContainsFn>
std::vector<bool> essential_flags(std::span<const Position> sensors, WeightFn&& weight,
                                  ContainsFn&& contains) {
  const std::size_t n = sensors.size();
  std::vector<bool> essential(n, n == 1);
  if (n == 1) return essential;
  for (std::size_t i = 0; i < n; ++i) {
    const Position s = sensors[i];
    for (std::size_t j = 0; j < n && !essential[i]; ++j) {
      if (j == i) continue;
      const Position x = sensors[j];
      const std::int64_t lost = 1 + (contains(2 * s - x) ? 1 : 0);
      if (weight(s - x) == lost) essential[i] = true;
    }
  }
  return essential;
}

// Condition C1: every sensor takes part in some pair whose lag has weight 1.
template <class WeightFn>
bool satisfies_c1(std::span<const Position> sensors, WeightFn&& weight) {
  for (Position s : sensors) {
    bool found = false;
    for (Position x : sensors) {
      if (weight(s - x) == 1) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace fractarray::detail
