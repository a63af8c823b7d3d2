// Fractal array construction.
//
// A generator G is replicated recursively:
//   F_0 = {0},  F_{k+1} = union over n in G of (F_k + n * M^k),
// with translation factor M = |U|, the size of the generator's central ULA.
// The multi-generator variant uses a different generator at every level and
// the running product of the previous generators' central-ULA sizes as the
// translation factor.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fractarray/core.hpp"

namespace fractarray {

/// Default cap on the array order; orders above 4 are rarely useful and the
/// sensor count grows as |G|^r.
inline constexpr int kDefaultMaxOrder = 8;

/// Refuse to materialize arrays with more sensors than this.
inline constexpr std::size_t kMaxFractalSensors = std::size_t{1} << 24;

/// C_0 = {0}, C_{r+1} = C_r u (C_r + 3^r).
SensorArray cantor(int order, int max_order = kDefaultMaxOrder);

/// |U| of the generator's difference coarray.
std::int64_t translation_factor(const SensorArray& generator);

/// Single-generator expansion of order `order` (order 0 gives {0}).
/// Coinciding replicas, possible only when the generator coarray has holes,
/// are merged.
SensorArray expand(const SensorArray& generator, int order, int max_order = kDefaultMaxOrder);

/// Multi-generator expansion using generators[0..order-1].
/// Requires 1 <= order <= generators.size().
SensorArray expand_multi(std::span<const SensorArray> generators, int order,
                         int max_order = kDefaultMaxOrder);

/// Generators plus order. A single generator is reused at every level.
struct FractalSpec {
  std::vector<SensorArray> generators;
  int order = 1;

  SensorArray build(int max_order = kDefaultMaxOrder) const;
};

}  // namespace fractarray
