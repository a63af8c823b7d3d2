#include "fractarray/fractal.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fractarray {

namespace {

void check_order(int order, int max_order) {
  if (order < 0) throw std::invalid_argument("array order must be non-negative");
  if (order > max_order) {
    throw std::invalid_argument("array order " + std::to_string(order) +
                                " exceeds the configured limit " + std::to_string(max_order));
  }
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("sensor position overflow");
  return out;
}

// One recursion step: union of `base + n * factor` over the generator.
std::vector<Position> replicate(const std::vector<Position>& base, const SensorArray& generator,
                                std::int64_t factor) {
  if (base.size() * generator.size() > kMaxFractalSensors) {
    throw std::length_error("fractal array would exceed the sensor limit");
  }
  std::vector<Position> next;
  next.reserve(base.size() * generator.size());
  for (Position n : generator) {
    const Position offset = checked_mul(n, factor);
    for (Position f : base) {
      Position p = 0;
      if (__builtin_add_overflow(f, offset, &p)) throw std::overflow_error("sensor position overflow");
      next.push_back(p);
    }
  }
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return next;
}

}  // namespace

SensorArray cantor(int order, int max_order) {
  check_order(order, max_order);
  return expand(SensorArray({0, 1}), order, max_order);
}

std::int64_t translation_factor(const SensorArray& generator) {
  return difference_coarray(generator).central_ula_size();
}

SensorArray expand(const SensorArray& generator, int order, int max_order) {
  check_order(order, max_order);
  const std::int64_t m = translation_factor(generator);
  std::vector<Position> cur{0};
  std::int64_t factor = 1;
  for (int k = 0; k < order; ++k) {
    cur = replicate(cur, generator, factor);
    if (k + 1 < order) factor = checked_mul(factor, m);
  }
  return SensorArray(std::move(cur));
}

SensorArray expand_multi(std::span<const SensorArray> generators, int order, int max_order) {
  if (order < 1) throw std::invalid_argument("multi-generator order must be at least 1");
  if (static_cast<std::size_t>(order) > generators.size()) {
    throw std::invalid_argument("order exceeds the number of generators");
  }
  check_order(order, max_order);
  std::vector<Position> cur{0};
  std::int64_t factor = 1;
  for (int k = 0; k < order; ++k) {
    const auto& g = generators[static_cast<std::size_t>(k)];
    cur = replicate(cur, g, factor);
    if (k + 1 < order) factor = checked_mul(factor, translation_factor(g));
  }
  return SensorArray(std::move(cur));
}

SensorArray FractalSpec::build(int max_order) const {
  if (generators.empty()) throw std::invalid_argument("fractal spec needs a generator");
  if (generators.size() == 1) return expand(generators.front(), order, max_order);
  return expand_multi(generators, order, max_order);
}

}  // namespace fractarray
