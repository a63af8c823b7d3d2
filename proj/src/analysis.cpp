#include "fractarray/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fractarray/detail/essential.hpp"
#include "fractarray/fractal.hpp"

namespace fractarray {

WeightMap weight_function(const SensorArray& array) {
  return difference_coarray(array).weight_map();
}

WeightMap weight_expand(const WeightMap& w, std::int64_t ell) {
  if (ell < 1) throw std::invalid_argument("expansion factor must be at least 1");
  WeightMap out;
  for (const auto& [lag, count] : w) {
    Lag scaled = 0;
    if (__builtin_mul_overflow(lag, ell, &scaled)) throw std::overflow_error("lag overflow");
    out.emplace_hint(out.end(), scaled, count);
  }
  return out;
}

WeightMap convolve(const WeightMap& a, const WeightMap& b) {
  WeightMap out;
  for (const auto& [la, ca] : a) {
    for (const auto& [lb, cb] : b) out[la + lb] += ca * cb;
  }
  return out;
}

WeightMap fractal_weight(const SensorArray& generator, int order) {
  if (order < 0) throw std::invalid_argument("array order must be non-negative");
  const WeightMap wg = weight_function(generator);
  const std::int64_t m = translation_factor(generator);
  WeightMap w{{0, 1}};
  std::int64_t ell = 1;
  for (int i = 0; i < order; ++i) {
    w = convolve(w, weight_expand(wg, ell));
    if (__builtin_mul_overflow(ell, m, &ell)) throw std::overflow_error("lag overflow");
  }
  return w;
}

double beampattern_value(const WeightMap& w, double omega) {
  double acc = 0.0;
  for (const auto& [lag, count] : w) {
    if (lag < 0) continue;
    const double c = static_cast<double>(count);
    acc += lag == 0 ? c : 2.0 * c * std::cos(omega * static_cast<double>(lag));
  }
  return acc;
}

Beampattern beampattern(const SensorArray& array, std::span<const double> omegas) {
  const WeightMap w = weight_function(array);
  Beampattern out{to_string(array), {}};
  out.samples.reserve(omegas.size());
  for (double om : omegas) out.samples.push_back({om, beampattern_value(w, om)});
  return out;
}

Beampattern fractal_beampattern(const SensorArray& generator, int order,
                                std::span<const double> omegas) {
  if (order < 0) throw std::invalid_argument("array order must be non-negative");
  const WeightMap wg = weight_function(generator);
  const double m = static_cast<double>(translation_factor(generator));
  Beampattern out{to_string(generator) + " order " + std::to_string(order), {}};
  out.samples.reserve(omegas.size());
  for (double om : omegas) {
    double value = 1.0;
    double scale = 1.0;
    for (int i = 0; i < order; ++i) {
      value *= beampattern_value(wg, scale * om);
      scale *= m;
    }
    out.samples.push_back({om, value});
  }
  return out;
}

std::vector<double> uniform_omegas(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(count);
  }
  return out;
}

EconomyReport economy(const SensorArray& array) {
  const CoarrayProfile profile(array);
  auto weight = [&](Lag m) { return profile.weight(m); };
  auto contains = [&](Position p) { return array.contains(p); };
  const auto flags = detail::essential_flags(array.elements(), weight, contains);

  EconomyReport report;
  for (std::size_t i = 0; i < array.size(); ++i) {
    (flags[i] ? report.essential : report.inessential).push_back(array[i]);
  }
  report.fragility = Fraction(static_cast<std::int64_t>(report.essential.size()),
                              static_cast<std::int64_t>(array.size()));
  report.maximally_economic = report.inessential.empty();
  report.satisfies_c1 = detail::satisfies_c1(array.elements(), weight);
  return report;
}

Fraction fragility(const SensorArray& array) { return economy(array).fragility; }

bool satisfies_c1(const SensorArray& array) {
  const CoarrayProfile profile(array);
  return detail::satisfies_c1(array.elements(), [&](Lag m) { return profile.weight(m); });
}

}  // namespace fractarray
