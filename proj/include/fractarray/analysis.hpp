// Weight functions, beampatterns and array economy/fragility.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "fractarray/core.hpp"

namespace fractarray {

using Fraction = boost::rational<std::int64_t>;

WeightMap weight_function(const SensorArray& array);

/// w^{up l}(n*l) = w(n), zero elsewhere. Requires ell >= 1.
WeightMap weight_expand(const WeightMap& w, std::int64_t ell);

/// Exact integer convolution.
WeightMap convolve(const WeightMap& a, const WeightMap& b);

/// Weight function of expand(generator, order) computed as the convolution of
/// the generator's weight function expanded by M^0, ..., M^{order-1}.
/// Order 0 gives the Kronecker delta.
WeightMap fractal_weight(const SensorArray& generator, int order);

/// B(omega) = sum_m w(m) exp(-j omega m). Real because w is even.
double beampattern_value(const WeightMap& w, double omega);

struct BeamSample {
  double omega = 0.0;
  double value = 0.0;
};

struct Beampattern {
  std::string source;
  std::vector<BeamSample> samples;
};

/// Direct transform of the array's weight function (not normalized).
Beampattern beampattern(const SensorArray& array, std::span<const double> omegas);

/// Product form prod_{i<order} B_G(M^i omega) for the fractal built from `generator`.
Beampattern fractal_beampattern(const SensorArray& generator, int order,
                                std::span<const double> omegas);

/// `count` frequencies evenly spaced over [-pi, pi).
std::vector<double> uniform_omegas(std::size_t count);

struct EconomyReport {
  std::vector<Position> essential;
  std::vector<Position> inessential;
  Fraction fragility{1};
  bool maximally_economic = true;
  bool satisfies_c1 = true;
};

/// Exact essentialness of every sensor (a sensor is essential iff removing
/// it changes the difference coarray), plus the C1 sufficient condition.
EconomyReport economy(const SensorArray& array);

Fraction fragility(const SensorArray& array);

bool satisfies_c1(const SensorArray& array);

}  // namespace fractarray
