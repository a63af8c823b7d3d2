#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fractarray/analysis.hpp"
#include "fractarray/core.hpp"
#include "fractarray/fractal.hpp"
#include "oracles.hpp"

using namespace fractarray;

namespace {

SensorArray arr(std::vector<Position> v) { return SensorArray(std::move(v)); }

const SensorArray kS = arr({0, 1, 2, 4, 7, 10, 13, 16, 18, 19, 20});

// sum over ordered pairs of exp(-j omega (a - b)), kept complex.
std::complex<double> direct_dtft(const oracle::Vec& g, double omega) {
  std::complex<double> s = 0.0;
  for (auto a : g)
    for (auto b : g) s += std::polar(1.0, -omega * static_cast<double>(a - b));
  return s;
}

}  // namespace

TEST_CASE("l-expansion") {
  const auto w = weight_function(arr({0, 1, 4, 6}));
  const auto up = weight_expand(w, 13);
  CHECK(up.size() == w.size());
  for (const auto& [lag, count] : up) {
    CHECK(lag % 13 == 0);
    CHECK(count == w.at(lag / 13));
  }
  CHECK(up.rbegin()->first == 78);
  CHECK(weight_expand(w, 1) == w);
  const WeightMap delta{{0, 1}};
  CHECK(weight_expand(delta, 7) == delta);
  CHECK_THROWS(weight_expand(w, 0));
}

TEST_CASE("convolution") {
  const WeightMap delta{{0, 1}};
  const auto w = weight_function(arr({0, 1, 4, 6}));
  CHECK(convolve(w, delta) == w);
  CHECK(convolve(delta, w) == w);
  const WeightMap a{{-1, 1}, {0, 2}, {1, 1}};
  const WeightMap b{{-2, 3}, {2, 3}};
  const WeightMap expected{{-3, 3}, {-2, 6}, {-1, 3}, {1, 3}, {2, 6}, {3, 3}};
  CHECK(convolve(a, b) == expected);
}

TEST_CASE("fractal weight function is the convolution of expanded generator weights") {
  CHECK(fractal_weight(arr({0, 1, 4, 6}), 1) == weight_function(arr({0, 1, 4, 6})));
  CHECK(fractal_weight(arr({0, 1, 4, 6}), 0) == WeightMap{{0, 1}});

  const auto w2 = fractal_weight(arr({0, 1, 4, 6}), 2);
  CHECK(w2.begin()->first == -84);
  CHECK(w2.rbegin()->first == 84);
  CHECK(w2.size() == 169);

  for (const auto& g : oracle::hole_free_arrays(7)) {
    for (int r = 1; r <= 3; ++r) {
      const auto brute = oracle::pair_weights(oracle::expand(g, r));
      CHECK(fractal_weight(SensorArray(g), r) == WeightMap(brute.begin(), brute.end()));
    }
  }
}

TEST_CASE("beampattern basics") {
  const std::vector<double> zero = {0.0};
  CHECK(beampattern(kS, zero).samples[0].value == doctest::Approx(121.0));
  const auto omegas = uniform_omegas(64);
  for (const auto& s : beampattern(arr({0}), omegas).samples) CHECK(s.value == doctest::Approx(1.0));
  CHECK(omegas.front() == doctest::Approx(-M_PI));
  CHECK(omegas.size() == 64);
  CHECK(omegas[32] == doctest::Approx(0.0));
}

TEST_CASE("beampattern matches the complex DTFT and is real and even") {
  std::mt19937_64 rng(5);
  const auto omegas = uniform_omegas(97);
  for (int t = 0; t < 50; ++t) {
    const auto g = oracle::random_array(rng, 1 + rng() % 10, 30);
    const auto bp = beampattern(SensorArray(g), omegas);
    for (const auto& s : bp.samples) {
      const auto ref = direct_dtft(g, s.omega);
      CHECK(std::abs(ref.imag()) < 1e-9);
      CHECK(s.value == doctest::Approx(ref.real()).epsilon(1e-9).scale(static_cast<double>(g.size() * g.size())));
      const std::vector<double> neg = {-s.omega};
      CHECK(beampattern(SensorArray(g), neg).samples[0].value ==
            doctest::Approx(s.value).scale(static_cast<double>(g.size() * g.size())));
    }
  }
}

TEST_CASE("fractal beampattern product form") {
  const auto omegas = uniform_omegas(256);
  const SensorArray g = arr({0, 1, 4, 6});
  const auto direct = beampattern(expand(g, 2), omegas);
  const auto product = fractal_beampattern(g, 2, omegas);
  REQUIRE(direct.samples.size() == product.samples.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const double d = direct.samples[i].value;
    const double p = product.samples[i].value;
    CHECK(std::abs(d - p) <= 1e-9 * std::max(1.0, std::abs(d)) + 1e-9 * 256.0);
    const double g0 = beampattern_value(weight_function(g), omegas[i]);
    const double g13 = beampattern_value(weight_function(g), 13.0 * omegas[i]);
    CHECK(p == doctest::Approx(g0 * g13).epsilon(1e-9).scale(256.0));
  }
}

TEST_CASE("economy on known arrays") {
  SUBCASE("MHA [0 1 4 6] is maximally economic") {
    const auto e = economy(arr({0, 1, 4, 6}));
    CHECK(e.fragility == Fraction(1));
    CHECK(e.maximally_economic);
    CHECK(e.satisfies_c1);
    CHECK(e.inessential.empty());
  }
  SUBCASE("ULA keeps only its endpoints essential") {
    for (Position n = 4; n <= 12; ++n) {
      std::vector<Position> v;
      for (Position i = 0; i < n; ++i) v.push_back(i);
      const auto e = economy(SensorArray(v));
      CHECK(e.fragility == Fraction(2, n));
      CHECK(e.essential == std::vector<Position>{0, n - 1});
    }
  }
  SUBCASE("S") {
    const auto e = economy(kS);
    CHECK(e.fragility == Fraction(3, 11));
    CHECK(e.essential == std::vector<Position>{0, 10, 20});
    CHECK_FALSE(e.maximally_economic);
  }
  SUBCASE("S expanded twice") {
    const auto f = fragility(expand(kS, 2));
    CHECK(f == Fraction(4, 121));
    CHECK(std::round(boost::rational_cast<double>(f) * 100) / 100 == doctest::Approx(0.03));
  }
  SUBCASE("single sensor") {
    const auto e = economy(arr({0}));
    CHECK(e.fragility == Fraction(1));
    CHECK(e.essential == std::vector<Position>{0});
    CHECK(e.satisfies_c1);
  }
}

TEST_CASE("exact essentialness agrees with coarray recomputation") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 400; ++t) {
    const auto g = oracle::random_array(rng, 1 + rng() % 11, 4 + static_cast<std::int64_t>(rng() % 24));
    const SensorArray a(g);
    const auto e = economy(a);
    const auto brute = oracle::essential(g);
    std::vector<Position> ess, iness;
    for (std::size_t i = 0; i < g.size(); ++i) (brute[i] ? ess : iness).push_back(g[i]);
    CHECK(e.essential == ess);
    CHECK(e.inessential == iness);
    const auto [num, den] = oracle::fragility(g);
    CHECK(e.fragility == Fraction(num, den));
    CHECK(e.maximally_economic == (e.fragility == Fraction(1)));
    CHECK(e.satisfies_c1 == oracle::c1(g));
    if (e.satisfies_c1) CHECK(e.maximally_economic);
  }
}

TEST_CASE("C1 and fragility carry over to fractals of hole-free generators") {
  for (const auto& g : oracle::hole_free_arrays(7)) {
    const SensorArray a(g);
    const auto base = economy(a);
    for (int r = 1; r <= 2; ++r) {
      const auto f = expand(a, r);
      if (base.satisfies_c1) CHECK(satisfies_c1(f));
      CHECK(fragility(f) <= base.fragility);
    }
  }
}
