#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fractarray/baselines.hpp"
#include "fractarray/core.hpp"
#include "fractarray/fractal.hpp"
#include "oracles.hpp"

using namespace fractarray;

namespace {

SensorArray arr(std::vector<Position> v) { return SensorArray(std::move(v)); }

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("cantor arrays") {
  CHECK(cantor(0) == arr({0}));
  CHECK(cantor(1) == arr({0, 1}));
  CHECK(cantor(2) == arr({0, 1, 3, 4}));
  CHECK(cantor(3) == arr({0, 1, 3, 4, 9, 10, 12, 13}));
  CHECK_THROWS_AS(cantor(-1), std::invalid_argument);
  CHECK_THROWS_AS(cantor(9), std::invalid_argument);
  CHECK(cantor(9, 9).size() == 512);

  for (int r = 0; r <= 8; ++r) {
    const auto c = cantor(r);
    const CoarrayProfile p(c);
    CHECK(c.size() == static_cast<std::size_t>(1) << r);
    CHECK(p.hole_free());
    CHECK(static_cast<std::int64_t>(p.dof()) == ipow(3, r));
    CHECK(is_symmetric(c));
  }
}

TEST_CASE("single generator expansion") {
  CHECK(expand(arr({0, 1}), 2) == cantor(2));
  CHECK(expand(arr({0, 1, 4, 6}), 0) == arr({0}));
  CHECK(translation_factor(arr({0, 1, 4, 6})) == 13);
  CHECK(translation_factor(build_baseline(BaselineSpec::coprime(3, 4))) < 2 * 16 + 1);

  const auto f2 = expand(arr({0, 1, 4, 6}), 2);
  CHECK(f2 == arr({0, 1, 4, 6, 13, 14, 17, 19, 52, 53, 56, 58, 78, 79, 82, 84}));
  const CoarrayProfile p(f2);
  CHECK(p.hole_free());
  CHECK(p.max_lag() == 84);
  CHECK(p.dof() == 169);

  for (const auto& g : oracle::all_arrays(6)) {
    const SensorArray a(g);
    CHECK(expand(a, 1) == a);
    CHECK(oracle::elems(expand(a, 2)) == oracle::expand(g, 2));
  }

  CHECK_THROWS_AS(expand(arr({0, 1}), -1), std::invalid_argument);
  CHECK_THROWS_AS(expand(arr({0, 1}), 9), std::invalid_argument);
  CHECK_THROWS_AS(expand(arr({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), 8), std::length_error);
}

TEST_CASE("hole-free generators give hole-free fractals of size |D|^r") {
  for (const auto& g : oracle::hole_free_arrays(6)) {
    const SensorArray a(g);
    const auto d = static_cast<std::int64_t>(CoarrayProfile(a).dof());
    for (int r = 1; r <= 2; ++r) {
      const auto f = expand(a, r);
      const CoarrayProfile p(f);
      CHECK(p.hole_free());
      CHECK(static_cast<std::int64_t>(p.dof()) == ipow(d, r));
      CHECK(static_cast<std::int64_t>(f.size()) == ipow(static_cast<std::int64_t>(a.size()), r));
    }
  }
}

TEST_CASE("central ULA grows at least as |U|^r for any generator") {
  for (const auto& g : oracle::all_arrays(7)) {
    const SensorArray a(g);
    const auto u = CoarrayProfile(a).central_ula_size();
    for (int r = 2; r <= 3; ++r) {
      CHECK(CoarrayProfile(expand(a, r)).central_ula_size() >= ipow(u, r));
      CHECK(static_cast<std::int64_t>(expand(a, r).size()) <=
            ipow(static_cast<std::int64_t>(a.size()), r));
    }
  }
}

TEST_CASE("symmetric generators give symmetric fractals") {
  for (const auto& g : oracle::all_arrays(8)) {
    const SensorArray a(g);
    if (!is_symmetric(a)) continue;
    for (int r = 1; r <= 3; ++r) CHECK(is_symmetric(expand(a, r)));
  }
}

TEST_CASE("self-similarity: the first |G|^r sensors of F_{r+1} are F_r") {
  for (const auto& g : oracle::hole_free_arrays(6)) {
    const SensorArray a(g);
    for (int r = 1; r <= 2; ++r) {
      const auto fr = expand(a, r);
      const auto next = expand(a, r + 1);
      const std::vector<Position> head(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(fr.size()));
      CHECK(head == oracle::elems(fr));
    }
  }
}

TEST_CASE("multi-generator expansion") {
  const std::vector<SensorArray> pair = {arr({0, 1}), arr({0, 1, 2})};
  const auto m2 = expand_multi(pair, 2);
  CHECK(m2 == arr({0, 1, 3, 4, 6, 7}));
  const CoarrayProfile p(m2);
  CHECK(p.hole_free());
  CHECK(p.max_lag() == 7);
  CHECK(p.dof() == 15);
  CHECK(expand_multi(pair, 1) == arr({0, 1}));

  const std::vector<SensorArray> swapped = {arr({0, 1, 2}), arr({0, 1})};
  const auto s2 = expand_multi(swapped, 2);
  CHECK(s2.size() == 6);
  CHECK(s2 != m2);
  CHECK(CoarrayProfile(s2).dof() == 15);

  const std::vector<SensorArray> same(3, arr({0, 1, 4, 6}));
  for (int r = 1; r <= 3; ++r) CHECK(expand_multi(same, r) == expand(arr({0, 1, 4, 6}), r));

  CHECK_THROWS_AS(expand_multi(pair, 0), std::invalid_argument);
  CHECK_THROWS_AS(expand_multi(pair, 3), std::invalid_argument);
}

TEST_CASE("multi-generator products over a hole-free pool") {
  const std::vector<SensorArray> pool = {arr({0, 1}), arr({0, 1, 2}), arr({0, 1, 3}),
                                         arr({0, 1, 4, 6}), arr({0, 2, 3})};
  for (const auto& a : pool) {
    for (const auto& b : pool) {
      const std::vector<SensorArray> gens = {a, b};
      const auto m = expand_multi(gens, 2);
      const CoarrayProfile p(m);
      CHECK(p.hole_free());
      CHECK(p.dof() == CoarrayProfile(a).dof() * CoarrayProfile(b).dof());
      CHECK(m.size() == a.size() * b.size());
    }
  }
}

TEST_CASE("FractalSpec builds either form") {
  FractalSpec one{{arr({0, 1})}, 3};
  CHECK(one.build() == cantor(3));
  FractalSpec two{{arr({0, 1}), arr({0, 1, 2})}, 2};
  CHECK(two.build() == arr({0, 1, 3, 4, 6, 7}));
}
