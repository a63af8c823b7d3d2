#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fractarray/baselines.hpp"
#include "fractarray/core.hpp"
#include "fractarray/doa.hpp"
#include "oracles.hpp"

using namespace fractarray;

namespace {

using cd = std::complex<double>;

SensorArray arr(std::vector<Position> v) { return SensorArray(std::move(v)); }

const SensorArray kS = arr({0, 1, 2, 4, 7, 10, 13, 16, 18, 19, 20});

cd steer(double theta, double n) { return std::polar(1.0, 2.0 * std::numbers::pi * theta * n); }

// v(m) = sum_i p_i exp(j 2 pi theta_i m), the noiseless virtual measurement.
VirtualUla analytic_ula(Lag m, const std::vector<double>& thetas) {
  VirtualUla u;
  u.halfwidth = m;
  for (Lag l = -m; l <= m; ++l) {
    cd s = 0.0;
    for (double t : thetas) s += steer(t, static_cast<double>(l));
    u.samples.push_back(s);
  }
  return u;
}

Scenario scenario(const SensorArray& a, std::vector<double> dirs) {
  Scenario sc;
  sc.array = a;
  for (double d : dirs) sc.sources.push_back({d, 1.0});
  sc.trials = 4;
  return sc;
}

}  // namespace

TEST_CASE("equispaced sources") {
  const auto s = equispaced_sources(20, -0.45, 0.45);
  REQUIRE(s.size() == 20);
  CHECK(s.front().direction == doctest::Approx(-0.45));
  CHECK(s.back().direction == doctest::Approx(0.45));
  CHECK(s[1].direction - s[0].direction == doctest::Approx(0.9 / 19));
  CHECK(equispaced_sources(1, -0.2, 0.4)[0].direction == doctest::Approx(0.1));
  CHECK_THROWS_AS(equispaced_sources(0, 0, 1), std::invalid_argument);
}

TEST_CASE("scenario validation") {
  auto sc = scenario(kS, {0.1});
  CHECK_NOTHROW(sc.validate());
  CHECK(sc.noise_power() == doctest::Approx(1.0));
  sc.snr_db = 10;
  CHECK(sc.noise_power() == doctest::Approx(0.1));

  auto bad = scenario(kS, {0.6});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = scenario(kS, {0.1, 0.1});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = scenario(kS, {});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = scenario(kS, {0.1});
  bad.failure_probability = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = scenario(kS, {0.1});
  bad.snapshots = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("broadside source without noise gives identical rows") {
  auto sc = scenario(kS, {0.0});
  sc.snr_db = 300;
  sc.snapshots = 64;
  const auto block = synthesize(sc, 99);
  REQUIRE(block);
  CHECK(block->array == kS);
  for (Eigen::Index i = 1; i < block->data.rows(); ++i) {
    CHECK((block->data.row(i) - block->data.row(0)).norm() < 1e-12);
  }
}

TEST_CASE("failures shrink the array and may remove everything") {
  auto sc = scenario(arr({0}), {0.1});
  sc.failure_probability = 0.9;
  sc.snapshots = 4;
  int empty = 0, present = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    if (synthesize(sc, seed)) {
      ++present;
      continue;
    }
    ++empty;
    const auto out = run_trial(sc, seed);
    CHECK_FALSE(out.success);
    CHECK(out.surviving_sensors == 0);
  }
  CHECK(empty > 0);
  CHECK(present > 0);

  auto big = scenario(kS, {0.1});
  big.failure_probability = 0.5;
  big.snapshots = 4;
  const auto block = synthesize(big, 1234);
  REQUIRE(block);
  CHECK(block->array.size() == static_cast<std::size_t>(block->data.rows()));
  CHECK(block->array.size() <= kS.size());
}

TEST_CASE("sample covariance converges to the model covariance") {
  auto sc = scenario(kS, {0.17});
  sc.snapshots = 100000;
  const auto block = synthesize(sc, 7);
  REQUIRE(block);
  const auto r = sample_covariance(block->data);
  for (std::size_t i = 0; i < kS.size(); ++i) {
    for (std::size_t j = 0; j < kS.size(); ++j) {
      cd expected = steer(0.17, static_cast<double>(kS[i])) * std::conj(steer(0.17, static_cast<double>(kS[j])));
      if (i == j) expected += sc.noise_power();
      const auto idx_i = static_cast<Eigen::Index>(i), idx_j = static_cast<Eigen::Index>(j);
      CHECK(std::abs(r(idx_i, idx_j) - expected) <= 0.05 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("coarray statistics average duplicate lags") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  const auto g = oracle::elems(kS);
  Eigen::MatrixXcd x(static_cast<Eigen::Index>(g.size()), 37);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index t = 0; t < x.cols(); ++t) x(i, t) = {nd(rng), nd(rng)};
  const auto ula = coarray_statistics(x, kS);
  const auto r = sample_covariance(x);

  std::map<Lag, cd> sum;
  std::map<Lag, int> count;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      sum[g[i] - g[j]] += r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      ++count[g[i] - g[j]];
    }
  const auto w = oracle::pair_weights(g);
  CHECK(ula.halfwidth == 20);
  for (Lag m = -20; m <= 20; ++m) {
    CHECK(count[m] == w.at(m));
    CHECK(std::abs(ula.at(m) - sum[m] / static_cast<double>(count[m])) < 1e-12);
  }
  CHECK(std::abs(ula.at(0).imag()) < 1e-12);
  CHECK(ula.at(0).real() >= 0.0);
  CHECK_THROWS_AS(coarray_statistics(x.topRows(3), kS), std::invalid_argument);
}

TEST_CASE("coarray statistics converge to the closed form") {
  auto sc = scenario(kS, {-0.21, 0.33});
  sc.snapshots = 100000;
  sc.snr_db = 10;
  const auto block = synthesize(sc, 2024);
  REQUIRE(block);
  const auto ula = coarray_statistics(block->data, block->array);
  const auto ref = analytic_ula(ula.halfwidth, {-0.21, 0.33});
  double worst = 0.0;
  for (Lag m = -ula.halfwidth; m <= ula.halfwidth; ++m) {
    cd expected = ref.at(m);
    if (m == 0) expected += sc.noise_power();
    worst = std::max(worst, std::abs(ula.at(m) - expected));
  }
  CHECK(worst < 0.05);
}

TEST_CASE("smoothed covariance is the mean of shifted outer products") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  VirtualUla u;
  u.halfwidth = 6;
  for (int i = 0; i < 13; ++i) u.samples.push_back({nd(rng), nd(rng)});
  u.samples[6] = {std::abs(u.samples[6]), 0.0};

  const auto rss = smoothed_covariance(u);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(7, 7);
  for (int shift = 0; shift <= 6; ++shift) {
    Eigen::VectorXcd z(7);
    for (int k = 0; k <= 6; ++k) z(k) = u.at(k - shift);
    expected += z * z.adjoint();
  }
  expected /= 7.0;
  CHECK((rss - expected).norm() < 1e-12);
  CHECK((rss - rss.adjoint()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rss);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);

  const auto noisy = smoothed_covariance(analytic_ula(15, {0.1, -0.3, 0.25}));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e2(noisy);
  CHECK(e2.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("pseudospectrum matches the projection norm") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd m(9, 9);
  for (Eigen::Index i = 0; i < 9; ++i)
    for (Eigen::Index j = 0; j < 9; ++j) m(i, j) = {nd(rng), nd(rng)};
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(m).householderQ();
  const Eigen::MatrixXcd noise = q.leftCols(5);
  const std::size_t grid = 101;
  const auto p = music_pseudospectrum(noise, grid);
  REQUIRE(p.size() == grid);
  for (std::size_t g = 0; g < grid; ++g) {
    const double theta = -0.5 + static_cast<double>(g) / static_cast<double>(grid);
    Eigen::VectorXcd a(9);
    for (int k = 0; k < 9; ++k) a(k) = steer(theta, k);
    const double expected = 1.0 / (noise.adjoint() * a).squaredNorm();
    CHECK(p[g] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("noiseless single source lands within one grid cell") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> pick(-0.49, 0.49);
  const double cell = 1.0 / static_cast<double>(kDefaultMusicGrid);
  for (int t = 0; t < 50; ++t) {
    const double theta = pick(rng);
    const auto est = coarray_music(analytic_ula(20, {theta}), 1);
    REQUIRE(est);
    CHECK(std::abs((*est)[0] - theta) <= cell);
  }
}

TEST_CASE("grid-aligned sources are recovered exactly") {
  const std::size_t grid = 4096;
  std::vector<double> thetas;
  for (int g : {300, 1100, 2048, 2600, 3900}) thetas.push_back(-0.5 + g / static_cast<double>(grid));
  const auto est = coarray_music(analytic_ula(20, thetas), thetas.size(), grid);
  REQUIRE(est);
  for (std::size_t i = 0; i < thetas.size(); ++i) CHECK((*est)[i] == doctest::Approx(thetas[i]).epsilon(1e-12));
}

TEST_CASE("identifiability boundary") {
  CHECK(music_identifiable(19, 19));
  CHECK_FALSE(music_identifiable(19, 20));
  const auto na = build_baseline(BaselineSpec::nested(4, 4));
  CHECK(CoarrayProfile(na).central_ula_halfwidth() == 19);
  CHECK_THROWS_AS(coarray_music(analytic_ula(19, {0.1}), 20), std::invalid_argument);
  CHECK_THROWS_AS(coarray_music(analytic_ula(19, {0.1}), 0), std::invalid_argument);

  Scenario sc = scenario(na, {});
  sc.sources = equispaced_sources(20, -0.45, 0.45);
  sc.snapshots = 100;
  const auto out = run_trial(sc, 1);
  CHECK_FALSE(out.success);
  CHECK(out.surviving_sensors == 8);
}

TEST_CASE("rmse pairs sorted lists") {
  const std::vector<double> truth = {0.1, 0.2};
  const std::vector<double> est = {0.21, 0.09};
  CHECK(rmse(truth, est) == doctest::Approx(0.01));
  const std::vector<double> one = {0.0};
  CHECK_THROWS_AS(rmse(truth, one), std::invalid_argument);
}

TEST_CASE("aggregation averages over successes only") {
  std::vector<TrialOutcome> outcomes(3);
  outcomes[0].success = true;
  outcomes[0].rmse = 0.1;
  outcomes[1].success = false;
  outcomes[1].rmse = 100.0;
  outcomes[2].success = true;
  outcomes[2].rmse = 0.3;
  const auto row = aggregate(2.5, outcomes);
  CHECK(row.value == 2.5);
  CHECK(row.success_count == 2);
  CHECK(row.trial_count == 3);
  REQUIRE(row.rmse);
  CHECK(*row.rmse == doctest::Approx(0.2));

  const std::vector<TrialOutcome> failed(4);
  const auto none = aggregate(0.0, failed);
  CHECK_FALSE(none.rmse);
  CHECK(none.success_count == 0);
}

TEST_CASE("axes and seeds") {
  CHECK(parse_axis("coupling") == SweepAxis::coupling_c1_mag);
  CHECK(parse_axis("failure") == SweepAxis::failure_probability);
  CHECK(parse_axis("snr") == SweepAxis::snr_db);
  CHECK(axis_name(SweepAxis::failure_probability) == "failure");
  CHECK_THROWS_AS(parse_axis("power"), std::invalid_argument);

  const auto base = scenario(kS, {0.1});
  const auto c = apply_axis(base, SweepAxis::coupling_c1_mag, 0.2);
  REQUIRE(c.coupling);
  CHECK(c.coupling->c1_magnitude == 0.2);
  CHECK(c.coupling->phase_rule == PhaseRule::random_uniform);
  CHECK(apply_axis(base, SweepAxis::failure_probability, 0.3).failure_probability == 0.3);
  CHECK(apply_axis(base, SweepAxis::snr_db, -5).snr_db == -5);

  CHECK(trial_seed(1, 0.0, 0) == trial_seed(1, -0.0, 0));
  CHECK(trial_seed(1, 0.5, 0) != trial_seed(1, 0.5, 1));
  CHECK(trial_seed(1, 0.5, 0) != trial_seed(1, 0.25, 0));
  CHECK(trial_seed(1, 0.5, 0) != trial_seed(2, 0.5, 0));
}

TEST_CASE("sweeps are complete and schedule independent") {
  Scenario sc = scenario(kS, {});
  sc.sources = equispaced_sources(5, -0.45, 0.45);
  sc.snapshots = 200;
  sc.snr_db = 20;
  sc.trials = 12;
  sc.seed = 77;
  sc.coupling = CouplingModel{};

  const std::vector<double> zero = {0.0};
  const auto intact = run_sweep(sc, SweepAxis::failure_probability, zero);
  REQUIRE(intact.rows.size() == 1);
  CHECK(intact.rows[0].success_count == intact.rows[0].trial_count);

  const std::vector<double> grid = {0.0, 0.1, 0.3};
  std::vector<std::vector<double>> seen1, seen4;
  SweepOptions one;
  one.on_trial = [&](double, std::size_t, const TrialOutcome& t) { seen1.push_back(t.estimates); };
  SweepOptions four;
  four.threads = 4;
  four.on_trial = [&](double, std::size_t, const TrialOutcome& t) { seen4.push_back(t.estimates); };
  const auto a = run_sweep(sc, SweepAxis::coupling_c1_mag, grid, one);
  const auto b = run_sweep(sc, SweepAxis::coupling_c1_mag, grid, four);
  REQUIRE(a.rows.size() == 3);
  CHECK(seen1.size() == 36);
  CHECK(seen1 == seen4);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.rows[i].value == grid[i]);
    CHECK(a.rows[i].success_count == b.rows[i].success_count);
    CHECK(a.rows[i].rmse == b.rows[i].rmse);
    CHECK(a.rows[i].success_count <= a.rows[i].trial_count);
  }
  const std::vector<double> empty;
  CHECK_THROWS_AS(run_sweep(sc, SweepAxis::snr_db, empty), std::invalid_argument);
}

TEST_CASE("higher SNR lowers the error for S with 20 sources") {
  Scenario sc = scenario(kS, {});
  sc.sources = equispaced_sources(20, -0.45, 0.45);
  sc.trials = 10;
  sc.seed = 3;
  const std::vector<double> grid = {-10.0, 30.0};
  SweepOptions o;
  o.threads = 4;
  const auto r = run_sweep(sc, SweepAxis::snr_db, grid, o);
  REQUIRE(r.rows[0].rmse);
  REQUIRE(r.rows[1].rmse);
  CHECK(*r.rows[1].rmse < *r.rows[0].rmse);
}
