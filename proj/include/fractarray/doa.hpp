// Coarray MUSIC direction-of-arrival evaluation.
//
// Directions are normalized: theta_bar = sin(theta) / 2 in [-0.5, 0.5], so the
// steering vector entry for the sensor at position n is exp(j 2 pi theta_bar n).

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fractarray/core.hpp"
#include "fractarray/coupling.hpp"

namespace fractarray {

inline constexpr std::size_t kDefaultMusicGrid = std::size_t{1} << 14;

struct Source {
  double direction = 0.0;  // normalized DOA
  double power = 1.0;
};

/// `count` unit-power sources evenly spaced over [lo, hi] (both ends included;
/// a single source sits at the midpoint).
std::vector<Source> equispaced_sources(std::size_t count, double lo, double hi);

struct Scenario {
  SensorArray array{std::vector<Position>{0}};
  std::vector<Source> sources;
  std::size_t snapshots = 1000;
  double snr_db = 0.0;  // unit source power over noise power
  std::optional<CouplingModel> coupling;
  double failure_probability = 0.0;
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  std::size_t grid_size = kDefaultMusicGrid;

  double noise_power() const;
  /// Throws std::invalid_argument on an invalid configuration.
  void validate() const;
};

/// Snapshots of the sensors that survived the trial's failure draw.
struct SnapshotBlock {
  SensorArray array;      // surviving sensors, normalized
  Eigen::MatrixXcd data;  // sensors x snapshots
};

/// One trial's data: failures, coupling phases (random rule only), Gaussian
/// source amplitudes and noise. nullopt when every sensor failed.
std::optional<SnapshotBlock> synthesize(const Scenario& scenario, std::uint64_t trial_seed);

/// Averaged lag statistics over the central ULA [-m, m] of `array`'s coarray.
struct VirtualUla {
  Lag halfwidth = 0;
  std::vector<std::complex<double>> samples;  // lag -m .. m

  std::complex<double> at(Lag lag) const {
    return samples[static_cast<std::size_t>(lag + halfwidth)];
  }
};

Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& snapshots);

/// Sample covariance, duplicate lags averaged, restricted to the central ULA.
VirtualUla coarray_statistics(const Eigen::MatrixXcd& snapshots, const SensorArray& array);

/// (m+1) x (m+1) spatially smoothed covariance: mean of the outer products of
/// the m+1 shifted subarrays of the virtual ULA.
Eigen::MatrixXcd smoothed_covariance(const VirtualUla& ula);

/// True when the smoothed covariance leaves a noise subspace for `sources`.
bool music_identifiable(Lag halfwidth, std::size_t sources);

/// Pseudospectrum 1 / ||E_n^H a(theta)||^2 on `grid` points theta_g = -0.5 + g / grid.
std::vector<double> music_pseudospectrum(const Eigen::MatrixXcd& noise_subspace, std::size_t grid);

/// Estimated directions, ascending; nullopt when fewer than `sources` local
/// maxima exist. Throws std::invalid_argument if not identifiable.
std::optional<std::vector<double>> coarray_music(const VirtualUla& ula, std::size_t sources,
                                                 std::size_t grid = kDefaultMusicGrid);

/// sqrt(mean squared error) after pairing both lists in ascending order.
double rmse(std::span<const double> truth, std::span<const double> estimate);

struct TrialOutcome {
  bool success = false;
  double rmse = 0.0;
  std::size_t surviving_sensors = 0;
  std::vector<double> estimates;
};

TrialOutcome run_trial(const Scenario& scenario, std::uint64_t trial_seed);

enum class SweepAxis { coupling_c1_mag, failure_probability, snr_db };

std::string axis_name(SweepAxis axis);
/// Accepts "coupling", "failure", "snr".
SweepAxis parse_axis(std::string_view name);

/// Scenario with the axis parameter set to `value`. The coupling axis switches
/// to random phases, redrawn every trial.
Scenario apply_axis(const Scenario& base, SweepAxis axis, double value);

/// Deterministic per-trial seed from (master seed, axis value, trial index).
std::uint64_t trial_seed(std::uint64_t seed, double axis_value, std::size_t trial);

struct SweepRow {
  double value = 0.0;
  std::optional<double> rmse;  // absent when no trial succeeded
  std::size_t success_count = 0;
  std::size_t trial_count = 0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::snr_db;
  std::vector<SweepRow> rows;
};

/// Mean of the per-trial RMSE over successful trials.
SweepRow aggregate(double value, std::span<const TrialOutcome> outcomes);

struct SweepOptions {
  unsigned threads = 1;
  /// Called once per trial in (grid index, trial index) order after each grid point.
  std::function<void(double value, std::size_t trial, const TrialOutcome&)> on_trial;
};

SweepResult run_sweep(const Scenario& base, SweepAxis axis, std::span<const double> grid,
                      const SweepOptions& options = {});

}  // namespace fractarray
