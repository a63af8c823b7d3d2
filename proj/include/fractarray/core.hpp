// Integer-grid linear arrays and their difference coarrays.
//
// Sensor positions are integers in units of half a wavelength. Every array is
// normalized so that its leftmost sensor sits at 0.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fractarray {

using Position = std::int64_t;
using Lag = std::int64_t;

/// Weight function: lag -> number of ordered sensor pairs at that lag.
using WeightMap = std::map<Lag, std::int64_t>;

/// Non-empty, strictly increasing set of sensor positions starting at 0.
class SensorArray {
 public:
  /// Throws std::invalid_argument unless `positions` is already normalized.
  explicit SensorArray(std::vector<Position> positions);

  /// Sorts and shifts so the minimum is 0. Duplicates and empty input throw.
  static SensorArray normalized(std::vector<Position> positions);

  std::span<const Position> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  Position operator[](std::size_t i) const { return elements_[i]; }
  Position aperture() const { return elements_.back(); }
  bool contains(Position p) const;

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  /// Copy without the sensor at `p`, re-normalized. Throws if that would
  /// leave the array empty or `p` is not a sensor.
  SensorArray without(Position p) const;

  friend bool operator==(const SensorArray&, const SensorArray&) = default;
  friend auto operator<=>(const SensorArray& a, const SensorArray& b) {
    return a.elements_ <=> b.elements_;
  }

 private:
  std::vector<Position> elements_;
};

/// Difference set, weight function and central ULA of an array.
///
/// Lags are stored in full (negative and positive) and ascending; `weights()`
/// runs parallel to `differences()`.
class CoarrayProfile {
 public:
  explicit CoarrayProfile(const SensorArray& array);

  std::span<const Lag> differences() const { return lags_; }
  std::span<const std::int64_t> weights() const { return weights_; }

  /// Zero for lags outside the coarray.
  std::int64_t weight(Lag lag) const;
  bool contains(Lag lag) const { return weight(lag) > 0; }

  WeightMap weight_map() const;

  /// Largest m with [-m, m] contained in the coarray.
  Lag central_ula_halfwidth() const { return halfwidth_; }
  std::int64_t central_ula_size() const { return 2 * halfwidth_ + 1; }

  bool hole_free() const { return hole_free_; }
  std::size_t dof() const { return lags_.size(); }
  std::size_t sensor_count() const { return sensors_; }
  Lag max_lag() const { return lags_.back(); }

 private:
  std::vector<Lag> lags_;
  std::vector<std::int64_t> weights_;
  Lag halfwidth_ = 0;
  bool hole_free_ = true;
  std::size_t sensors_ = 0;
};

CoarrayProfile difference_coarray(const SensorArray& array);

/// Half-width m of the central ULA [-m, m].
Lag central_ula(const CoarrayProfile& profile);

/// Reflection n -> max(array) - n.
SensorArray reversed(const SensorArray& array);

bool is_symmetric(const SensorArray& array);

Position aperture(const SensorArray& array);

/// "[0 1 4 6]"
std::string to_string(const SensorArray& array);

}  // namespace fractarray
