// Exhaustive generator design: the smallest arrays within an aperture bound
// that satisfy symmetry, hole-free coarray, large coarray, fragility and
// coupling-leakage requirements.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fractarray/analysis.hpp"
#include "fractarray/core.hpp"
#include "fractarray/coupling.hpp"

namespace fractarray {

/// Apertures above this need SearchOptions::force.
inline constexpr std::int64_t kSearchApertureGuard = 24;
/// Candidates are bitmasks; this is the hard ceiling.
inline constexpr std::int64_t kSearchApertureCeiling = 62;

struct DesignConstraints {
  bool require_symmetric = false;         // R1
  bool require_hole_free = false;         // R2
  bool require_large_coarray = false;     // R3: |D| >= 2 * max_aperture + 1
  std::optional<Fraction> max_fragility;  // R4
  std::optional<double> max_leakage;      // R5
  std::int64_t max_aperture = 20;         // R6: max(T) <= max_aperture
  CouplingModel coupling;

  /// Every requirement active: F <= 3/10, leakage <= 1/3, default coupling.
  static DesignConstraints all_requirements(std::int64_t max_aperture);

  void validate() const;
};

struct FeasibilityReport {
  bool symmetric = false;
  bool hole_free = false;
  std::size_t dof = 0;
  Fraction fragility{1};
  double leakage = 0.0;
  Position aperture = 0;

  bool symmetric_ok = true;
  bool hole_free_ok = true;
  bool large_coarray_ok = true;
  bool fragility_ok = true;
  bool leakage_ok = true;
  bool aperture_ok = true;

  bool feasible() const {
    return symmetric_ok && hole_free_ok && large_coarray_ok && fragility_ok && leakage_ok &&
           aperture_ok;
  }
};

FeasibilityReport check_constraints(const SensorArray& array, const DesignConstraints& constraints);

struct SearchOptions {
  unsigned threads = 1;
  bool force = false;          // lift the aperture guard
  bool all_solutions = true;   // otherwise keep only the lexicographically first
  bool prune = true;           // disable to enumerate every subset (testing)
};

struct SearchResult {
  std::vector<SensorArray> optimum;  // lexicographic order
  std::size_t optimum_size = 0;      // 0 when infeasible
  std::uint64_t explored = 0;        // candidates fully evaluated
  std::uint64_t pruned = 0;          // candidates skipped by pruning rules
  std::chrono::duration<double> wall_time{0};
  std::string explanation;           // set when infeasible
};

class ApertureGuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ascending cardinality, lexicographic within a cardinality; returns every
/// feasible array of the first cardinality that has one.
SearchResult solve_p1(const DesignConstraints& constraints, const SearchOptions& options = {});

}  // namespace fractarray
