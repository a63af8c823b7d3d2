// Banded mutual-coupling model and coupling leakage.

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fractarray/core.hpp"

namespace fractarray {

enum class PhaseRule {
  fixed_progression,  // arg c_i = arg c_1 - (i - 1) pi / 8
  random_uniform,     // arg c_i ~ U[-pi, pi), drawn from `seed`
};

/// Coefficients c_0 = 1, |c_i| = |c_1| / i for 1 <= i <= q, zero beyond q.
struct CouplingModel {
  int q = 15;
  double c1_magnitude = 0.3;
  double c1_phase = std::numbers::pi / 3.0;
  PhaseRule phase_rule = PhaseRule::fixed_progression;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument for q < 0 or |c_1| outside [0, 1).
  void validate() const;

  /// c_0..c_q.
  std::vector<std::complex<double>> coefficients() const;
};

struct CouplingMatrix {
  SensorArray source;
  Eigen::MatrixXcd entries;
};

/// entry(i, j) = c_{|g_i - g_j|} for separations up to q, zero otherwise.
CouplingMatrix coupling_matrix(const SensorArray& array, const CouplingModel& model);

/// ||C - diag(C)||_F / ||C||_F.
double coupling_leakage(const CouplingMatrix& matrix);

/// Same quantity from the weight function, without forming C.
double coupling_leakage(const SensorArray& array, const CouplingModel& model);

/// Leakage from positive-lag pair counts: `positive_weights[m]` is the number
/// of unordered pairs at separation m (index 0 ignored), `sensors` the array size.
double leakage_from_weights(std::span<const std::int64_t> positive_weights, std::size_t sensors,
                            const CouplingModel& model);

struct LeakagePreservation {
  bool hypotheses_hold = false;    // q < max(G) and q + max(G) < |U|
  double generator_leakage = 0.0;
  double fractal_leakage = 0.0;
  bool kronecker_identity = false;  // C_r == I (x) C_G entry-wise
  bool holds = false;               // hypotheses imply equality within 1e-12
};

LeakagePreservation verify_leakage_preservation(const SensorArray& generator,
                                                const CouplingModel& model, int order);

}  // namespace fractarray
