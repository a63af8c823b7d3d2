#include "fractarray/coupling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fractarray/fractal.hpp"

namespace fractarray {

namespace {

constexpr double kLeakageTolerance = 1e-12;

}  // namespace

void CouplingModel::validate() const {
  if (q < 0) throw std::invalid_argument("coupling limit q must be non-negative");
  if (!(c1_magnitude >= 0.0 && c1_magnitude < 1.0)) {
    throw std::invalid_argument("|c_1| must lie in [0, 1)");
  }
  if (!std::isfinite(c1_phase)) throw std::invalid_argument("c_1 phase must be finite");
}

std::vector<std::complex<double>> CouplingModel::coefficients() const {
  validate();
  std::vector<std::complex<double>> c(static_cast<std::size_t>(q) + 1);
  c[0] = 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  for (int i = 1; i <= q; ++i) {
    const double mag = c1_magnitude / i;
    const double arg = phase_rule == PhaseRule::fixed_progression
                           ? c1_phase - (i - 1) * std::numbers::pi / 8.0
                           : phase(rng);
    c[static_cast<std::size_t>(i)] = std::polar(mag, arg);
  }
  return c;
}

CouplingMatrix coupling_matrix(const SensorArray& array, const CouplingModel& model) {
  const auto c = model.coefficients();
  const auto n = static_cast<Eigen::Index>(array.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Position sep = std::abs(array[static_cast<std::size_t>(i)] -
                                    array[static_cast<std::size_t>(j)]);
      if (sep <= model.q) m(i, j) = c[static_cast<std::size_t>(sep)];
    }
  }
  return {array, std::move(m)};
}

double coupling_leakage(const CouplingMatrix& matrix) {
  const auto& c = matrix.entries;
  const double total = c.squaredNorm();
  const double diag = c.diagonal().squaredNorm();
  if (total == 0.0) return 0.0;
  return std::sqrt(std::max(0.0, total - diag) / total);
}

double leakage_from_weights(std::span<const std::int64_t> positive_weights, std::size_t sensors,
                            const CouplingModel& model) {
  model.validate();
  double off = 0.0;
  const std::size_t top = std::min(positive_weights.size(), static_cast<std::size_t>(model.q) + 1);
  for (std::size_t m = 1; m < top; ++m) {
    const double mag = model.c1_magnitude / static_cast<double>(m);
    off += 2.0 * static_cast<double>(positive_weights[m]) * mag * mag;
  }
  const double total = off + static_cast<double>(sensors);
  return std::sqrt(off / total);
}

double coupling_leakage(const SensorArray& array, const CouplingModel& model) {
  model.validate();
  const CoarrayProfile profile(array);
  const auto limit = std::min<Position>(model.q, array.aperture());
  std::vector<std::int64_t> w(static_cast<std::size_t>(limit) + 1, 0);
  for (Lag m = 1; m <= limit; ++m) w[static_cast<std::size_t>(m)] = profile.weight(m);
  return leakage_from_weights(w, array.size(), model);
}

LeakagePreservation verify_leakage_preservation(const SensorArray& generator,
                                                const CouplingModel& model, int order) {
  LeakagePreservation out;
  const Position top = generator.aperture();
  const std::int64_t u = translation_factor(generator);
  out.hypotheses_hold = model.q < top && model.q + top < u;

  const auto cg = coupling_matrix(generator, model);
  const SensorArray fractal = expand(generator, order);
  const auto cr = coupling_matrix(fractal, model);
  out.generator_leakage = coupling_leakage(cg);
  out.fractal_leakage = coupling_leakage(cr);

  const auto n = cg.entries.rows();
  const auto big = cr.entries.rows();
  out.kronecker_identity = big % n == 0;
  for (Eigen::Index i = 0; i < big && out.kronecker_identity; ++i) {
    for (Eigen::Index j = 0; j < big; ++j) {
      const bool same_block = i / n == j / n;
      const std::complex<double> expected =
          same_block ? cg.entries(i % n, j % n) : std::complex<double>{0.0, 0.0};
      if (cr.entries(i, j) != expected) {
        out.kronecker_identity = false;
        break;
      }
    }
  }

  const bool equal = std::abs(out.fractal_leakage - out.generator_leakage) <= kLeakageTolerance;
  out.holds = !out.hypotheses_hold || equal;
  return out;
}

}  // namespace fractarray
