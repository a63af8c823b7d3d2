#include "fractarray/doa.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

namespace fractarray {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::complex<double> steering(double direction, Position n) {
  return std::polar(1.0, kTwoPi * direction * static_cast<double>(n));
}

}  // namespace

std::vector<Source> equispaced_sources(std::size_t count, double lo, double hi) {
  if (count == 0) throw std::invalid_argument("need at least one source");
  std::vector<Source> out(count);
  if (count == 1) {
    out[0].direction = 0.5 * (lo + hi);
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i].direction = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

double Scenario::noise_power() const { return std::pow(10.0, -snr_db / 10.0); }

void Scenario::validate() const {
  if (sources.empty()) throw std::invalid_argument("scenario needs at least one source");
  std::vector<double> dirs;
  for (const auto& s : sources) {
    if (!(s.direction >= -0.5 && s.direction <= 0.5)) {
      throw std::invalid_argument("normalized DOA must lie in [-0.5, 0.5]");
    }
    if (!(s.power > 0.0)) throw std::invalid_argument("source power must be positive");
    dirs.push_back(s.direction);
  }
  std::sort(dirs.begin(), dirs.end());
  if (std::adjacent_find(dirs.begin(), dirs.end()) != dirs.end()) {
    throw std::invalid_argument("source directions must be distinct");
  }
  if (snapshots == 0) throw std::invalid_argument("snapshots must be positive");
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SNR must be finite");
  if (!(failure_probability >= 0.0 && failure_probability < 1.0)) {
    throw std::invalid_argument("failure probability must lie in [0, 1)");
  }
  if (grid_size < 3) throw std::invalid_argument("MUSIC grid needs at least 3 points");
  if (coupling) coupling->validate();
}

std::optional<SnapshotBlock> synthesize(const Scenario& sc, std::uint64_t trial_seed) {
  std::mt19937_64 rng(trial_seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t n = sc.array.size();
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < n; ++i) {
    const bool failed = uniform(rng) < sc.failure_probability;
    if (!failed) alive.push_back(i);
  }

  std::optional<Eigen::MatrixXcd> coupling;
  if (sc.coupling) {
    CouplingModel model = *sc.coupling;
    if (model.phase_rule == PhaseRule::random_uniform) model.seed = rng();
    coupling = coupling_matrix(sc.array, model).entries;
  }

  const auto rows = static_cast<Eigen::Index>(n);
  const auto k = static_cast<Eigen::Index>(sc.sources.size());
  const auto t = static_cast<Eigen::Index>(sc.snapshots);

  Eigen::MatrixXcd a(rows, k);
  for (Eigen::Index s = 0; s < k; ++s) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      a(i, s) = steering(sc.sources[static_cast<std::size_t>(s)].direction,
                         sc.array[static_cast<std::size_t>(i)]);
    }
  }

  // Circular complex Gaussian amplitudes with variance p_i, drawn per snapshot.
  Eigen::MatrixXcd amp(k, t);
  for (Eigen::Index c = 0; c < t; ++c) {
    for (Eigen::Index s = 0; s < k; ++s) {
      const double sd = std::sqrt(sc.sources[static_cast<std::size_t>(s)].power / 2.0);
      const double re = normal(rng);
      const double im = normal(rng);
      amp(s, c) = {sd * re, sd * im};
    }
  }
  Eigen::MatrixXcd x = a * amp;
  if (coupling) x = (*coupling) * x;

  const double noise_sd = std::sqrt(sc.noise_power() / 2.0);
  for (Eigen::Index c = 0; c < t; ++c) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i, c) += std::complex<double>{noise_sd * re, noise_sd * im};
    }
  }

  if (alive.empty()) return std::nullopt;

  std::vector<Position> positions;
  Eigen::MatrixXcd kept(static_cast<Eigen::Index>(alive.size()), t);
  for (std::size_t r = 0; r < alive.size(); ++r) {
    positions.push_back(sc.array[alive[r]]);
    kept.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(alive[r]));
  }
  return SnapshotBlock{SensorArray::normalized(std::move(positions)), std::move(kept)};
}

Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& snapshots) {
  if (snapshots.cols() == 0) throw std::invalid_argument("need at least one snapshot");
  return snapshots * snapshots.adjoint() / static_cast<double>(snapshots.cols());
}

VirtualUla coarray_statistics(const Eigen::MatrixXcd& snapshots, const SensorArray& array) {
  if (static_cast<std::size_t>(snapshots.rows()) != array.size()) {
    throw std::invalid_argument("snapshot rows must match the array size");
  }
  const Eigen::MatrixXcd r = sample_covariance(snapshots);
  const CoarrayProfile profile(array);
  const Lag m = profile.central_ula_halfwidth();

  VirtualUla out;
  out.halfwidth = m;
  out.samples.assign(static_cast<std::size_t>(2 * m + 1), {0.0, 0.0});
  std::vector<std::int64_t> counts(out.samples.size(), 0);
  const auto n = static_cast<Eigen::Index>(array.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Lag lag = array[static_cast<std::size_t>(i)] - array[static_cast<std::size_t>(j)];
      if (lag < -m || lag > m) continue;
      const auto idx = static_cast<std::size_t>(lag + m);
      out.samples[idx] += r(i, j);
      ++counts[idx];
    }
  }
  for (std::size_t i = 0; i < counts.size(); ++i) out.samples[i] /= static_cast<double>(counts[i]);
  return out;
}

Eigen::MatrixXcd smoothed_covariance(const VirtualUla& ula) {
  const auto size = static_cast<Eigen::Index>(ula.halfwidth + 1);
  // Column i is the subarray shifted by i: Z(k, i) = v(k - i).
  Eigen::MatrixXcd z(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index k = 0; k < size; ++k) z(k, i) = ula.at(k - i);
  }
  return z * z.adjoint() / static_cast<double>(size);
}

bool music_identifiable(Lag halfwidth, std::size_t sources) {
  return static_cast<std::size_t>(halfwidth) + 1 > sources;
}

std::vector<double> music_pseudospectrum(const Eigen::MatrixXcd& noise_subspace, std::size_t grid) {
  const Eigen::MatrixXcd proj = noise_subspace * noise_subspace.adjoint();
  const auto size = proj.rows();

  // a^H P a = sum_d c_d exp(j 2 pi theta d), c_d = sum_{l - k = d} P(k, l).
  std::vector<std::complex<double>> c(static_cast<std::size_t>(size), {0.0, 0.0});
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index l = k; l < size; ++l) c[static_cast<std::size_t>(l - k)] += proj(k, l);
  }

  std::vector<std::complex<double>> roots(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    roots[g] = std::polar(1.0, kTwoPi * static_cast<double>(g) / static_cast<double>(grid));
  }

  std::vector<double> spectrum(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    double denom = c[0].real();
    for (std::size_t d = 1; d < c.size(); ++d) {
      // theta_g = -0.5 + g / grid, so exp(j 2 pi theta_g d) = (-1)^d root^(g d).
      const std::complex<double> w = roots[(g * d) % grid] * (d % 2 ? -1.0 : 1.0);
      denom += 2.0 * (c[d] * w).real();
    }
    spectrum[g] = 1.0 / std::max(denom, 1e-300);
  }
  return spectrum;
}

std::optional<std::vector<double>> coarray_music(const VirtualUla& ula, std::size_t sources,
                                                 std::size_t grid) {
  if (sources == 0) throw std::invalid_argument("need at least one source");
  if (!music_identifiable(ula.halfwidth, sources)) {
    throw std::invalid_argument("central ULA of half-width " + std::to_string(ula.halfwidth) +
                                " cannot resolve " + std::to_string(sources) + " sources");
  }
  if (grid < 3) throw std::invalid_argument("MUSIC grid needs at least 3 points");

  const Eigen::MatrixXcd rss = smoothed_covariance(ula);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rss);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const auto noise_dim = rss.rows() - static_cast<Eigen::Index>(sources);
  const Eigen::MatrixXcd noise = eig.eigenvectors().leftCols(noise_dim);
  const auto p = music_pseudospectrum(noise, grid);

  std::vector<std::size_t> peaks;
  for (std::size_t g = 0; g < grid; ++g) {
    const double left = p[(g + grid - 1) % grid];
    const double right = p[(g + 1) % grid];
    if (p[g] > left && p[g] >= right) peaks.push_back(g);
  }
  if (peaks.size() < sources) return std::nullopt;
  std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(sources), peaks.end(),
                    [&](std::size_t a, std::size_t b) { return p[a] > p[b] || (p[a] == p[b] && a < b); });

  std::vector<double> est;
  for (std::size_t i = 0; i < sources; ++i) {
    est.push_back(-0.5 + static_cast<double>(peaks[i]) / static_cast<double>(grid));
  }
  std::sort(est.begin(), est.end());
  return est;
}

double rmse(std::span<const double> truth, std::span<const double> estimate) {
  if (truth.size() != estimate.size() || truth.empty()) {
    throw std::invalid_argument("rmse needs two equally sized, non-empty lists");
  }
  std::vector<double> a(truth.begin(), truth.end());
  std::vector<double> b(estimate.begin(), estimate.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

TrialOutcome run_trial(const Scenario& sc, std::uint64_t seed) {
  TrialOutcome out;
  const auto block = synthesize(sc, seed);
  if (!block) return out;
  out.surviving_sensors = block->array.size();

  const VirtualUla ula = coarray_statistics(block->data, block->array);
  if (!music_identifiable(ula.halfwidth, sc.sources.size())) return out;
  const auto est = coarray_music(ula, sc.sources.size(), sc.grid_size);
  if (!est) return out;

  std::vector<double> truth;
  for (const auto& s : sc.sources) truth.push_back(s.direction);
  out.success = true;
  out.rmse = rmse(truth, *est);
  out.estimates = *est;
  return out;
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::coupling_c1_mag: return "coupling";
    case SweepAxis::failure_probability: return "failure";
    case SweepAxis::snr_db: return "snr";
  }
  return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "coupling") return SweepAxis::coupling_c1_mag;
  if (name == "failure") return SweepAxis::failure_probability;
  if (name == "snr") return SweepAxis::snr_db;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

Scenario apply_axis(const Scenario& base, SweepAxis axis, double value) {
  Scenario sc = base;
  switch (axis) {
    case SweepAxis::coupling_c1_mag: {
      CouplingModel model = base.coupling.value_or(CouplingModel{});
      model.c1_magnitude = value;
      model.phase_rule = PhaseRule::random_uniform;
      sc.coupling = model;
      break;
    }
    case SweepAxis::failure_probability: sc.failure_probability = value; break;
    case SweepAxis::snr_db: sc.snr_db = value; break;
  }
  return sc;
}

std::uint64_t trial_seed(std::uint64_t seed, double axis_value, std::size_t trial) {
  if (axis_value == 0.0) axis_value = 0.0;  // fold -0.0
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(axis_value));
  return splitmix64(h ^ static_cast<std::uint64_t>(trial));
}

SweepRow aggregate(double value, std::span<const TrialOutcome> outcomes) {
  SweepRow row;
  row.value = value;
  row.trial_count = outcomes.size();
  double acc = 0.0;
  for (const auto& o : outcomes) {
    if (!o.success) continue;
    ++row.success_count;
    acc += o.rmse;
  }
  if (row.success_count > 0) row.rmse = acc / static_cast<double>(row.success_count);
  return row;
}

SweepResult run_sweep(const Scenario& base, SweepAxis axis, std::span<const double> grid,
                      const SweepOptions& options) {
  if (grid.empty()) throw std::invalid_argument("sweep grid must not be empty");
  SweepResult result;
  result.axis = axis;
  const unsigned threads = std::max(1u, options.threads);

  for (double value : grid) {
    const Scenario sc = apply_axis(base, axis, value);
    sc.validate();
    std::vector<TrialOutcome> outcomes(sc.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < outcomes.size(); i = next++) {
        outcomes[i] = run_trial(sc, trial_seed(sc.seed, value, i));
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (options.on_trial) {
      for (std::size_t i = 0; i < outcomes.size(); ++i) options.on_trial(value, i, outcomes[i]);
    }
    result.rows.push_back(aggregate(value, outcomes));
  }
  return result;
}

}  // namespace fractarray
