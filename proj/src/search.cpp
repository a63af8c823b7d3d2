#include "fractarray/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>

#include "fractarray/detail/essential.hpp"

namespace fractarray {

namespace {

using Mask = std::uint64_t;

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// Calls f(mask) for every `choose`-subset of the low `bits` bits (Gosper's hack).
template <class F>
void for_each_combination(int bits, int choose, F&& f) {
  if (choose < 0 || choose > bits) return;
  if (choose == 0) {
    f(Mask{0});
    return;
  }
  const Mask limit = Mask{1} << bits;
  Mask c = (Mask{1} << choose) - 1;
  while (c < limit) {
    f(c);
    const Mask lowest = c & (~c + 1);
    const Mask ripple = c + lowest;
    c = (((ripple ^ c) >> 2) / lowest) | ripple;
  }
}

SensorArray to_array(Mask b) {
  std::vector<Position> pos;
  while (b) {
    pos.push_back(std::countr_zero(b));
    b &= b - 1;
  }
  return SensorArray(std::move(pos));
}

class Evaluator {
 public:
  explicit Evaluator(const DesignConstraints& c) : c_(c) {}

  bool feasible(Mask b, int k, int m) {
    pos_.clear();
    for (Mask t = b; t; t &= t - 1) pos_.push_back(std::countr_zero(t));

    if (c_.require_symmetric) {
      for (Position p : pos_) {
        if (!((b >> (m - p)) & 1)) return false;
      }
    }
    if (c_.require_hole_free || c_.require_large_coarray) {
      Mask d = 0;
      for (Position p : pos_) d |= b >> p;
      if (c_.require_hole_free && d != (Mask{1} << (m + 1)) - 1) return false;
      if (c_.require_large_coarray &&
          2 * std::popcount(d) - 1 < 2 * c_.max_aperture + 1) {
        return false;
      }
    }
    if (!c_.max_fragility && !c_.max_leakage) return true;

    counts_.assign(static_cast<std::size_t>(m) + 1, 0);
    for (std::size_t j = 1; j < pos_.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) ++counts_[static_cast<std::size_t>(pos_[j] - pos_[i])];
    }
    if (c_.max_fragility) {
      auto weight = [&](Lag lag) -> std::int64_t {
        const Lag a = lag < 0 ? -lag : lag;
        if (a > m) return 0;
        return a == 0 ? k : counts_[static_cast<std::size_t>(a)];
      };
      auto contains = [&](Position p) { return p >= 0 && p <= m && ((b >> p) & 1); };
      const auto flags = detail::essential_flags(pos_, weight, contains);
      const auto essential = static_cast<std::int64_t>(std::count(flags.begin(), flags.end(), true));
      if (Fraction(essential, k) > *c_.max_fragility) return false;
    }
    if (c_.max_leakage) {
      const std::size_t top = std::min<std::size_t>(counts_.size(), static_cast<std::size_t>(c_.coupling.q) + 1);
      const double leak = leakage_from_weights(std::span(counts_).first(top), pos_.size(), c_.coupling);
      if (leak > *c_.max_leakage) return false;
    }
    return true;
  }

 private:
  const DesignConstraints& c_;
  std::vector<Position> pos_;
  std::vector<std::int64_t> counts_;
};

struct Shard {
  int m = 0;    // largest sensor position
  int low = 0;  // smallest interior sensor, 0 when there is none
  bool symmetric = false;
};

struct ShardOutcome {
  std::vector<Mask> feasible;
  std::uint64_t explored = 0;
};

ShardOutcome run_shard(const Shard& s, int k, const DesignConstraints& c) {
  Evaluator eval(c);
  ShardOutcome out;
  const Mask ends = Mask{1} | (Mask{1} << s.m);
  const int interior = k - 2;
  auto visit = [&](Mask b) {
    ++out.explored;
    if (eval.feasible(b, k, s.m)) out.feasible.push_back(b);
  };

  if (s.symmetric) {
    // Mirror pairs (x, m - x) for 1 <= x < m/2, plus the midpoint when m is even.
    const int half = (s.m - 1) / 2;
    for (int mid = 0; mid <= (s.m % 2 == 0 ? 1 : 0); ++mid) {
      if ((interior - mid) % 2 != 0) continue;
      const int pairs = (interior - mid) / 2;
      for_each_combination(half, pairs, [&](Mask h) {
        Mask b = ends;
        if (mid) b |= Mask{1} << (s.m / 2);
        for (Mask t = h; t; t &= t - 1) {
          const int x = std::countr_zero(t) + 1;
          b |= (Mask{1} << x) | (Mask{1} << (s.m - x));
        }
        visit(b);
      });
    }
    return out;
  }

  if (interior == 0) {
    visit(ends);
    return out;
  }
  const int rest_bits = s.m - 1 - s.low;
  for_each_combination(rest_bits, interior - 1, [&](Mask r) {
    visit(ends | (Mask{1} << s.low) | (r << (s.low + 1)));
  });
  return out;
}

}  // namespace

DesignConstraints DesignConstraints::all_requirements(std::int64_t max_aperture) {
  DesignConstraints c;
  c.require_symmetric = true;
  c.require_hole_free = true;
  c.require_large_coarray = true;
  c.max_fragility = Fraction(3, 10);
  c.max_leakage = 1.0 / 3.0;
  c.max_aperture = max_aperture;
  return c;
}

void DesignConstraints::validate() const {
  if (max_aperture < 1) throw std::invalid_argument("max aperture must be at least 1");
  if (max_fragility && (*max_fragility <= 0 || *max_fragility > 1)) {
    throw std::invalid_argument("max fragility must lie in (0, 1]");
  }
  if (max_leakage && !(*max_leakage > 0.0 && *max_leakage <= 1.0)) {
    throw std::invalid_argument("max leakage must lie in (0, 1]");
  }
  coupling.validate();
}

FeasibilityReport check_constraints(const SensorArray& array, const DesignConstraints& c) {
  FeasibilityReport r;
  const CoarrayProfile profile(array);
  r.symmetric = is_symmetric(array);
  r.hole_free = profile.hole_free();
  r.dof = profile.dof();
  r.fragility = fragility(array);
  r.leakage = coupling_leakage(array, c.coupling);
  r.aperture = array.aperture();

  r.symmetric_ok = !c.require_symmetric || r.symmetric;
  r.hole_free_ok = !c.require_hole_free || r.hole_free;
  r.large_coarray_ok =
      !c.require_large_coarray || static_cast<std::int64_t>(r.dof) >= 2 * c.max_aperture + 1;
  r.fragility_ok = !c.max_fragility || r.fragility <= *c.max_fragility;
  r.leakage_ok = !c.max_leakage || r.leakage <= *c.max_leakage;
  r.aperture_ok = r.aperture <= c.max_aperture;
  return r;
}

SearchResult solve_p1(const DesignConstraints& c, const SearchOptions& options) {
  c.validate();
  if (c.max_aperture > kSearchApertureCeiling) {
    throw std::invalid_argument("max aperture exceeds the exhaustive search ceiling of " +
                                std::to_string(kSearchApertureCeiling));
  }
  if (c.max_aperture > kSearchApertureGuard && !options.force) {
    throw ApertureGuardError("max aperture " + std::to_string(c.max_aperture) +
                             " exceeds the exhaustive search guard of " +
                             std::to_string(kSearchApertureGuard) + "; set force to override");
  }

  const auto start = std::chrono::steady_clock::now();
  const int a = static_cast<int>(c.max_aperture);
  const unsigned threads = std::max(1u, options.threads);
  SearchResult result;

  for (int k = 2; k <= a + 1 && result.optimum.empty(); ++k) {
    std::vector<Shard> shards;
    for (int m = k - 1; m <= a; ++m) {
      const std::uint64_t all = binomial(m - 1, k - 2);
      if (options.prune) {
        const std::int64_t max_dof = std::min<std::int64_t>(2 * m + 1, std::int64_t{k} * (k - 1) + 1);
        const bool short_coarray = c.require_large_coarray && max_dof < 2 * c.max_aperture + 1;
        const bool too_few = c.require_hole_free && std::int64_t{k} * (k - 1) + 1 < 2 * m + 1;
        if (short_coarray || too_few) {
          result.pruned += all;
          continue;
        }
        if (c.require_symmetric) {
          shards.push_back({m, 0, true});
          continue;
        }
      }
      if (k == 2) {
        shards.push_back({m, 0, false});
      } else {
        for (int low = 1; low <= m - 1; ++low) shards.push_back({m, low, false});
      }
    }

    std::vector<ShardOutcome> outcomes(shards.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < shards.size(); i = next++) {
        outcomes[i] = run_shard(shards[i], k, c);
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::vector<SensorArray> found;
    for (std::size_t i = 0; i < shards.size(); ++i) {
      result.explored += outcomes[i].explored;
      if (options.prune && shards[i].symmetric) {
        result.pruned += binomial(shards[i].m - 1, k - 2) - outcomes[i].explored;
      }
      for (Mask b : outcomes[i].feasible) found.push_back(to_array(b));
    }
    std::sort(found.begin(), found.end());
    if (!found.empty()) {
      result.optimum_size = static_cast<std::size_t>(k);
      if (!options.all_solutions) found.erase(found.begin() + 1, found.end());
      result.optimum = std::move(found);
    }
  }

  if (result.optimum.empty()) {
    result.explanation = "no array with aperture <= " + std::to_string(c.max_aperture) +
                         " satisfies the active constraints";
  }
  result.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace fractarray
