#include "fractarray/baselines.hpp"

#include <array>
#include <numeric>
#include <stdexcept>

namespace fractarray {

namespace {

// Literature data. Minimum-redundancy arrays with a hole-free coarray
// (largest aperture for N sensors, lexicographically first of each size)
// and minimum-hole arrays (optimal Golomb rulers).
const std::array<std::vector<Position>, 11> kMra = {{
    {},
    {0},
    {0, 1},
    {0, 1, 3},
    {0, 1, 4, 6},
    {0, 1, 2, 6, 9},
    {0, 1, 2, 6, 10, 13},
    {0, 1, 2, 3, 8, 13, 17},
    {0, 1, 2, 11, 15, 18, 21, 23},
    {0, 1, 2, 14, 18, 21, 24, 27, 29},
    {0, 1, 3, 6, 13, 20, 27, 31, 35, 36},
}};

const std::array<std::vector<Position>, 11> kMha = {{
    {},
    {0},
    {0, 1},
    {0, 1, 3},
    {0, 1, 4, 6},
    {0, 1, 4, 9, 11},
    {0, 1, 4, 10, 12, 17},
    {0, 1, 4, 10, 18, 23, 25},
    {0, 1, 4, 9, 15, 22, 32, 34},
    {0, 1, 5, 12, 25, 27, 35, 41, 44},
    {0, 1, 6, 10, 23, 26, 34, 41, 53, 55},
}};

void expect_params(const BaselineSpec& spec, std::size_t count) {
  if (spec.params.size() != count) {
    throw std::invalid_argument(baseline_name(spec) + " expects " + std::to_string(count) +
                                " parameter(s)");
  }
  for (auto p : spec.params) {
    if (p <= 0) throw std::invalid_argument("baseline parameters must be positive");
  }
}

SensorArray from_table(const std::array<std::vector<Position>, 11>& table, std::int64_t n,
                       const char* what) {
  if (n < 1 || n > kMaxTabulatedSensors) {
    throw std::invalid_argument(std::string(what) + " table covers 1 <= N <= " +
                                std::to_string(kMaxTabulatedSensors));
  }
  return SensorArray(table[static_cast<std::size_t>(n)]);
}

}  // namespace

BaselineKind parse_baseline_kind(std::string_view name) {
  if (name == "ula") return BaselineKind::ula;
  if (name == "nested") return BaselineKind::nested;
  if (name == "coprime") return BaselineKind::coprime;
  if (name == "mra") return BaselineKind::mra;
  if (name == "mha") return BaselineKind::mha;
  throw std::invalid_argument("unknown baseline kind '" + std::string(name) + "'");
}

std::string baseline_name(const BaselineSpec& spec) {
  std::string base;
  switch (spec.kind) {
    case BaselineKind::ula: base = "ula"; break;
    case BaselineKind::nested: base = "nested"; break;
    case BaselineKind::coprime: base = "coprime"; break;
    case BaselineKind::mra: base = "mra"; break;
    case BaselineKind::mha: base = "mha"; break;
  }
  base += '(';
  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    if (i) base += ',';
    base += std::to_string(spec.params[i]);
  }
  return base + ')';
}

SensorArray build_baseline(const BaselineSpec& spec) {
  std::vector<Position> pos;
  switch (spec.kind) {
    case BaselineKind::ula: {
      expect_params(spec, 1);
      pos.resize(static_cast<std::size_t>(spec.params[0]));
      std::iota(pos.begin(), pos.end(), Position{0});
      return SensorArray(std::move(pos));
    }
    case BaselineKind::nested: {
      expect_params(spec, 2);
      const auto n1 = spec.params[0];
      const auto n2 = spec.params[1];
      for (Position i = 1; i <= n1; ++i) pos.push_back(i);
      for (Position i = 1; i <= n2; ++i) pos.push_back(i * (n1 + 1));
      return SensorArray::normalized(std::move(pos));
    }
    case BaselineKind::coprime: {
      expect_params(spec, 2);
      const auto m = spec.params[0];
      const auto n = spec.params[1];
      if (std::gcd(m, n) != 1) throw std::invalid_argument("coprime array needs gcd(M, N) = 1");
      if (m >= n) throw std::invalid_argument("coprime array needs M < N");
      for (Position i = 0; i < n; ++i) pos.push_back(m * i);
      for (Position i = 1; i < 2 * m; ++i) {
        const Position p = n * i;
        if (p % m != 0 || p / m >= n) pos.push_back(p);
      }
      return SensorArray::normalized(std::move(pos));
    }
    case BaselineKind::mra:
      expect_params(spec, 1);
      return from_table(kMra, spec.params[0], "MRA");
    case BaselineKind::mha:
      expect_params(spec, 1);
      return from_table(kMha, spec.params[0], "MHA");
  }
  throw std::invalid_argument("unknown baseline kind");
}

}  // namespace fractarray
