// Reference array families used for comparison.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fractarray/core.hpp"

namespace fractarray {

enum class BaselineKind { ula, nested, coprime, mra, mha };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::ula;
  std::vector<std::int64_t> params;  // N | N1, N2 | M, N | N | N

  static BaselineSpec ula(std::int64_t n) { return {BaselineKind::ula, {n}}; }
  static BaselineSpec nested(std::int64_t n1, std::int64_t n2) { return {BaselineKind::nested, {n1, n2}}; }
  static BaselineSpec coprime(std::int64_t m, std::int64_t n) { return {BaselineKind::coprime, {m, n}}; }
  static BaselineSpec mra(std::int64_t n) { return {BaselineKind::mra, {n}}; }
  static BaselineSpec mha(std::int64_t n) { return {BaselineKind::mha, {n}}; }
};

/// Throws std::invalid_argument for an unknown name.
BaselineKind parse_baseline_kind(std::string_view name);
std::string baseline_name(const BaselineSpec& spec);

/// ULA {0..N-1}; nested {1..N1} u {i(N1+1)}, shifted to 0; extended coprime
/// {Mn : n < N} u {Nm : m < 2M} with gcd(M, N) = 1 and M < N; MRA and MHA
/// from tables for N <= 10.
SensorArray build_baseline(const BaselineSpec& spec);

/// Largest N available in the MRA/MHA tables.
inline constexpr std::int64_t kMaxTabulatedSensors = 10;

}  // namespace fractarray
