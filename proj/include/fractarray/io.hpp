// Array literals, reports and CSV output.

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "fractarray/analysis.hpp"
#include "fractarray/core.hpp"
#include "fractarray/doa.hpp"

namespace fractarray {

struct NamedArray {
  std::string name;
  SensorArray array;
};

/// {"name": string, "elements": [int, ...]}; elements are sorted and shifted
/// to start at 0. Throws std::invalid_argument on malformed input.
NamedArray parse_array_json(const nlohmann::json& j);
NamedArray parse_array_text(const std::string& text);
NamedArray load_array_file(const std::string& path);

nlohmann::json array_to_json(const std::string& name, const SensorArray& array);

/// "3/11"
std::string format_fraction(const Fraction& f);
/// Fixed-point with `digits` decimals.
std::string format_fixed(double value, int digits = 4);

/// Header: omega,value. Values are divided by `scale` (pass N^2 = B(0) to normalize).
void write_beampattern_csv(std::ostream& os, const Beampattern& bp, double scale = 1.0);

/// Header: axis_value,rmse,success_count,trial_count. Missing RMSE is an empty field.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace fractarray
