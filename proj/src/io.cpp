#include "fractarray/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fractarray {

NamedArray parse_array_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("array literal must be a JSON object");
  if (!j.contains("elements") || !j["elements"].is_array()) {
    throw std::invalid_argument("array literal needs an \"elements\" list");
  }
  std::vector<Position> pos;
  for (const auto& e : j["elements"]) {
    if (!e.is_number_integer()) throw std::invalid_argument("array elements must be integers");
    pos.push_back(e.get<Position>());
  }
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw std::invalid_argument("array name must be a string");
    name = j["name"].get<std::string>();
  }
  return {name, SensorArray::normalized(std::move(pos))};
}

NamedArray parse_array_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return parse_array_json(j);
}

NamedArray load_array_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open array file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  NamedArray out = parse_array_text(buf.str());
  if (out.name.empty()) out.name = path;
  return out;
}

nlohmann::json array_to_json(const std::string& name, const SensorArray& array) {
  return {{"name", name}, {"elements", std::vector<Position>(array.begin(), array.end())}};
}

std::string format_fraction(const Fraction& f) {
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

void write_beampattern_csv(std::ostream& os, const Beampattern& bp, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("beampattern scale must be positive");
  os << "omega,value\n";
  for (const auto& s : bp.samples) {
    os << format_fixed(s.omega, 9) << ',' << format_fixed(s.value / scale, 9) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "axis_value,rmse,success_count,trial_count\n";
  for (const auto& row : result.rows) {
    os << format_fixed(row.value, 6) << ',';
    if (row.rmse) os << format_fixed(*row.rmse, 9);
    os << ',' << row.success_count << ',' << row.trial_count << '\n';
  }
}

}  // namespace fractarray
