#include "fractarray/core.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fractarray {

namespace {

// Dense counting is used whenever the lag range is not much larger than the
// number of pairs; otherwise the differences are sorted.
constexpr std::int64_t kDenseLagLimit = std::int64_t{1} << 24;

}  // namespace

SensorArray::SensorArray(std::vector<Position> positions)
    : elements_(std::move(positions)) {
  if (elements_.empty()) {
    throw std::invalid_argument("sensor array must not be empty");
  }
  if (elements_.front() != 0) {
    throw std::invalid_argument("sensor array must start at position 0");
  }
  for (std::size_t i = 1; i < elements_.size(); ++i) {
    if (elements_[i] <= elements_[i - 1]) {
      throw std::invalid_argument("sensor positions must be strictly increasing");
    }
  }
}

SensorArray SensorArray::normalized(std::vector<Position> positions) {
  if (positions.empty()) {
    throw std::invalid_argument("sensor array must not be empty");
  }
  std::sort(positions.begin(), positions.end());
  if (std::adjacent_find(positions.begin(), positions.end()) != positions.end()) {
    throw std::invalid_argument("duplicate sensor position");
  }
  const Position shift = positions.front();
  for (auto& p : positions) p -= shift;
  return SensorArray(std::move(positions));
}

bool SensorArray::contains(Position p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

SensorArray SensorArray::without(Position p) const {
  if (!contains(p)) throw std::invalid_argument("not a sensor position");
  if (size() == 1) throw std::invalid_argument("cannot remove the only sensor");
  std::vector<Position> rest;
  rest.reserve(size() - 1);
  for (Position e : elements_) {
    if (e != p) rest.push_back(e);
  }
  return normalized(std::move(rest));
}

CoarrayProfile::CoarrayProfile(const SensorArray& array) : sensors_(array.size()) {
  const auto el = array.elements();
  const std::size_t n = el.size();
  const Position span = array.aperture();

  // Positive lags with their pair counts, ascending.
  std::vector<Lag> pos_lags;
  std::vector<std::int64_t> pos_weights;

  const auto pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n);
  if (span < kDenseLagLimit || span < 8 * pairs) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(span) + 1, 0);
    for (std::size_t j = 1; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) ++counts[static_cast<std::size_t>(el[j] - el[i])];
    }
    for (Lag m = 1; m <= span; ++m) {
      if (counts[m] > 0) {
        pos_lags.push_back(m);
        pos_weights.push_back(counts[m]);
      }
    }
  } else {
    std::vector<Lag> diffs;
    diffs.reserve(n * (n - 1) / 2);
    for (std::size_t j = 1; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) diffs.push_back(el[j] - el[i]);
    }
    std::sort(diffs.begin(), diffs.end());
    for (std::size_t i = 0; i < diffs.size();) {
      std::size_t k = i;
      while (k < diffs.size() && diffs[k] == diffs[i]) ++k;
      pos_lags.push_back(diffs[i]);
      pos_weights.push_back(static_cast<std::int64_t>(k - i));
      i = k;
    }
  }

  const std::size_t p = pos_lags.size();
  lags_.resize(2 * p + 1);
  weights_.resize(2 * p + 1);
  for (std::size_t i = 0; i < p; ++i) {
    lags_[p - 1 - i] = -pos_lags[i];
    weights_[p - 1 - i] = pos_weights[i];
    lags_[p + 1 + i] = pos_lags[i];
    weights_[p + 1 + i] = pos_weights[i];
  }
  lags_[p] = 0;
  weights_[p] = static_cast<std::int64_t>(n);

  while (static_cast<std::size_t>(halfwidth_) < p &&
         pos_lags[static_cast<std::size_t>(halfwidth_)] == halfwidth_ + 1) {
    ++halfwidth_;
  }
  hole_free_ = static_cast<std::size_t>(halfwidth_) == p;
}

std::int64_t CoarrayProfile::weight(Lag lag) const {
  auto it = std::lower_bound(lags_.begin(), lags_.end(), lag);
  if (it == lags_.end() || *it != lag) return 0;
  return weights_[static_cast<std::size_t>(it - lags_.begin())];
}

WeightMap CoarrayProfile::weight_map() const {
  WeightMap w;
  for (std::size_t i = 0; i < lags_.size(); ++i) w.emplace_hint(w.end(), lags_[i], weights_[i]);
  return w;
}

CoarrayProfile difference_coarray(const SensorArray& array) { return CoarrayProfile(array); }

Lag central_ula(const CoarrayProfile& profile) { return profile.central_ula_halfwidth(); }

SensorArray reversed(const SensorArray& array) {
  const Position top = array.aperture();
  std::vector<Position> out(array.size());
  std::transform(array.begin(), array.end(), out.rbegin(), [top](Position n) { return top - n; });
  return SensorArray(std::move(out));
}

bool is_symmetric(const SensorArray& array) { return reversed(array) == array; }

Position aperture(const SensorArray& array) { return array.aperture(); }

std::string to_string(const SensorArray& array) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (i) os << ' ';
    os << array[i];
  }
  os << ']';
  return os.str();
}

}  // namespace fractarray
