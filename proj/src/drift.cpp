#include "ddm/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddm {

PiecewiseDrift::PiecewiseDrift(std::vector<double> switch_times, std::vector<double> values) {
  if (values.size() != switch_times.size() + 1) {
    throw std::invalid_argument("PiecewiseDrift: need one more value than switch times");
  }
  double prev = 0.0;
  for (double t : switch_times) {
    if (!(t > prev) || !std::isfinite(t)) throw std::invalid_argument("PiecewiseDrift: switch times must increase from 0");
    prev = t;
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("PiecewiseDrift: drift values must be finite");
  }
  values_.push_back(values[0]);
  for (std::size_t j = 0; j < switch_times.size(); ++j) {
    if (values[j + 1] == values_.back()) continue;
    switch_times_.push_back(switch_times[j]);
    values_.push_back(values[j + 1]);
  }
}

PiecewiseDrift PiecewiseDrift::constant(double mu) { return PiecewiseDrift({}, {mu}); }

double PiecewiseDrift::at(double t) const {
  const auto it = std::upper_bound(switch_times_.begin(), switch_times_.end(), t);
  return values_[static_cast<std::size_t>(it - switch_times_.begin())];
}

double PiecewiseDrift::integral(double t) const {
  double acc = 0.0;
  double start = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double end = j < switch_times_.size() ? switch_times_[j] : t;
    if (t <= end) return acc + values_[j] * (t - start);
    acc += values_[j] * (end - start);
    start = end;
  }
  return acc;
}

}  // namespace ddm
