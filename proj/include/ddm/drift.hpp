#pragma once

#include <cstddef>
#include <vector>

namespace ddm {

// Piecewise-constant drift mu(t). values[j] holds on [t_j, t_{j+1}) with
// t_0 = 0 and t_{k+1} = inf, where t_1 < ... < t_k are the switch times.
// Adjacent equal values are merged, so a constant schedule has one segment.
class PiecewiseDrift {
 public:
  PiecewiseDrift(std::vector<double> switch_times, std::vector<double> values);
  static PiecewiseDrift constant(double mu);

  double at(double t) const;
  // int_0^t mu(s) ds
  double integral(double t) const;

  const std::vector<double>& switch_times() const { return switch_times_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t segments() const { return values_.size(); }
  bool is_constant() const { return values_.size() == 1; }

 private:
  std::vector<double> switch_times_;
  std::vector<double> values_;
};

}  // namespace ddm
