#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace neurowire {

/// Piecewise-linear path in R^dim given by strictly increasing sample times.
class SampledPath {
 public:
  explicit SampledPath(int dim = 2);

  /// Constant path at `point` on [t0, t1].
  static SampledPath stationary(std::span<const double> point, double t0, double t1);

  /// Appends a sample; throws InputError unless `time` exceeds the last sample
  /// time and `point.size() == dim()`.
  void append(double time, std::span<const double> point);

  int dim() const { return dim_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double start_time() const;
  double end_time() const;
  const std::vector<double>& times() const { return times_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

  /// True when [t0, t1] lies inside the sampled range.
  bool covers(double t0, double t1) const;

  /// Linear interpolation at `t`; throws InputError outside the sampled range.
  void evaluate(double t, std::span<double> out) const;
  std::vector<double> evaluate(double t) const;

 private:
  int dim_;
  std::vector<double> times_;
  std::vector<double> coords_;
};

/// sup_{t in [t0, t1]} |a(t) - b(t)|. Exact for piecewise-linear paths because
/// the maximum is attained at a breakpoint of one of them.
double sup_distance(const SampledPath& a, const SampledPath& b, double t0, double t1);

}  // namespace neurowire
