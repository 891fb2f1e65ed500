#include "neurowire/sampled_path.hpp"

#include <algorithm>
#include <cmath>

#include "neurowire/errors.hpp"

namespace neurowire {

namespace {
constexpr double kTimeSlack = 1e-12;
}

SampledPath::SampledPath(int dim) : dim_(dim) {
  if (dim < 1) throw InputError("SampledPath: dimension must be positive");
}

SampledPath SampledPath::stationary(std::span<const double> point, double t0, double t1) {
  SampledPath path(static_cast<int>(point.size()));
  path.append(t0, point);
  path.append(t1, point);
  return path;
}

void SampledPath::append(double time, std::span<const double> point) {
  if (point.size() != static_cast<std::size_t>(dim_)) {
    throw InputError("SampledPath: point dimension mismatch");
  }
  if (!times_.empty() && !(time > times_.back())) {
    throw InputError("SampledPath: sample times must be strictly increasing");
  }
  times_.push_back(time);
  coords_.insert(coords_.end(), point.begin(), point.end());
}

double SampledPath::start_time() const {
  if (times_.empty()) throw InputError("SampledPath: empty path");
  return times_.front();
}

double SampledPath::end_time() const {
  if (times_.empty()) throw InputError("SampledPath: empty path");
  return times_.back();
}

bool SampledPath::covers(double t0, double t1) const {
  if (times_.empty()) return false;
  return times_.front() <= t0 + kTimeSlack && times_.back() >= t1 - kTimeSlack;
}

void SampledPath::evaluate(double t, std::span<double> out) const {
  if (!covers(t, t)) throw InputError("SampledPath: time outside sampled range");
  const auto d = static_cast<std::size_t>(dim_);
  if (times_.size() == 1 || t <= times_.front()) {
    std::copy_n(coords_.begin(), d, out.begin());
    return;
  }
  if (t >= times_.back()) {
    std::copy_n(coords_.end() - static_cast<std::ptrdiff_t>(d), d, out.begin());
    return;
  }
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  for (std::size_t k = 0; k < d; ++k) {
    const double a = coords_[lo * d + k];
    const double b = coords_[hi * d + k];
    out[k] = a + w * (b - a);
  }
}

std::vector<double> SampledPath::evaluate(double t) const {
  std::vector<double> out(static_cast<std::size_t>(dim_));
  evaluate(t, out);
  return out;
}

double sup_distance(const SampledPath& a, const SampledPath& b, double t0, double t1) {
  if (a.dim() != b.dim()) throw InputError("sup_distance: dimension mismatch");
  std::vector<double> breaks{t0, t1};
  for (const auto* path : {&a, &b}) {
    for (double t : path->times()) {
      if (t > t0 && t < t1) breaks.push_back(t);
    }
  }
  std::vector<double> pa(static_cast<std::size_t>(a.dim()));
  std::vector<double> pb(pa.size());
  double best = 0.0;
  for (double t : breaks) {
    a.evaluate(t, pa);
    b.evaluate(t, pb);
    double sq = 0.0;
    for (std::size_t k = 0; k < pa.size(); ++k) sq += (pa[k] - pb[k]) * (pa[k] - pb[k]);
    best = std::max(best, std::sqrt(sq));
  }
  return best;
}

}  // namespace neurowire
