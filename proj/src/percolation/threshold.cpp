#include "percolation/threshold.hpp"

#include <algorithm>
#include <stdexcept>

namespace fusionsim::percolation {
namespace {

void check_curve(const SweepCurve& curve) {
  if (curve.p.size() < 2 || curve.p.size() != curve.mean.size())
    throw std::invalid_argument("curve needs at least two grid points");
}

}  // namespace

double level_crossing(const SweepCurve& curve, double level) {
  check_curve(curve);
  const auto& p = curve.p;
  const auto& y = curve.mean;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (y[i] == level) {
      std::size_t j = i;
      while (j + 1 < p.size() && y[j + 1] == level) ++j;
      return 0.5 * (p[i] + p[j]);
    }
    if (i > 0 && y[i - 1] < level && y[i] > level) {
      const double t = (level - y[i - 1]) / (y[i] - y[i - 1]);
      return p[i - 1] + t * (p[i] - p[i - 1]);
    }
  }
  throw std::runtime_error("curve never crosses " + std::to_string(level));
}

double max_slope_point(const SweepCurve& curve) {
  check_curve(curve);
  std::size_t best = 0;
  double best_slope = -1.0;
  for (std::size_t i = 0; i + 1 < curve.p.size(); ++i) {
    const double s = (curve.mean[i + 1] - curve.mean[i]) / (curve.p[i + 1] - curve.p[i]);
    if (s > best_slope) {
      best_slope = s;
      best = i;
    }
  }
  return 0.5 * (curve.p[best] + curve.p[best + 1]);
}

double slope_at(const SweepCurve& curve, double p) {
  check_curve(curve);
  const auto it = std::upper_bound(curve.p.begin(), curve.p.end(), p);
  std::size_t i = static_cast<std::size_t>(it - curve.p.begin());
  i = std::clamp<std::size_t>(i, 1, curve.p.size() - 1);
  return (curve.mean[i] - curve.mean[i - 1]) / (curve.p[i] - curve.p[i - 1]);
}

double curve_intersection(const SweepCurve& a, const SweepCurve& b) {
  check_curve(a);
  if (a.p != b.p) throw std::invalid_argument("curves must share a grid");
  std::size_t prev = a.p.size();
  for (std::size_t i = 0; i < a.p.size(); ++i) {
    const double d = a.mean[i] - b.mean[i];
    if (d == 0.0) continue;
    if (prev < a.p.size()) {
      const double d0 = a.mean[prev] - b.mean[prev];
      if ((d0 < 0.0) != (d < 0.0)) {
        const double t = d0 / (d0 - d);
        return a.p[prev] + t * (a.p[i] - a.p[prev]);
      }
    }
    prev = i;
  }
  throw std::runtime_error("curves do not intersect on the grid");
}

ThresholdEstimate estimate_threshold(std::span<const SweepCurve> curves) {
  if (curves.size() < 2) throw std::invalid_argument("threshold estimate needs at least two lattice sizes");
  const SweepCurve* largest = &curves.front();
  ThresholdEstimate est;
  for (const auto& c : curves) {
    est.sizes.push_back(c.side);
    if (c.side > largest->side) largest = &c;
  }
  est.crossing = level_crossing(*largest, 0.5);
  est.max_slope = max_slope_point(*largest);
  est.grid_step = largest->p[1] - largest->p[0];
  return est;
}

}  // namespace fusionsim::percolation
