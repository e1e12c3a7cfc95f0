#pragma once

#include <span>
#include <string>
#include <vector>

#include "percolation/newman_ziff.hpp"

namespace fusionsim::percolation {

struct ThresholdEstimate {
  double crossing = 0.0;   // p where the largest-L curve reaches 0.5
  double max_slope = 0.0;  // p of the steepest grid interval of the largest-L curve
  double grid_step = 0.0;
  std::vector<int> sizes;
  std::string method = "crossing-0.5";
};

/// p at which the curve first reaches `level`, by linear interpolation.
/// If the curve sits exactly on `level` over a run of grid points, the run's
/// midpoint is returned. Throws std::runtime_error if the level is never reached.
double level_crossing(const SweepCurve& curve, double level = 0.5);

/// Midpoint of the grid interval with the largest finite-difference slope.
double max_slope_point(const SweepCurve& curve);

/// Finite-difference slope of the grid interval containing p.
double slope_at(const SweepCurve& curve, double p);

/// p where curves a and b intersect: first sign change of a - b, ignoring
/// grid points where the curves coincide.
double curve_intersection(const SweepCurve& a, const SweepCurve& b);

/// Requires at least two curves; the largest lattice supplies the estimate.
ThresholdEstimate estimate_threshold(std::span<const SweepCurve> curves);

}  // namespace fusionsim::percolation
