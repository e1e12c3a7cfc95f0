#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "percolation/lattice.hpp"

namespace fusionsim::percolation {

/// Reference thresholds quoted alongside the simulations.
inline constexpr double kSiteBondEqualThreshold = 0.672;
inline constexpr double kGhzFusionThreshold = 0.5898;
inline constexpr double kBondSquareThreshold = 0.5;

enum class PercMode {
  kBondOnly,      // every site present, bonds open with probability p
  kSiteBondEqual  // sites and bonds each present with probability p
};

enum class Observable {
  kLargestCluster,  // mean fraction of sites in the largest cluster
  kSpanning         // probability that a cluster joins the top and bottom rows
};

const char* to_string(PercMode mode);
const char* to_string(Observable observable);

/// Elements added in one sweep: bonds, or sites followed by bonds.
std::uint32_t element_count(const Lattice& lattice, PercMode mode);

/// Counter-based per-trial seed derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

/// Uniformly random permutation of element ids [0, elements). In site-bond
/// mode ids below num_sites are sites and the rest are bonds.
std::vector<std::uint32_t> element_order(std::uint32_t elements, std::uint64_t seed);

struct TrialRecord {
  /// largest[m]: largest cluster size after m elements (m = 0..M).
  std::vector<std::uint32_t> largest;
  /// First m at which a spanning cluster exists; M + 1 if never (or if not tracked).
  std::uint64_t spanning_step = 0;
};

/// One Newman-Ziff sweep: elements are added in uniformly random order. A
/// site activation joins every already-added incident bond whose far end is
/// active; a bond joins its endpoints once both are active.
TrialRecord run_trial(const Lattice& lattice, PercMode mode, std::uint64_t seed, bool track_spanning = false);

/// Binomial(M, p) weights, truncated below 1e-16 of the modal weight and
/// renormalized. weights[i] belongs to m = first + i.
struct BinomialWeights {
  std::uint64_t first = 0;
  std::vector<double> weights;
};

BinomialWeights binomial_weights(std::uint64_t elements, double p);

/// Canonical-ensemble value of one trial at fixed p.
double convolve_largest(const TrialRecord& record, const BinomialWeights& weights, std::uint32_t num_sites);
double convolve_spanning(const TrialRecord& record, const BinomialWeights& weights);

struct SweepRequest {
  int side = 10;
  Boundary boundary = Boundary::kOpen;
  PercMode mode = PercMode::kSiteBondEqual;
  Observable observable = Observable::kLargestCluster;
  std::vector<double> grid;
  int trials = 100;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

struct SweepCurve {
  int side = 0;
  Boundary boundary = Boundary::kOpen;
  PercMode mode = PercMode::kSiteBondEqual;
  Observable observable = Observable::kLargestCluster;
  std::vector<double> p;
  std::vector<double> mean;
  std::vector<double> stderr_;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Runs `trials` sweeps and converts each to the fixed-p grid. Output is
/// bit-identical for any thread count.
SweepCurve simulate_sweep(const SweepRequest& request);

/// One curve per size; every size uses the same master seed.
std::vector<SweepCurve> simulate_sizes(std::span<const int> sizes, SweepRequest request);

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Fixed-p oracle: each element is kept independently with probability p.
MonteCarloEstimate direct_monte_carlo(const Lattice& lattice, PercMode mode, double p, int trials,
                                      std::uint64_t seed, Observable observable = Observable::kLargestCluster);

/// Evenly spaced grid from lo to hi inclusive (hi is snapped to the last step).
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace fusionsim::percolation
