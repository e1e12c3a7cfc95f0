#include "percolation/newman_ziff.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "percolation/union_find.hpp"

namespace fusionsim::percolation {
namespace {

constexpr std::uint8_t kTop = 1;
constexpr std::uint8_t kBottom = 2;

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void mark_rows(UnionFind& uf, const Lattice& lattice) {
  const auto L = static_cast<std::uint32_t>(lattice.side());
  for (std::uint32_t x = 0; x < L; ++x) {
    uf.mark(x, kTop);
    uf.mark((L - 1) * L + x, kBottom);
  }
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

const char* to_string(PercMode mode) { return mode == PercMode::kBondOnly ? "bond-only" : "site-bond"; }

const char* to_string(Observable observable) {
  return observable == Observable::kLargestCluster ? "largest-cluster" : "spanning";
}

std::uint32_t element_count(const Lattice& lattice, PercMode mode) {
  return lattice.num_bonds() + (mode == PercMode::kSiteBondEqual ? lattice.num_sites() : 0u);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  // splitmix64 finalizer over (master, counter).
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<std::uint32_t> element_order(std::uint32_t elements, std::uint64_t seed) {
  std::vector<std::uint32_t> order(elements);
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

TrialRecord run_trial(const Lattice& lattice, PercMode mode, std::uint64_t seed, bool track_spanning) {
  if (track_spanning && lattice.boundary() != Boundary::kOpen)
    throw std::invalid_argument("spanning is defined for open boundaries only");
  const std::uint32_t n_sites = lattice.num_sites();
  const std::uint32_t n_elements = element_count(lattice, mode);
  const bool site_bond = mode == PercMode::kSiteBondEqual;
  // Element ids: [0, n_sites) are sites in site-bond mode, the rest are bonds.
  const std::uint32_t bond_base = site_bond ? n_sites : 0u;

  const std::vector<std::uint32_t> order = element_order(n_elements, seed);

  UnionFind uf(n_sites);
  if (track_spanning) mark_rows(uf, lattice);
  std::vector<std::uint8_t> site_active(n_sites, site_bond ? 0 : 1);
  std::vector<std::uint8_t> bond_added(lattice.num_bonds(), 0);
  const auto bonds = lattice.bonds();

  TrialRecord rec;
  rec.largest.resize(static_cast<std::size_t>(n_elements) + 1);
  rec.spanning_step = static_cast<std::uint64_t>(n_elements) + 1;
  std::uint32_t largest = site_bond ? 0u : 1u;
  rec.largest[0] = largest;

  auto join = [&](std::uint32_t a, std::uint32_t b, std::uint32_t step) {
    const std::uint32_t root = uf.unite(a, b);
    largest = std::max(largest, uf.size_of(root));
    if (track_spanning && rec.spanning_step > step && uf.mask_of(root) == (kTop | kBottom)) rec.spanning_step = step;
  };

  for (std::uint32_t i = 0; i < n_elements; ++i) {
    const std::uint32_t step = i + 1;
    const std::uint32_t e = order[i];
    if (e < bond_base) {
      site_active[e] = 1;
      largest = std::max(largest, 1u);
      for (std::uint32_t id : lattice.incident(e)) {
        if (!bond_added[id]) continue;
        const std::uint32_t other = bonds[id].a == e ? bonds[id].b : bonds[id].a;
        if (site_active[other]) join(e, other, step);
      }
    } else {
      const std::uint32_t id = e - bond_base;
      bond_added[id] = 1;
      if (site_active[bonds[id].a] && site_active[bonds[id].b]) join(bonds[id].a, bonds[id].b, step);
    }
    rec.largest[step] = largest;
  }
  return rec;
}

BinomialWeights binomial_weights(std::uint64_t elements, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0, 1]");
  BinomialWeights out;
  if (p == 0.0 || elements == 0) {
    out.first = 0;
    out.weights = {1.0};
    return out;
  }
  if (p == 1.0) {
    out.first = elements;
    out.weights = {1.0};
    return out;
  }
  const double M = static_cast<double>(elements);
  const double q = 1.0 - p;
  const auto mode = std::min<std::uint64_t>(elements, static_cast<std::uint64_t>(std::floor((M + 1.0) * p)));
  constexpr double kCut = 1e-16;

  // Walk outward from the mode with the ratio recurrence.
  std::vector<double> up;
  double w = 1.0;
  for (std::uint64_t m = mode; m < elements; ++m) {
    w *= (M - static_cast<double>(m)) / (static_cast<double>(m) + 1.0) * (p / q);
    if (w < kCut) break;
    up.push_back(w);
  }
  std::vector<double> down;
  w = 1.0;
  for (std::uint64_t m = mode; m > 0; --m) {
    w *= static_cast<double>(m) / (M - static_cast<double>(m) + 1.0) * (q / p);
    if (w < kCut) break;
    down.push_back(w);
  }
  out.first = mode - down.size();
  out.weights.reserve(down.size() + 1 + up.size());
  out.weights.assign(down.rbegin(), down.rend());
  out.weights.push_back(1.0);
  out.weights.insert(out.weights.end(), up.begin(), up.end());
  CompensatedSum total;
  for (double x : out.weights) total.add(x);
  const double norm = total.value();
  for (double& x : out.weights) x /= norm;
  return out;
}

double convolve_largest(const TrialRecord& record, const BinomialWeights& weights, std::uint32_t num_sites) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < weights.weights.size(); ++i)
    acc.add(weights.weights[i] * static_cast<double>(record.largest[weights.first + i]));
  return acc.value() / static_cast<double>(num_sites);
}

double convolve_spanning(const TrialRecord& record, const BinomialWeights& weights) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < weights.weights.size(); ++i)
    if (weights.first + i >= record.spanning_step) acc.add(weights.weights[i]);
  return acc.value();
}

void SweepRequest::validate() const {
  if (side < 2) throw std::invalid_argument("lattice side must be at least 2");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
  if (grid.empty()) throw std::invalid_argument("p grid is empty");
  for (double p : grid)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p grid values must be in [0, 1]");
  if (observable == Observable::kSpanning && boundary != Boundary::kOpen)
    throw std::invalid_argument("spanning is defined for open boundaries only");
}

SweepCurve simulate_sweep(const SweepRequest& request) {
  request.validate();
  const Lattice lattice = Lattice::square(request.side, request.boundary);
  const std::uint32_t M = element_count(lattice, request.mode);
  const bool spanning = request.observable == Observable::kSpanning;

  std::vector<BinomialWeights> weights;
  weights.reserve(request.grid.size());
  for (double p : request.grid) weights.push_back(binomial_weights(M, p));

  const std::size_t G = request.grid.size();
  std::vector<std::vector<double>> per_trial(static_cast<std::size_t>(request.trials));
  parallel_for(request.trials, request.threads, [&](int t) {
    const TrialRecord rec = run_trial(lattice, request.mode, derive_seed(request.seed, static_cast<std::uint64_t>(t)), spanning);
    auto& row = per_trial[static_cast<std::size_t>(t)];
    row.resize(G);
    for (std::size_t g = 0; g < G; ++g)
      row[g] = spanning ? convolve_spanning(rec, weights[g]) : convolve_largest(rec, weights[g], lattice.num_sites());
  });

  SweepCurve curve;
  curve.side = request.side;
  curve.boundary = request.boundary;
  curve.mode = request.mode;
  curve.observable = request.observable;
  curve.p = request.grid;
  curve.trials = request.trials;
  curve.seed = request.seed;
  curve.mean.resize(G);
  curve.stderr_.resize(G);
  const double T = request.trials;
  for (std::size_t g = 0; g < G; ++g) {
    CompensatedSum sum;
    for (const auto& row : per_trial) sum.add(row[g]);
    const double mean = sum.value() / T;
    CompensatedSum sq;
    for (const auto& row : per_trial) sq.add((row[g] - mean) * (row[g] - mean));
    curve.mean[g] = mean;
    curve.stderr_[g] = request.trials > 1 ? std::sqrt(sq.value() / (T - 1.0) / T) : 0.0;
  }
  return curve;
}

std::vector<SweepCurve> simulate_sizes(std::span<const int> sizes, SweepRequest request) {
  if (sizes.empty()) throw std::invalid_argument("no lattice sizes given");
  std::vector<SweepCurve> out;
  for (int L : sizes) {
    request.side = L;
    out.push_back(simulate_sweep(request));
  }
  return out;
}

MonteCarloEstimate direct_monte_carlo(const Lattice& lattice, PercMode mode, double p, int trials,
                                      std::uint64_t seed, Observable observable) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0, 1]");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  const bool spanning = observable == Observable::kSpanning;
  if (spanning && lattice.boundary() != Boundary::kOpen)
    throw std::invalid_argument("spanning is defined for open boundaries only");
  const std::uint32_t n = lattice.num_sites();
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    // Separate stream family from the sweep seeds.
    std::mt19937_64 rng(derive_seed(seed ^ 0xD1B54A32D192ED03ull, static_cast<std::uint64_t>(t)));
    UnionFind uf(n);
    if (spanning) mark_rows(uf, lattice);
    std::vector<std::uint8_t> active(n, 1);
    if (mode == PercMode::kSiteBondEqual)
      for (auto& a : active) a = uniform01(rng) < p ? 1 : 0;
    bool spans = false;
    for (const Bond& b : lattice.bonds()) {
      if (!(uniform01(rng) < p)) continue;
      if (active[b.a] && active[b.b]) {
        const auto root = uf.unite(b.a, b.b);
        spans = spans || uf.mask_of(root) == (kTop | kBottom);
      }
    }
    if (spanning) {
      values.push_back(spans ? 1.0 : 0.0);
      continue;
    }
    std::uint32_t largest = 0;
    for (std::uint32_t s = 0; s < n; ++s)
      if (active[s]) largest = std::max(largest, uf.size_of(s));
    values.push_back(static_cast<double>(largest) / n);
  }
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  MonteCarloEstimate est;
  est.mean = sum.value() / trials;
  CompensatedSum sq;
  for (double v : values) sq.add((v - est.mean) * (v - est.mean));
  est.stderr_ = trials > 1 ? std::sqrt(sq.value() / (trials - 1.0) / trials) : 0.0;
  return est;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw std::invalid_argument("grid bounds must satisfy 0 <= lo <= hi <= 1");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(std::min(1.0, lo + static_cast<double>(i) * step));
  return grid;
}

}  // namespace fusionsim::percolation
