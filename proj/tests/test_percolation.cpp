#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles/cluster_oracle.hpp"
#include "percolation/newman_ziff.hpp"
#include "percolation/threshold.hpp"
#include "percolation/union_find.hpp"

using namespace fusionsim::percolation;

namespace {

SweepRequest request(int L, PercMode mode, std::vector<double> grid, int trials, std::uint64_t seed) {
  SweepRequest r;
  r.side = L;
  r.mode = mode;
  r.grid = std::move(grid);
  r.trials = trials;
  r.seed = seed;
  return r;
}

}  // namespace

TEST_CASE("square lattice bond counts") {
  CHECK(Lattice::square(10, Boundary::kOpen).num_sites() == 100);
  CHECK(Lattice::square(10, Boundary::kOpen).num_bonds() == 180);
  CHECK(Lattice::square(10, Boundary::kPeriodic).num_bonds() == 200);
  CHECK(Lattice::square(2, Boundary::kOpen).num_sites() == 4);
  CHECK(Lattice::square(2, Boundary::kOpen).num_bonds() == 4);
  CHECK(Lattice::square(3, Boundary::kPeriodic).num_bonds() == 18);
  CHECK_THROWS_AS(Lattice::square(1, Boundary::kOpen), std::invalid_argument);
  CHECK_THROWS_AS(Lattice::square(2, Boundary::kPeriodic), std::invalid_argument);
}

TEST_CASE("lattice bonds are unique and the adjacency index is consistent") {
  for (auto boundary : {Boundary::kOpen, Boundary::kPeriodic}) {
    for (int L : {3, 4, 7}) {
      const auto lat = Lattice::square(L, boundary);
      std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
      for (const Bond& b : lat.bonds()) {
        CHECK(b.a != b.b);
        CHECK(seen.insert({std::min(b.a, b.b), std::max(b.a, b.b)}).second);
      }
      std::size_t incidences = 0;
      for (std::uint32_t s = 0; s < lat.num_sites(); ++s) {
        for (auto id : lat.incident(s)) CHECK((lat.bonds()[id].a == s || lat.bonds()[id].b == s));
        incidences += lat.incident(s).size();
        if (boundary == Boundary::kPeriodic) CHECK(lat.incident(s).size() == 4);
      }
      CHECK(incidences == 2 * lat.num_bonds());
    }
  }
}

TEST_CASE("union-find matches BFS on random small lattices") {
  std::mt19937_64 rng(99);
  std::bernoulli_distribution coin(0.6);
  for (int trial = 0; trial < 300; ++trial) {
    const int L = 2 + trial % 4;
    const auto lat = Lattice::square(L, trial % 2 || L < 3 ? Boundary::kOpen : Boundary::kPeriodic);
    std::vector<bool> site_on(lat.num_sites()), bond_on(lat.num_bonds());
    for (std::size_t i = 0; i < site_on.size(); ++i) site_on[i] = coin(rng);
    for (std::size_t i = 0; i < bond_on.size(); ++i) bond_on[i] = coin(rng);
    UnionFind uf(lat.num_sites());
    for (std::uint32_t b = 0; b < lat.num_bonds(); ++b) {
      const auto bond = lat.bonds()[b];
      if (bond_on[b] && site_on[bond.a] && site_on[bond.b]) uf.unite(bond.a, bond.b);
    }
    const auto ref = oracle::bfs_clusters(lat, site_on, bond_on);
    for (std::uint32_t s = 0; s < lat.num_sites(); ++s)
      if (site_on[s]) CHECK(uf.size_of(s) == ref.sizes[s]);
  }
}

TEST_CASE("sweep records match BFS after every element") {
  for (auto mode : {PercMode::kBondOnly, PercMode::kSiteBondEqual}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const int L = 2 + static_cast<int>(seed % 4);
      const auto lat = Lattice::square(L, Boundary::kOpen);
      const auto M = element_count(lat, mode);
      const auto rec = run_trial(lat, mode, seed, true);
      const auto order = element_order(M, seed);
      const bool site_bond = mode == PercMode::kSiteBondEqual;
      std::vector<bool> site_on(lat.num_sites(), !site_bond), bond_on(lat.num_bonds(), false);
      std::uint64_t first_span = M + 1ull;
      for (std::uint32_t m = 0; m <= M; ++m) {
        if (m > 0) {
          const auto e = order[m - 1];
          if (site_bond && e < lat.num_sites())
            site_on[e] = true;
          else
            bond_on[e - (site_bond ? lat.num_sites() : 0)] = true;
        }
        const auto ref = oracle::bfs_clusters(lat, site_on, bond_on);
        const std::uint32_t expected = m == 0 && !site_bond ? 1u : ref.largest;
        CHECK(rec.largest[m] == expected);
        if (ref.spans && first_span > M) first_span = m;
      }
      CHECK(rec.spanning_step == first_span);
    }
  }
}

TEST_CASE("trial record invariants") {
  const auto lat = Lattice::square(12, Boundary::kPeriodic);
  for (auto mode : {PercMode::kBondOnly, PercMode::kSiteBondEqual}) {
    const auto rec = run_trial(lat, mode, 5);
    CHECK(rec.largest.front() == (mode == PercMode::kBondOnly ? 1u : 0u));
    CHECK(rec.largest.back() == lat.num_sites());
    for (std::size_t m = 1; m < rec.largest.size(); ++m) CHECK(rec.largest[m] >= rec.largest[m - 1]);
  }
  CHECK_THROWS_AS(run_trial(lat, PercMode::kBondOnly, 1, true), std::invalid_argument);
}

TEST_CASE("element order is a permutation") {
  auto order = element_order(1000, 42);
  std::sort(order.begin(), order.end());
  for (std::uint32_t i = 0; i < 1000; ++i) CHECK(order[i] == i);
  CHECK(element_order(1000, 42) == element_order(1000, 42));
  CHECK(element_order(1000, 42) != element_order(1000, 43));
}

TEST_CASE("binomial weights sum to one and match direct evaluation") {
  for (std::uint64_t M : {1ull, 10ull, 180ull, 2000000ull}) {
    for (double p : make_grid(0.0, 1.0, 0.05)) {
      const auto w = binomial_weights(M, p);
      double sum = 0.0;
      for (double x : w.weights) sum += x;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(w.first + w.weights.size() <= M + 1);
    }
  }
  const auto w = binomial_weights(20, 0.3);
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    const double m = static_cast<double>(w.first + i);
    const double logc = std::lgamma(21.0) - std::lgamma(m + 1.0) - std::lgamma(21.0 - m);
    CHECK(w.weights[i] == doctest::Approx(std::exp(logc + m * std::log(0.3) + (20 - m) * std::log(0.7))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(binomial_weights(10, 1.5), std::invalid_argument);
}

TEST_CASE("sweep end points") {
  const auto grid = std::vector<double>{0.0, 1.0};
  const auto sb = simulate_sweep(request(16, PercMode::kSiteBondEqual, grid, 20, 3));
  CHECK(sb.mean[0] < 1e-12);
  CHECK(sb.mean[1] == doctest::Approx(1.0).epsilon(1e-12));
  const auto bo = simulate_sweep(request(16, PercMode::kBondOnly, grid, 20, 3));
  CHECK(bo.mean[0] == doctest::Approx(1.0 / 256.0));
  CHECK(bo.mean[1] == doctest::Approx(1.0));
}

TEST_CASE("Newman-Ziff agrees with direct Monte Carlo") {
  for (auto mode : {PercMode::kBondOnly, PercMode::kSiteBondEqual}) {
    for (int L : {16, 32}) {
      const std::vector<double> ps{0.3, 0.5, 0.7};
      const auto curve = simulate_sweep(request(L, mode, ps, 400, 1234));
      const auto lat = Lattice::square(L, Boundary::kOpen);
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto mc = direct_monte_carlo(lat, mode, ps[i], 400, 4321);
        const double sigma = std::hypot(curve.stderr_[i], mc.stderr_);
        CAPTURE(L);
        CAPTURE(ps[i]);
        CHECK(std::abs(curve.mean[i] - mc.mean) <= 3.0 * sigma + 1e-12);
      }
    }
  }
}

TEST_CASE("spanning probability agrees with direct Monte Carlo") {
  const std::vector<double> ps{0.45, 0.5, 0.55};
  auto req = request(24, PercMode::kBondOnly, ps, 600, 8);
  req.observable = Observable::kSpanning;
  const auto curve = simulate_sweep(req);
  const auto lat = Lattice::square(24, Boundary::kOpen);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto mc = direct_monte_carlo(lat, PercMode::kBondOnly, ps[i], 600, 9, Observable::kSpanning);
    CHECK(std::abs(curve.mean[i] - mc.mean) <= 3.0 * std::hypot(curve.stderr_[i], mc.stderr_));
  }
  auto periodic = req;
  periodic.boundary = Boundary::kPeriodic;
  CHECK_THROWS_AS(simulate_sweep(periodic), std::invalid_argument);
}

TEST_CASE("sweeps are bit-identical across thread counts") {
  auto req = request(20, PercMode::kSiteBondEqual, make_grid(0.0, 1.0, 0.01), 37, 77);
  const auto one = simulate_sweep(req);
  for (int threads : {2, 3, 8}) {
    req.threads = threads;
    const auto many = simulate_sweep(req);
    CHECK(many.mean == one.mean);
    CHECK(many.stderr_ == one.stderr_);
  }
  req.seed = 78;
  CHECK(simulate_sweep(req).mean != one.mean);
}

TEST_CASE("property: curves are monotone in p within statistical tolerance") {
  for (auto mode : {PercMode::kBondOnly, PercMode::kSiteBondEqual}) {
    const auto c = simulate_sweep(request(32, mode, make_grid(0.0, 1.0, 0.01), 50, 5));
    for (std::size_t i = 1; i < c.p.size(); ++i) {
      CHECK(c.mean[i] >= c.mean[i - 1] - 3.0 * std::hypot(c.stderr_[i], c.stderr_[i - 1]) - 1e-12);
      CHECK(c.mean[i] >= 0.0);
      CHECK(c.mean[i] <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("sweep request validation") {
  CHECK_THROWS_AS(simulate_sweep(request(1, PercMode::kBondOnly, {0.5}, 1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sweep(request(4, PercMode::kBondOnly, {}, 1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sweep(request(4, PercMode::kBondOnly, {1.1}, 1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sweep(request(4, PercMode::kBondOnly, {0.5}, 0, 0)), std::invalid_argument);
}

TEST_CASE("threshold helpers on synthetic curves") {
  SweepCurve c;
  c.side = 10;
  c.p = {0.0, 0.1, 0.2, 0.3, 0.4};
  c.mean = {0.0, 0.2, 0.4, 0.8, 1.0};
  CHECK(level_crossing(c, 0.5) == doctest::Approx(0.225));
  CHECK(max_slope_point(c) == doctest::Approx(0.25));
  CHECK(slope_at(c, 0.25) == doctest::Approx(4.0));
  c.mean = {0.0, 0.5, 0.5, 0.5, 1.0};
  CHECK(level_crossing(c, 0.5) == doctest::Approx(0.2));
  c.mean = {0.0, 0.1, 0.2, 0.3, 0.4};
  CHECK_THROWS_AS(level_crossing(c, 0.5), std::runtime_error);

  SweepCurve a = c, b = c;
  a.mean = {0.0, 0.2, 0.4, 0.6, 0.8};
  b.mean = {0.1, 0.2, 0.3, 0.7, 0.9};
  CHECK(curve_intersection(a, b) == doctest::Approx(0.1));
  a.mean = {0.0, 0.1, 0.5, 0.9, 1.0};
  b.mean = {0.0, 0.2, 0.4, 1.0, 1.0};
  CHECK(curve_intersection(a, b) == doctest::Approx(0.15));
  CHECK_THROWS_AS(curve_intersection(a, a), std::runtime_error);
  b.side = 20;
  b.mean = {0.0, 0.1, 0.3, 0.7, 1.0};
  const SweepCurve pair[] = {a, b};
  const auto est = estimate_threshold(pair);
  CHECK(est.crossing == doctest::Approx(0.25));
  CHECK(est.sizes == std::vector<int>{10, 20});
  CHECK_THROWS_AS(estimate_threshold(std::span<const SweepCurve>(pair, 1)), std::invalid_argument);
}

TEST_CASE("subcritical site-bond clusters stay small on large lattices") {
  const auto c = simulate_sweep(request(400, PercMode::kSiteBondEqual, {0.58}, 4, 17));
  CHECK(c.mean[0] < 0.05);
}
