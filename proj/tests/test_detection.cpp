#include <doctest.h>

#include <cmath>

#include "detection/detection.hpp"
#include "oracles/fusion_oracle.hpp"
#include "oracles/ppnrd_oracle.hpp"

using namespace fusionsim;
using namespace fusionsim::detection;
using experiment::BellLabel;
using experiment::ExperimentConfig;

namespace {

ExperimentConfig with_overlap(double v, bool ancilla = true) {
  ExperimentConfig c;
  c.overlap = v;
  c.ancilla_enabled = ancilla;
  return c;
}

void all_patterns(int groups, int max_total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == groups) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= max_total; ++k) {
    cur.push_back(k);
    all_patterns(groups, max_total - k, cur, out);
    cur.pop_back();
  }
}

const oracle::Bell kOracleInputs[] = {oracle::Bell::PhiPlus, oracle::Bell::PhiMinus, oracle::Bell::PsiPlus,
                                      oracle::Bell::PsiMinus};

}  // namespace

TEST_CASE("PPNRD response matches brute-force enumeration") {
  for (double eta : {1.0, 0.72, 0.3}) {
    for (int k = 1; k <= 4; ++k) {
      for (int n = 0; n <= 5; ++n) {
        CAPTURE(eta);
        CAPTURE(k);
        CAPTURE(n);
        const auto got = ppnrd_response(n, {k, eta});
        const auto expected = oracle::ppnrd_enumerate(n, k, eta);
        REQUIRE(got.size() == expected.size());
        double sum = 0.0;
        for (std::size_t c = 0; c < got.size(); ++c) {
          CHECK(std::abs(got[c] - expected[c]) < 1e-12);
          sum += got[c];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("PPNRD frozen values") {
  CHECK(ppnrd_response(4, {4, 1.0})[4] == 24.0 / 256.0);
  const auto two = ppnrd_response(2, {4, 1.0});
  CHECK(two[2] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ppnrd_response(0, {4, 0.5})[0] == 1.0);
  CHECK(ppnrd_response(1, {4, 0.72})[1] == doctest::Approx(0.72).epsilon(1e-15));
  CHECK_THROWS_AS(ppnrd_response(-1, {4, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ppnrd_response(1, {0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ppnrd_response(1, {4, 1.2}), std::invalid_argument);
}

TEST_CASE("normalization factor multiplies per-group resolution probabilities") {
  const PpnrdConfig det{4, 1.0};
  CHECK(normalization_factor({1, 1, 1, 1}, det) == doctest::Approx(1.0));
  CHECK(normalization_factor({2, 0, 2, 0}, det) == doctest::Approx(0.75 * 0.75));
  CHECK(normalization_factor({4, 0, 0, 0}, det) == doctest::Approx(24.0 / 256.0));
  CHECK(normalization_factor({2, 1, 0, 1}, det) == doctest::Approx(0.75));
  CHECK(normalization_factor({1, 0, 0, 0}, {4, 0.5}) == doctest::Approx(0.5));
  CHECK(normalization_factor({5, 0}, det) == 0.0);
}

TEST_CASE("click statistics corrected by normalization factors recover photon statistics") {
  const PpnrdConfig det{4, 1.0};
  for (auto label : experiment::kBellLabels) {
    const auto photons = experiment::run_fusion(label, with_overlap(0.9)).distribution;
    const auto clicks = click_distribution(photons, det);
    double click_total = 0.0;
    for (const auto& [k, v] : clicks) click_total += v;
    CHECK(click_total == doctest::Approx(1.0).epsilon(1e-12));
    const auto corrected = correct_click_statistics(clicks, 6, det);
    for (const auto& [pattern, p] : photons) {
      const auto it = corrected.find(pattern);
      CHECK(std::abs((it == corrected.end() ? 0.0 : it->second) - p) < 1e-9);
    }
    CHECK(corrected.size() == photons.size());
  }
}

TEST_CASE("table derivation keeps patterns unique to one input") {
  std::array<PatternDistribution, 4> d;
  d[0] = {{{1, 0}, 0.5}, {{0, 1}, 0.5}};
  d[1] = {{{1, 0}, 1.0}};
  d[2] = {{{2, 0}, 1.0}};
  d[3] = {{{0, 2}, 1.0}, {{1, 1}, 1e-13}};
  const auto table = derive_discrimination_table(d);
  CHECK(table.classify({0, 1}) == Outcome::kPhiPlus);
  CHECK(table.classify({1, 0}) == Outcome::kFail);
  CHECK(table.classify({2, 0}) == Outcome::kPsiPlus);
  CHECK(table.classify({0, 2}) == Outcome::kPsiMinus);
  CHECK(table.classify({1, 1}) == Outcome::kFail);
  CHECK(table.classify({9, 9}) == Outcome::kFail);
}

TEST_CASE("discrimination table agrees with an enumeration oracle over all patterns") {
  for (bool ancilla : {true, false}) {
    CAPTURE(ancilla);
    const auto table = ideal_table(ancilla);
    std::array<std::map<std::vector<int>, double>, 4> support;
    for (int i = 0; i < 4; ++i) support[i] = oracle::fusion_distribution(kOracleInputs[i], ancilla);
    const int groups = ancilla ? 8 : 4;
    std::vector<std::vector<int>> patterns;
    std::vector<int> cur;
    all_patterns(groups, 8, cur, patterns);
    CHECK(patterns.size() == (ancilla ? 12870u : 495u));
    for (const auto& pattern : patterns) {
      int owners = 0;
      int owner = -1;
      for (int i = 0; i < 4; ++i) {
        const auto it = support[i].find(pattern);
        if (it != support[i].end() && it->second > 1e-12) {
          ++owners;
          owner = i;
        }
      }
      const Outcome expected = owners == 1 ? outcome_for(static_cast<BellLabel>(owner)) : Outcome::kFail;
      CHECK(table.classify(pattern) == expected);
      if (owners > 0) CHECK(table.entries().count(pattern) == 1);
    }
  }
}

TEST_CASE("signature patterns") {
  const auto table = ideal_table(true);
  int with_1111 = 0, with_4000 = 0;
  for (const auto& [pattern, outcome] : table.entries()) {
    for (int side = 0; side < 2; ++side) {
      const std::vector<int> part(pattern.begin() + 4 * side, pattern.begin() + 4 * side + 4);
      if (part == std::vector<int>{1, 1, 1, 1}) {
        ++with_1111;
        CHECK(outcome == Outcome::kPhiPlus);
      }
      if (part == std::vector<int>{4, 0, 0, 0}) {
        ++with_4000;
        CHECK(outcome == Outcome::kFail);
      }
    }
  }
  CHECK(with_1111 > 0);
  CHECK(with_4000 > 0);
}

TEST_CASE("ideal boosted and unboosted success") {
  const auto boosted = success_probability(with_overlap(1.0));
  CHECK(boosted.per_input_success[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(boosted.per_input_success[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(boosted.per_input_success[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boosted.per_input_success[3] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boosted.outcome(Outcome::kPsiMinus) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(boosted.outcome(Outcome::kPsiPlus) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(boosted.outcome(Outcome::kPhiMinus) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(boosted.outcome(Outcome::kPhiPlus) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(boosted.total_success == doctest::Approx(0.75).epsilon(1e-12));
  for (int i = 0; i < 4; ++i)
    for (int o = 0; o < 4; ++o)
      if (o != static_cast<int>(outcome_for(static_cast<BellLabel>(i)))) CHECK(boosted.confusion[i][o] < 1e-12);

  const auto plain = success_probability(with_overlap(1.0, false));
  CHECK(plain.total_success == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(plain.per_input_success[0] < 1e-12);
  CHECK(plain.per_input_success[1] < 1e-12);
}

TEST_CASE("property: success decreases monotonically with distinguishability") {
  double prev = 1.0;
  for (double v : {1.0, 0.98, 0.96, 0.94, 0.92, 0.9, 0.7, 0.5, 0.0}) {
    const auto s = success_probability(with_overlap(v));
    double sum = 0.0;
    for (double x : s.mixture) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.total_success <= prev + 1e-12);
    prev = s.total_success;
  }
}

TEST_CASE("raw-click classification never beats photon-number classification") {
  for (double v : {1.0, 0.9}) {
    const double ideal = success_probability(with_overlap(v)).total_success;
    for (int k : {2, 4, 8}) {
      const auto raw = success_probability(with_overlap(v), ClassificationMode::kRawClicks, {k, 1.0});
      CHECK(raw.total_success <= ideal + 1e-12);
      CHECK(raw.total_success > 0.0);
    }
  }
  const auto many = success_probability(with_overlap(1.0), ClassificationMode::kRawClicks, {64, 1.0});
  CHECK(many.total_success > success_probability(with_overlap(1.0), ClassificationMode::kRawClicks, {4, 1.0}).total_success);
}

TEST_CASE("heralded pair states at V = 1") {
  const auto r = experiment::run_fusion_full(with_overlap(1.0));
  const auto h = heralded_states(r, ideal_table(true));
  double sum = 0.0;
  for (double p : h.probability) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.probability[static_cast<std::size_t>(Outcome::kPsiMinus)] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(experiment::fidelity(h.pair_state[0], BellLabel::kPsiMinus) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fidelity estimator") {
  CHECK(estimate_fidelity_singlet(-1, -1, -1) == doctest::Approx(1.0));
  CHECK(estimate_fidelity_singlet(1, -1, 1) == doctest::Approx(0.0));
  CHECK(estimate_fidelity_singlet(0, 0, 0) == doctest::Approx(0.25));
  CHECK(estimate_fidelity_singlet(1, 1, 1) == 0.0);
  CHECK_THROWS_AS(estimate_fidelity_singlet(1.1, 0, 0), std::invalid_argument);
  // Estimator applied to a computed Werner-like state equals the direct overlap.
  experiment::TwoQubitState rho;
  rho.add_projector(experiment::bell_vector(BellLabel::kPsiMinus), 0.8);
  for (int i = 0; i < 4; ++i) rho.at(i, i) += 0.05;
  using experiment::Basis;
  const double f = estimate_fidelity_singlet(correlation(rho, Basis::kDiagonal), correlation(rho, Basis::kCircular),
                                             correlation(rho, Basis::kHV));
  CHECK(f == doctest::Approx(experiment::fidelity(rho, BellLabel::kPsiMinus)).epsilon(1e-12));
}

TEST_CASE("rates") {
  CHECK(nfold_rate(7.1e6, 0.16, 8) == doctest::Approx(3.04942678016).epsilon(1e-12));
  CHECK(nfold_rate(100.0, 1.0, 3) == 100.0);
  CHECK_THROWS_AS(nfold_rate(1.0, 1.2, 8), std::invalid_argument);
  CHECK_THROWS_AS(nfold_rate(-1.0, 0.5, 8), std::invalid_argument);
  CHECK_THROWS_AS(nfold_rate(1.0, 0.5, 0), std::invalid_argument);
  CHECK(transmission_efficiency(0.16, 0.72, 0.712) == doctest::Approx(0.16 / (0.72 * 0.712)));
  CHECK_THROWS_AS(transmission_efficiency(0.0, 0.72, 0.712), std::invalid_argument);
}
