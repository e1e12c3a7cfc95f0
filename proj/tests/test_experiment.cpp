#include <doctest.h>

#include <cmath>
#include <numbers>

#include "experiment/experiment.hpp"
#include "oracles/fusion_oracle.hpp"

using namespace fusionsim;
using namespace fusionsim::experiment;
using fock::FockState;
using fock::ModeId;
using fock::Pol;

namespace {

ExperimentConfig with_overlap(double v, bool ancilla = true) {
  ExperimentConfig c;
  c.overlap = v;
  c.ancilla_enabled = ancilla;
  return c;
}

oracle::Bell to_oracle(BellLabel b) {
  switch (b) {
    case BellLabel::kPhiPlus: return oracle::Bell::PhiPlus;
    case BellLabel::kPhiMinus: return oracle::Bell::PhiMinus;
    case BellLabel::kPsiPlus: return oracle::Bell::PsiPlus;
    case BellLabel::kPsiMinus: return oracle::Bell::PsiMinus;
  }
  return oracle::Bell::PhiPlus;
}

double max_difference(const fock::PatternDistribution& a, const std::map<std::vector<int>, double>& b) {
  double worst = 0.0;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    worst = std::max(worst, std::abs(v - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) worst = std::max(worst, v);
  return worst;
}

ModeId mode(int port, Pol pol, int flavor) {
  return ModeId{static_cast<std::uint16_t>(port), pol, static_cast<std::uint16_t>(flavor)};
}

// Every photon kept in its coherent flavor superposition; no decomposition.
fock::PatternDistribution coherent_fusion(BellLabel label, const ExperimentConfig& config) {
  const auto table = experiment_mode_table();
  const int ids[] = {2, 3, 5, 6, 7, 8};
  const auto amps = assign_flavors(ids, config);
  auto photon = [&](int port, Pol pol, const FlavorAmplitudes& a) {
    return std::vector<std::pair<ModeId, fock::Amplitude>>{{mode(port, pol, 0), a.common},
                                                           {mode(port, pol, a.photon), a.unique}};
  };
  auto pair_term = [&](Pol p2, Pol p3) {
    FockState s = FockState::vacuum(table);
    s = fock::apply_creation(s, photon(port::kPhoton2, p2, amps[0]));
    return fock::apply_creation(s, photon(port::kPhoton3, p3, amps[1]));
  };
  const double r = 1.0 / std::numbers::sqrt2;
  FockState state(table);
  switch (label) {
    case BellLabel::kPhiPlus: state = r * (pair_term(Pol::H, Pol::H) + pair_term(Pol::V, Pol::V)); break;
    case BellLabel::kPhiMinus: state = r * (pair_term(Pol::H, Pol::H) + -1.0 * pair_term(Pol::V, Pol::V)); break;
    case BellLabel::kPsiPlus: state = r * (pair_term(Pol::H, Pol::V) + pair_term(Pol::V, Pol::H)); break;
    case BellLabel::kPsiMinus: state = r * (pair_term(Pol::H, Pol::V) + -1.0 * pair_term(Pol::V, Pol::H)); break;
  }
  const int ports[] = {port::kAncillaA, port::kAncillaAIdler, port::kAncillaB, port::kAncillaBIdler};
  for (int i = 0; i < 4; ++i) state = fock::apply_creation(state, photon(ports[i], Pol::H, amps[2 + i]));
  state = fock::apply_network(state, noon_circuit(table, port::kAncillaA, port::kAncillaAIdler));
  state = fock::apply_network(state, noon_circuit(table, port::kAncillaB, port::kAncillaBIdler));
  state = fock::apply_network(state, build_fusion_network(config));
  const auto groups = detection_groups(true);
  return fock::pattern_distribution(state, groups);
}

double total(const fock::PatternDistribution& d) {
  double s = 0.0;
  for (const auto& [k, v] : d) s += v;
  return s;
}

}  // namespace

TEST_CASE("flavor amplitudes reproduce the pairwise indistinguishability") {
  for (double v : {0.0, 0.25, 0.5, 0.9076, 1.0}) {
    const int ids[] = {1, 2, 3};
    const auto amps = assign_flavors(ids, with_overlap(v));
    for (const auto& a : amps) CHECK(a.common * a.common + a.unique * a.unique == doctest::Approx(1.0));
    CHECK(pairwise_indistinguishability(amps[0], amps[1]) == doctest::Approx(v).epsilon(1e-14));
    CHECK(pairwise_indistinguishability(amps[1], amps[2]) == doctest::Approx(v).epsilon(1e-14));
  }
}

TEST_CASE("per-photon overlaps combine as a geometric mean") {
  ExperimentConfig c;
  c.photon_overlaps = std::array<double, 8>{0.9, 0.8, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5};
  const int ids[] = {1, 2, 8};
  const auto amps = assign_flavors(ids, c);
  CHECK(pairwise_indistinguishability(amps[0], amps[1]) == doctest::Approx(std::sqrt(0.9 * 0.8)));
  CHECK(pairwise_indistinguishability(amps[0], amps[2]) == doctest::Approx(std::sqrt(0.9 * 0.5)));
}

TEST_CASE("flavor component weights sum to one") {
  for (double v : {0.0, 0.3, 0.9, 1.0}) {
    const int ids[] = {2, 3, 5, 6, 7, 8};
    double sum = 0.0;
    for (const auto& c : flavor_components(ids, with_overlap(v))) sum += c.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  const int ids[] = {2, 3};
  CHECK(flavor_components(ids, with_overlap(1.0)).size() == 1);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(with_overlap(1.2).validate(), std::invalid_argument);
  CHECK_THROWS_AS(with_overlap(-0.1).validate(), std::invalid_argument);
  ExperimentConfig c;
  c.transmission = 2.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.phase = std::nan("");
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.photon_overlaps = std::array<double, 8>{1, 1, 1, 1, 1, 1, 1, 1.5};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("HOM dip: coincidence (1 - V)/2") {
  for (double v : {0.0, 0.25, 0.5, 0.75, 0.9076, 1.0}) {
    CHECK(hom_dip(v) == doctest::Approx((1.0 - v) / 2.0).epsilon(1e-13));
    CHECK(std::abs((1.0 - 2.0 * hom_dip(v)) - v) < 1e-12);
  }
}

TEST_CASE("PBS Bell-pair source heralds phi+ with probability 1/2") {
  const auto pair = prepare_bell_pair(port::kPhoton1, port::kPhoton2, with_overlap(1.0));
  CHECK(pair.probability == doctest::Approx(0.5).epsilon(1e-14));
  const auto rho = polarization_state(pair.state, port::kPhoton1, port::kPhoton2);
  CHECK(fidelity(rho, BellLabel::kPhiPlus) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partially distinguishable Bell source loses coherence, not probability") {
  const double v = 0.8;
  const auto pair = prepare_bell_pair(port::kPhoton1, port::kPhoton2, with_overlap(v));
  CHECK(pair.probability == doctest::Approx(0.5).epsilon(1e-13));
  const auto rho = polarization_state(pair.state, port::kPhoton1, port::kPhoton2);
  // Off-diagonal HH/VV coherence scales with the overlap.
  CHECK(fidelity(rho, BellLabel::kPhiPlus) == doctest::Approx((1.0 + v) / 2.0).epsilon(1e-12));
}

TEST_CASE("N00N source: (|2H> + |2V>)/sqrt2 on one port") {
  const FockState s = prepare_noon_pair(port::kAncillaA, port::kAncillaAIdler, with_overlap(1.0));
  const fock::DetectorGroup groups[] = {{port::kAncillaA, Pol::H},
                                        {port::kAncillaA, Pol::V},
                                        {port::kAncillaAIdler, Pol::H},
                                        {port::kAncillaAIdler, Pol::V}};
  const auto d = fock::pattern_distribution(s, groups);
  REQUIRE(d.size() == 2);
  CHECK(d.at({2, 0, 0, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.at({0, 2, 0, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  // The two branches must be coherent with a relative + sign up to a global phase.
  const auto table = experiment_mode_table();
  const std::pair<ModeId, int> hh[] = {{mode(port::kAncillaA, Pol::H, 0), 2}};
  const std::pair<ModeId, int> vv[] = {{mode(port::kAncillaA, Pol::V, 0), 2}};
  const FockState target = (1.0 / std::numbers::sqrt2) * (fock::create_photons(table, hh) + fock::create_photons(table, vv));
  CHECK(std::abs(fock::inner_product(target, s)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("boosted fusion matches the permanent oracle for every Bell input") {
  for (auto label : kBellLabels) {
    CAPTURE(to_string(label));
    const auto engine = run_fusion(label, with_overlap(1.0));
    const auto expected = oracle::fusion_distribution(to_oracle(label), true);
    CHECK(max_difference(engine.distribution, expected) < 1e-12);
    CHECK(total(engine.distribution) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("unboosted fusion matches the permanent oracle") {
  for (auto label : kBellLabels) {
    const auto engine = run_fusion(label, with_overlap(1.0, false));
    CHECK(max_difference(engine.distribution, oracle::fusion_distribution(to_oracle(label), false)) < 1e-12);
  }
}

TEST_CASE("phi+ four-photon side statistics") {
  const auto r = run_fusion(BellLabel::kPhiPlus, with_overlap(1.0));
  CHECK(r.side_probability(0, 4) == doctest::Approx(0.5).epsilon(1e-12));
  const auto d = r.side_distribution(0, 4);
  const double x = 1.0 / 64.0;
  const std::map<fock::PhotonPattern, double> expected = {
      {{4, 0, 0, 0}, 6 * x}, {{0, 4, 0, 0}, 6 * x}, {{0, 0, 4, 0}, 6 * x}, {{0, 0, 0, 4}, 6 * x},
      {{2, 0, 2, 0}, 4 * x}, {{0, 2, 0, 2}, 4 * x}, {{2, 2, 0, 0}, 4 * x}, {{2, 0, 0, 2}, 4 * x},
      {{0, 2, 2, 0}, 4 * x}, {{0, 0, 2, 2}, 4 * x}, {{1, 1, 1, 1}, 16 * x}};
  CHECK(max_difference(d, expected) < 1e-12);
}

TEST_CASE("phi- four-photon side statistics") {
  const auto d = run_fusion(BellLabel::kPhiMinus, with_overlap(1.0)).side_distribution(0, 4);
  const double x = 1.0 / 64.0;
  const std::map<fock::PhotonPattern, double> expected = {
      {{4, 0, 0, 0}, 6 * x}, {{0, 4, 0, 0}, 6 * x}, {{0, 0, 4, 0}, 6 * x}, {{0, 0, 0, 4}, 6 * x},
      {{2, 0, 2, 0}, 4 * x}, {{0, 2, 0, 2}, 4 * x}, {{2, 1, 0, 1}, 8 * x}, {{1, 2, 1, 0}, 8 * x},
      {{1, 0, 1, 2}, 8 * x}, {{0, 1, 2, 1}, 8 * x}};
  CHECK(max_difference(d, expected) < 1e-12);
}

TEST_CASE("psi- never bunches at BS1") {
  const auto boosted = run_fusion(BellLabel::kPsiMinus, with_overlap(1.0));
  CHECK(boosted.side_probability(0, 4) < 1e-24);
  CHECK(boosted.side_probability(1, 4) < 1e-24);
  const auto plain = run_fusion(BellLabel::kPsiMinus, with_overlap(1.0, false));
  CHECK(plain.side_probability(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("flavor decomposition equals coherent evolution of the full flavor superposition") {
  ExperimentConfig c = with_overlap(0.83);
  for (auto label : {BellLabel::kPhiPlus, BellLabel::kPsiMinus}) {
    const auto decomposed = run_fusion(label, c).distribution;
    CHECK(max_difference(decomposed, {}) > 0.0);
    const auto coherent = coherent_fusion(label, c);
    std::map<std::vector<int>, double> as_map(coherent.begin(), coherent.end());
    CHECK(max_difference(decomposed, as_map) < 1e-12);
  }
  c.photon_overlaps = std::array<double, 8>{1.0, 0.95, 0.7, 1.0, 0.9, 0.85, 0.6, 1.0};
  const auto decomposed = run_fusion(BellLabel::kPhiMinus, c).distribution;
  const auto coherent = coherent_fusion(BellLabel::kPhiMinus, c);
  CHECK(max_difference(decomposed, std::map<std::vector<int>, double>(coherent.begin(), coherent.end())) < 1e-12);
}

TEST_CASE("property: psi- bunching grows as photons become distinguishable") {
  double prev = -1.0;
  for (double v : {1.0, 0.95, 0.9, 0.7, 0.5, 0.0}) {
    const auto r = run_fusion(BellLabel::kPsiMinus, with_overlap(v));
    CHECK(total(r.distribution) == doctest::Approx(1.0).epsilon(1e-12));
    const double bunched = r.side_probability(0, 4);
    CHECK(bunched >= prev - 1e-12);
    prev = bunched;
  }
  CHECK(prev > 0.1);
}

TEST_CASE("rate factor is transmission to the number of detected photons") {
  ExperimentConfig c;
  c.transmission = 0.5;
  CHECK(run_fusion(BellLabel::kPhiPlus, c).rate_factor == doctest::Approx(std::pow(0.5, 6)));
  c.ancilla_enabled = false;
  CHECK(run_fusion(BellLabel::kPhiPlus, c).rate_factor == doctest::Approx(0.25));
}

TEST_CASE("full preparation heralds two Bell pairs with probability 1/4") {
  const auto r = run_fusion_full(with_overlap(1.0));
  CHECK(r.herald_probability == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(total(r.distribution) == doctest::Approx(1.0).epsilon(1e-12));
  double traces = 0.0;
  for (const auto& [pattern, rho] : r.pair_states) {
    CHECK(rho.trace() == doctest::Approx(r.distribution.at(pattern)).epsilon(1e-12));
    traces += rho.trace();
  }
  CHECK(traces == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("phase sweep: full-visibility fringe for indistinguishable photons") {
  std::vector<double> phases;
  for (int i = 0; i <= 16; ++i) phases.push_back(i * std::numbers::pi / 8);
  const auto points = phase_sweep(phases, with_overlap(1.0));
  CHECK(fringe_visibility(points) == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& p : points) {
    double s = 0.0;
    for (double x : p.diagonal) s += x;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.herald_probability > 0.0);
  }
  const double low = fringe_visibility(phase_sweep(phases, with_overlap(0.5)));
  CHECK(low < 1.0);
  CHECK(low > 0.0);
  const double v = overlap_for_fringe_visibility(low, phases, with_overlap(1.0));
  CHECK(v == doctest::Approx(0.5).epsilon(1e-4));
}
