#include "experiment/experiment.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace fusionsim::experiment {
namespace {

using fock::Amplitude;
using fock::FockState;
using fock::ModeId;
using fock::Pol;

ModeId mode(int port, Pol pol, int flavor) {
  return ModeId{static_cast<std::uint16_t>(port), pol, static_cast<std::uint16_t>(flavor)};
}

void check_photon(int photon) {
  if (photon < 1 || photon > kNumPhotons) throw std::invalid_argument("photon id must be in 1..8");
}

void check_ports(int port_x, int port_y) {
  if (port_x == port_y) throw std::invalid_argument("two distinct ports required");
  if (port_x < 0 || port_x >= port::kCount || port_y < 0 || port_y >= port::kCount)
    throw std::out_of_range("port outside the experiment layout");
}

// Adds one H photon per (port, photon) in its flavor superposition.
FockState add_superposed_photons(FockState state, std::span<const std::pair<int, int>> port_photon,
                                 const ExperimentConfig& config) {
  for (const auto& [p, photon] : port_photon) {
    const int ids[] = {photon};
    const FlavorAmplitudes amp = assign_flavors(ids, config).front();
    const std::pair<ModeId, Amplitude> combination[] = {
        {mode(p, Pol::H, 0), amp.common},
        {mode(p, Pol::H, photon), amp.unique},
    };
    state = fock::apply_creation(state, combination);
  }
  return state;
}

FockState bell_input(BellLabel label, const FlavorComponent& c) {
  const auto table = experiment_mode_table();
  const int f2 = c.flavor[2];
  const int f3 = c.flavor[3];
  auto product = [&](Pol a, Pol b) {
    const std::pair<ModeId, int> placements[] = {{mode(port::kPhoton2, a, f2), 1}, {mode(port::kPhoton3, b, f3), 1}};
    return fock::create_photons(table, placements);
  };
  const Amplitude s{1.0 / std::numbers::sqrt2, 0.0};
  switch (label) {
    case BellLabel::kPhiPlus:
      return s * (product(Pol::H, Pol::H) + product(Pol::V, Pol::V));
    case BellLabel::kPhiMinus:
      return s * (product(Pol::H, Pol::H) + Amplitude{-1.0, 0.0} * product(Pol::V, Pol::V));
    case BellLabel::kPsiPlus:
      return s * (product(Pol::H, Pol::V) + product(Pol::V, Pol::H));
    case BellLabel::kPsiMinus:
      return s * (product(Pol::H, Pol::V) + Amplitude{-1.0, 0.0} * product(Pol::V, Pol::H));
  }
  throw std::logic_error("unknown Bell label");
}

FockState add_component_photons(FockState state, std::span<const std::pair<int, int>> port_photon,
                                const FlavorComponent& c) {
  for (const auto& [p, photon] : port_photon) {
    const std::pair<ModeId, Amplitude> combination[] = {{mode(p, Pol::H, c.flavor[static_cast<std::size_t>(photon)]), 1.0}};
    state = fock::apply_creation(state, combination);
  }
  return state;
}

constexpr std::pair<int, int> kAncillaPhotons[] = {
    {port::kAncillaA, 5}, {port::kAncillaAIdler, 6}, {port::kAncillaB, 7}, {port::kAncillaBIdler, 8}};

FockState prepare_ancillas(FockState state, const FlavorComponent& c) {
  const auto table = state.table();
  state = add_component_photons(std::move(state), kAncillaPhotons, c);
  state = fock::apply_network(std::move(state), noon_circuit(table, port::kAncillaA, port::kAncillaAIdler));
  return fock::apply_network(std::move(state), noon_circuit(table, port::kAncillaB, port::kAncillaBIdler));
}

using PairKey = std::tuple<fock::Occupation, std::uint16_t, std::uint16_t>;

// Groups amplitudes by everything except the polarizations of the photons on
// port_x and port_y. Each group is one pure conditional two-qubit vector.
std::map<PairKey, std::array<Amplitude, 4>> pair_amplitudes(const FockState& state, int port_x, int port_y) {
  const auto& table = state.table();
  std::map<PairKey, std::array<Amplitude, 4>> groups;
  std::vector<fock::ModeIndex> rest;
  for (const auto& [occ, amp] : state.terms()) {
    int pol_x = -1;
    int pol_y = -1;
    std::uint16_t flavor_x = 0;
    std::uint16_t flavor_y = 0;
    rest.clear();
    for (fock::ModeIndex m : occ.photons()) {
      const ModeId id = table.mode(m);
      if (id.port == port_x && pol_x < 0) {
        pol_x = static_cast<int>(id.pol);
        flavor_x = id.flavor;
      } else if (id.port == port_y && pol_y < 0) {
        pol_y = static_cast<int>(id.pol);
        flavor_y = id.flavor;
      } else {
        if (id.port == port_x || id.port == port_y)
          throw std::invalid_argument("more than one photon on a kept port");
        rest.push_back(m);
      }
    }
    if (pol_x < 0 || pol_y < 0) throw std::invalid_argument("kept port is empty in some term");
    auto& v = groups[PairKey{fock::Occupation::from_photons(rest), flavor_x, flavor_y}];
    v[static_cast<std::size_t>(2 * pol_x + pol_y)] += amp;
  }
  return groups;
}

void accumulate(fock::PatternDistribution& into, const fock::PatternDistribution& from, double weight) {
  for (const auto& [pattern, p] : from) into[pattern] += weight * p;
}

}  // namespace

fock::ModeTable experiment_mode_table() { return fock::ModeTable(port::kCount, kNumPhotons + 1); }

void ExperimentConfig::validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(overlap)) throw std::invalid_argument("overlap must be in [0, 1]");
  if (photon_overlaps)
    for (double v : *photon_overlaps)
      if (!in_unit(v)) throw std::invalid_argument("per-photon overlap must be in [0, 1]");
  if (!in_unit(transmission)) throw std::invalid_argument("transmission must be in [0, 1]");
  if (!std::isfinite(phase)) throw std::invalid_argument("phase must be finite");
}

double ExperimentConfig::photon_overlap(int photon) const {
  check_photon(photon);
  return photon_overlaps ? (*photon_overlaps)[static_cast<std::size_t>(photon - 1)] : overlap;
}

std::vector<FlavorAmplitudes> assign_flavors(std::span<const int> photons, const ExperimentConfig& config) {
  config.validate();
  std::vector<FlavorAmplitudes> out;
  for (int photon : photons) {
    // P(flavor 0) = √V, so two photons share flavor 0 with probability V.
    const double p_common = std::sqrt(config.photon_overlap(photon));
    out.push_back({photon, std::sqrt(p_common), std::sqrt(1.0 - p_common)});
  }
  return out;
}

double pairwise_indistinguishability(const FlavorAmplitudes& a, const FlavorAmplitudes& b) {
  if (a.photon == b.photon) return 1.0;
  const double overlap = a.common * b.common;
  return overlap * overlap;
}

std::vector<FlavorComponent> flavor_components(std::span<const int> photons, const ExperimentConfig& config) {
  const auto amps = assign_flavors(photons, config);
  std::vector<FlavorComponent> out;
  const std::size_t n = amps.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    FlavorComponent c;
    for (std::size_t i = 0; i < n; ++i) {
      const bool distinct = (mask >> i) & 1u;
      const double a = distinct ? amps[i].unique : amps[i].common;
      c.weight *= a * a;
      c.flavor[static_cast<std::size_t>(amps[i].photon)] = distinct ? static_cast<std::uint16_t>(amps[i].photon) : 0;
    }
    if (c.weight > 0.0) out.push_back(c);
  }
  return out;
}

fock::Network bell_pair_circuit(const fock::ModeTable& table, int port_x, int port_y) {
  const double plus = std::numbers::pi / 8.0;
  fock::Network net(table);
  net.add(fock::HalfWavePlate{port_x, plus});
  net.add(fock::HalfWavePlate{port_y, plus});
  net.add(fock::PolarizingBeamSplitter{port_x, port_y});
  // The PBS reflection phase leaves (|HH⟩ - |VV⟩)/√2; a HWP at 0 flips V.
  net.add(fock::HalfWavePlate{port_y, 0.0});
  return net;
}

fock::Network noon_circuit(const fock::ModeTable& table, int port_x, int port_y) {
  fock::Network net(table);
  net.add(fock::BeamSplitter{port_x, port_y, 0.5});
  net.add(fock::HalfWavePlate{port_y, std::numbers::pi / 4.0});
  net.add(fock::PolarizingBeamSplitter{port_x, port_y});
  return net;
}

BellPair prepare_bell_pair(int port_x, int port_y, const ExperimentConfig& config, int photon_x, int photon_y) {
  check_ports(port_x, port_y);
  check_photon(photon_x);
  check_photon(photon_y);
  if (photon_x == photon_y) throw std::invalid_argument("two distinct photons required");
  const auto table = experiment_mode_table();
  const std::pair<int, int> inputs[] = {{port_x, photon_x}, {port_y, photon_y}};
  FockState state = add_superposed_photons(FockState::vacuum(table), inputs, config);
  state = fock::apply_network(std::move(state), bell_pair_circuit(table, port_x, port_y));
  const std::pair<int, int> coincidence[] = {{port_x, 1}, {port_y, 1}};
  auto sel = fock::project_port_counts(state, coincidence);
  return {std::move(sel.state), sel.probability};
}

FockState hom_output(int port_x, int port_y, const ExperimentConfig& config, int photon_x, int photon_y) {
  check_ports(port_x, port_y);
  if (photon_x == photon_y) throw std::invalid_argument("two distinct photons required");
  const auto table = experiment_mode_table();
  const std::pair<int, int> inputs[] = {{port_x, photon_x}, {port_y, photon_y}};
  FockState state = add_superposed_photons(FockState::vacuum(table), inputs, config);
  return fock::apply_op(state, fock::BeamSplitter{port_x, port_y, 0.5});
}

FockState prepare_noon_pair(int port_x, int port_y, const ExperimentConfig& config, int photon_x, int photon_y) {
  check_ports(port_x, port_y);
  if (photon_x == photon_y) throw std::invalid_argument("two distinct photons required");
  const auto table = experiment_mode_table();
  const std::pair<int, int> inputs[] = {{port_x, photon_x}, {port_y, photon_y}};
  FockState state = add_superposed_photons(FockState::vacuum(table), inputs, config);
  return fock::apply_network(std::move(state), noon_circuit(table, port_x, port_y));
}

double hom_dip(double overlap) {
  ExperimentConfig config;
  config.overlap = overlap;
  const FockState out = hom_output(port::kAncillaA, port::kAncillaAIdler, config);
  const std::pair<int, int> split[] = {{port::kAncillaA, 1}, {port::kAncillaAIdler, 1}};
  return fock::project_port_counts(out, split).probability;
}

TwoQubitState polarization_state(const FockState& state, int port_x, int port_y) {
  TwoQubitState rho;
  for (const auto& [key, v] : pair_amplitudes(state, port_x, port_y)) rho.add_projector(v);
  return rho;
}

fock::Network build_fusion_network(const ExperimentConfig& config) {
  config.validate();
  fock::Network net(experiment_mode_table());
  if (config.phase != 0.0) net.add(fock::Retarder{port::kPhoton2, config.phase});
  net.add(fock::BeamSplitter{port::kPhoton2, port::kPhoton3, 0.5});
  if (config.ancilla_enabled) {
    net.add(fock::BeamSplitter{port::kPhoton2, port::kAncillaA, 0.5});
    net.add(fock::BeamSplitter{port::kPhoton3, port::kAncillaB, 0.5});
  }
  return net;
}

std::vector<fock::DetectorGroup> detection_groups(bool ancilla_enabled) {
  using G = fock::DetectorGroup;
  if (!ancilla_enabled)
    return {G{port::kPhoton2, Pol::H}, G{port::kPhoton2, Pol::V}, G{port::kPhoton3, Pol::H}, G{port::kPhoton3, Pol::V}};
  return {G{port::kPhoton2, Pol::H}, G{port::kPhoton2, Pol::V}, G{port::kAncillaA, Pol::H}, G{port::kAncillaA, Pol::V},
          G{port::kPhoton3, Pol::H}, G{port::kPhoton3, Pol::V}, G{port::kAncillaB, Pol::H}, G{port::kAncillaB, Pol::V}};
}

fock::PatternDistribution FusionResult::side_distribution(int side, int photons) const {
  const std::size_t half = groups.size() / 2;
  const std::size_t begin = side == 0 ? 0 : half;
  fock::PatternDistribution marginal;
  for (const auto& [pattern, p] : distribution) {
    fock::PhotonPattern part(pattern.begin() + static_cast<std::ptrdiff_t>(begin),
                             pattern.begin() + static_cast<std::ptrdiff_t>(begin + half));
    int n = 0;
    for (int x : part) n += x;
    if (n == photons) marginal[part] += p;
  }
  double total = 0.0;
  for (const auto& [pattern, p] : marginal) total += p;
  if (total > 0.0)
    for (auto& [pattern, p] : marginal) p /= total;
  return marginal;
}

double FusionResult::side_probability(int side, int photons) const {
  const std::size_t half = groups.size() / 2;
  const std::size_t begin = side == 0 ? 0 : half;
  double total = 0.0;
  for (const auto& [pattern, p] : distribution) {
    int n = 0;
    for (std::size_t i = begin; i < begin + half; ++i) n += pattern[i];
    if (n == photons) total += p;
  }
  return total;
}

FusionResult run_fusion(BellLabel input, const ExperimentConfig& config) {
  config.validate();
  const auto network = build_fusion_network(config);
  FusionResult result;
  result.groups = detection_groups(config.ancilla_enabled);
  const std::vector<int> photons = config.ancilla_enabled ? std::vector<int>{2, 3, 5, 6, 7, 8} : std::vector<int>{2, 3};
  result.photons_detected = static_cast<int>(photons.size());
  result.rate_factor = std::pow(config.transmission, result.photons_detected);

  for (const FlavorComponent& c : flavor_components(photons, config)) {
    FockState state = bell_input(input, c);
    if (config.ancilla_enabled) state = prepare_ancillas(std::move(state), c);
    state = fock::apply_network(std::move(state), network);
    accumulate(result.distribution, fock::pattern_distribution(state, result.groups), c.weight);
  }
  return result;
}

FusionResult run_fusion_full(const ExperimentConfig& config) {
  config.validate();
  const auto table = experiment_mode_table();
  const auto network = build_fusion_network(config);
  const auto pair12 = bell_pair_circuit(table, port::kPhoton1, port::kPhoton2);
  const auto pair34 = bell_pair_circuit(table, port::kPhoton3, port::kPhoton4);
  constexpr std::pair<int, int> kResource[] = {
      {port::kPhoton1, 1}, {port::kPhoton2, 2}, {port::kPhoton3, 3}, {port::kPhoton4, 4}};
  constexpr std::pair<int, int> kCoincidence[] = {
      {port::kPhoton1, 1}, {port::kPhoton2, 1}, {port::kPhoton3, 1}, {port::kPhoton4, 1}};

  FusionResult result;
  result.groups = detection_groups(config.ancilla_enabled);
  std::vector<int> photons = {1, 2, 3, 4};
  if (config.ancilla_enabled) photons.insert(photons.end(), {5, 6, 7, 8});
  result.photons_detected = static_cast<int>(photons.size());
  result.rate_factor = std::pow(config.transmission, result.photons_detected);

  double herald = 0.0;
  for (const FlavorComponent& c : flavor_components(photons, config)) {
    FockState state = add_component_photons(FockState::vacuum(table), kResource, c);
    state = fock::apply_network(std::move(state), pair12);
    state = fock::apply_network(std::move(state), pair34);
    auto sel = fock::project_port_counts(state, kCoincidence);
    if (sel.probability <= 0.0) continue;
    const double weight = c.weight * sel.probability;
    herald += weight;
    state = std::move(sel.state);
    if (config.ancilla_enabled) state = prepare_ancillas(std::move(state), c);
    state = fock::apply_network(std::move(state), network);

    for (const auto& [key, v] : pair_amplitudes(state, port::kPhoton1, port::kPhoton4)) {
      const auto pattern = fock::group_counts(table, std::get<0>(key), result.groups);
      double p = 0.0;
      for (const auto& a : v) p += std::norm(a);
      result.distribution[pattern] += weight * p;
      result.pair_states[pattern].add_projector(v, weight);
    }
  }
  result.herald_probability = herald;
  if (herald > 0.0) {
    for (auto& [pattern, p] : result.distribution) p /= herald;
    for (auto& [pattern, rho] : result.pair_states)
      for (auto& x : rho.rho) x /= herald;
  }
  return result;
}

std::vector<FringePoint> phase_sweep(std::span<const double> phases, ExperimentConfig config) {
  if (phases.empty()) throw std::invalid_argument("phase grid is empty");
  config.ancilla_enabled = false;
  const fock::PhotonPattern heralds[] = {{0, 1, 1, 0}, {1, 0, 0, 1}};
  std::vector<FringePoint> out;
  for (double phi : phases) {
    config.phase = phi;
    const FusionResult r = run_fusion_full(config);
    TwoQubitState rho;
    for (const auto& h : heralds)
      if (auto it = r.pair_states.find(h); it != r.pair_states.end()) rho += it->second;
    FringePoint point;
    point.phase = phi;
    point.herald_probability = rho.trace();
    point.diagonal = outcome_probabilities(rho, Basis::kDiagonal);
    point.correlation = correlation(rho, Basis::kDiagonal);
    out.push_back(point);
  }
  return out;
}

double fringe_visibility(std::span<const FringePoint> points) {
  if (points.empty()) return 0.0;
  double lo = points.front().diagonal[0];
  double hi = lo;
  for (const auto& p : points) {
    lo = std::min(lo, p.diagonal[0]);
    hi = std::max(hi, p.diagonal[0]);
  }
  return hi + lo > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
}

double overlap_for_fringe_visibility(double target, std::span<const double> phases, ExperimentConfig config,
                                     double tol) {
  auto visibility_at = [&](double v) {
    config.overlap = v;
    return fringe_visibility(phase_sweep(phases, config));
  };
  double lo = 0.0;
  double hi = 1.0;
  if (target < visibility_at(lo) || target > visibility_at(hi))
    throw std::invalid_argument("target visibility is not reachable on [0, 1]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (visibility_at(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fusionsim::experiment
