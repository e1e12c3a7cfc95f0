#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "experiment/two_qubit.hpp"
#include "fock/network.hpp"

namespace fusionsim::experiment {

// Port layout of the eight-photon setup. Photons 1-4 enter on ports 0-3.
// Ancilla pair (5, 6) is prepared on ports 4/5 and leaves on port 4;
// pair (7, 8) on ports 6/7, leaving on port 6.
namespace port {
inline constexpr int kPhoton1 = 0;
inline constexpr int kPhoton2 = 1;
inline constexpr int kPhoton3 = 2;
inline constexpr int kPhoton4 = 3;
inline constexpr int kAncillaA = 4;
inline constexpr int kAncillaAIdler = 5;
inline constexpr int kAncillaB = 6;
inline constexpr int kAncillaBIdler = 7;
inline constexpr int kCount = 8;
}  // namespace port

inline constexpr int kNumPhotons = 8;

/// Flavor 0 plus one private flavor per photon (photon i owns flavor i).
fock::ModeTable experiment_mode_table();

struct ExperimentConfig {
  /// Pairwise indistinguishability V: HOM visibility of any two photons.
  double overlap = 1.0;
  /// Optional per-photon indistinguishability V_i (photons 1..8); when set,
  /// the pair (i, j) has indistinguishability √(V_i V_j).
  std::optional<std::array<double, kNumPhotons>> photon_overlaps;
  /// Per-photon transmission; scales coincidence rates only.
  double transmission = 1.0;
  bool ancilla_enabled = true;
  /// Birefringent phase on photon 2 before BS1, radians.
  double phase = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
  double photon_overlap(int photon) const;
};

/// Internal state of one photon: common * |flavor 0⟩ + unique * |flavor own⟩.
struct FlavorAmplitudes {
  int photon = 0;
  double common = 1.0;
  double unique = 0.0;
};

/// Chooses amplitudes so that |⟨χ_i|χ_j⟩|² equals the configured
/// indistinguishability for every pair i != j.
std::vector<FlavorAmplitudes> assign_flavors(std::span<const int> photons, const ExperimentConfig& config);

/// Squared overlap of two photons' internal states.
double pairwise_indistinguishability(const FlavorAmplitudes& a, const FlavorAmplitudes& b);

/// One term of the flavor expansion: every photon is either in flavor 0 or in
/// its own flavor. Distinct components never interfere after flavor-blind
/// detection, so they can be evolved separately and mixed with `weight`.
struct FlavorComponent {
  double weight = 1.0;
  std::array<std::uint16_t, kNumPhotons + 1> flavor{};  // indexed by photon id
};

std::vector<FlavorComponent> flavor_components(std::span<const int> photons, const ExperimentConfig& config);

// Preparation circuits.
fock::Network bell_pair_circuit(const fock::ModeTable& table, int port_x, int port_y);
fock::Network noon_circuit(const fock::ModeTable& table, int port_x, int port_y);

struct BellPair {
  fock::FockState state;  // coincidence-conditioned, normalized
  double probability = 0.0;
};

/// |+⟩ photons on two ports into a PBS, post-selected on one photon per port.
/// Photon ids select the private flavors.
BellPair prepare_bell_pair(int port_x, int port_y, const ExperimentConfig& config, int photon_x = 1,
                           int photon_y = 2);

/// HOM on a 50:50 BS, HWP(45°) on port y, PBS: the pair leaves on port x.
fock::FockState prepare_noon_pair(int port_x, int port_y, const ExperimentConfig& config, int photon_x = 5,
                                  int photon_y = 6);

/// Two-photon state after the HOM beam splitter only (ports x, y).
fock::FockState hom_output(int port_x, int port_y, const ExperimentConfig& config, int photon_x = 5,
                           int photon_y = 6);

/// Cross-port coincidence probability after a 50:50 BS; visibility = 1 - 2 P_cc.
double hom_dip(double overlap);

/// Reduced polarization state of the two photons on (port_x, port_y), tracing
/// everything else including flavors. The state must hold exactly one photon
/// on each port in every term.
TwoQubitState polarization_state(const fock::FockState& state, int port_x, int port_y);

fock::Network build_fusion_network(const ExperimentConfig& config);

/// Detector groups (port × polarization). With ancillas: BS2 outputs
/// (photon-2 port H, V, ancilla-A port H, V) then BS3 outputs. Without: the
/// two BS1 outputs.
std::vector<fock::DetectorGroup> detection_groups(bool ancilla_enabled);

struct FusionResult {
  std::vector<fock::DetectorGroup> groups;
  fock::PatternDistribution distribution;
  /// Unnormalized photon-1,4 polarization state per pattern; trace equals the
  /// pattern probability. Filled only for the full resource preparation.
  std::map<fock::PhotonPattern, TwoQubitState> pair_states;
  /// Probability that both Bell pairs pass their coincidence post-selection.
  double herald_probability = 1.0;
  /// Fraction of attempts surviving loss: transmission^(photons detected).
  double rate_factor = 1.0;
  int photons_detected = 0;

  /// Distribution of the four groups on one side (0 = BS2/first BS1 output,
  /// 1 = BS3/second BS1 output), conditioned on that side holding `photons`.
  fock::PatternDistribution side_distribution(int side, int photons) const;
  /// Probability that one side holds exactly `photons`.
  double side_probability(int side, int photons) const;
};

/// Photons 2 and 3 prepared directly in a Bell state, ancillas via HOM.
FusionResult run_fusion(BellLabel input, const ExperimentConfig& config);

/// Photons 1-4 prepared as two PBS-heralded Bell pairs; returns pattern
/// statistics and the conditional photon-1,4 state for each pattern.
FusionResult run_fusion_full(const ExperimentConfig& config);

struct FringePoint {
  double phase = 0.0;
  /// Photon-1,4 joint probabilities in the +- basis, order (++, +-, -+, --).
  std::array<double, 4> diagonal{};
  double correlation = 0.0;  // ⟨XX⟩
  double herald_probability = 0.0;
};

/// Unboosted fusion with a birefringent phase on photon 2, heralded on one
/// photon in each BS1 output with orthogonal polarizations.
std::vector<FringePoint> phase_sweep(std::span<const double> phases, ExperimentConfig config);

/// (max - min) / (max + min) of P(++) across the sweep.
double fringe_visibility(std::span<const FringePoint> points);

/// Overlap V in [0, 1] whose phase-sweep fringe visibility equals `target`,
/// found by bisection.
double overlap_for_fringe_visibility(double target, std::span<const double> phases, ExperimentConfig config,
                                     double tol = 1e-6);

}  // namespace fusionsim::experiment
