#pragma once

#include <array>
#include <map>
#include <vector>

#include "experiment/experiment.hpp"

namespace fusionsim::detection {

using experiment::BellLabel;
using fock::PatternDistribution;
using fock::PhotonPattern;

enum class Outcome { kPsiMinus = 0, kPsiPlus = 1, kPhiMinus = 2, kPhiPlus = 3, kFail = 4 };
inline constexpr std::array<Outcome, 5> kOutcomes = {Outcome::kPsiMinus, Outcome::kPsiPlus, Outcome::kPhiMinus,
                                                     Outcome::kPhiPlus, Outcome::kFail};

const char* to_string(Outcome outcome);
Outcome outcome_for(BellLabel label);

/// Flavor-blind photon pattern -> announced Bell state. Patterns absent from
/// the table classify as Fail.
class DiscriminationTable {
 public:
  DiscriminationTable() = default;
  explicit DiscriminationTable(std::map<PhotonPattern, Outcome> entries) : entries_(std::move(entries)) {}

  Outcome classify(const PhotonPattern& pattern) const;
  const std::map<PhotonPattern, Outcome>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<PhotonPattern, Outcome> entries_;
};

/// A pattern maps to X iff its probability exceeds `tol` for input X only.
/// Patterns seen for several inputs are recorded as Fail.
DiscriminationTable derive_discrimination_table(const std::array<PatternDistribution, 4>& ideal, double tol = 1e-12);

/// Table from ideal (V = 1, no loss, zero phase) runs of the network.
DiscriminationTable ideal_table(bool ancilla_enabled);

/// Sub-detector fan-out and per-photon detection efficiency of one PPNRD.
struct PpnrdConfig {
  int fan_out = 4;
  double efficiency = 1.0;
  void validate() const;
};

/// P(c clicks), c = 0..k, for n photons spread uniformly over k sub-detectors,
/// each photon detected independently with the configured efficiency.
std::vector<double> ppnrd_response(int photons, const PpnrdConfig& config);

/// Probability that a pattern yields exactly one click per photon in every group.
double normalization_factor(const PhotonPattern& pattern, const PpnrdConfig& config);

std::map<PhotonPattern, double> normalization_factors(const DiscriminationTable& table, const PpnrdConfig& config);

/// Raw click-count patterns produced by a photon-number distribution.
PatternDistribution click_distribution(const PatternDistribution& photons, const PpnrdConfig& config);

/// Keeps click patterns with `total_photons` clicks (full coincidences) and
/// divides each by its normalization factor.
PatternDistribution correct_click_statistics(const PatternDistribution& clicks, int total_photons,
                                             const PpnrdConfig& config);

enum class ClassificationMode {
  kPhotonNumber,  // classify photon-number patterns directly
  kRawClicks,     // only fully resolved click signatures count
};

struct OutcomeStats {
  /// P(outcome | input) for each Bell input (rows indexed by BellLabel).
  std::array<std::array<double, 5>, 4> confusion{};
  /// Outcome probabilities for a uniform mixture of the four inputs.
  std::array<double, 5> mixture{};
  /// P(correct announcement | input).
  std::array<double, 4> per_input_success{};
  /// Sum of the non-Fail mixture probabilities.
  double total_success = 0.0;

  double outcome(Outcome o) const { return mixture[static_cast<std::size_t>(o)]; }
};

OutcomeStats success_probability(const experiment::ExperimentConfig& config,
                                 ClassificationMode mode = ClassificationMode::kPhotonNumber,
                                 const PpnrdConfig& ppnrd = {});

/// Outcome probabilities for one input's distribution under a table.
std::array<double, 5> classify_distribution(const PatternDistribution& dist, const DiscriminationTable& table);

struct HeraldedStates {
  std::array<double, 5> probability{};
  /// Normalized photon-1,4 state per outcome (zero matrix if never heralded).
  std::array<experiment::TwoQubitState, 5> pair_state{};
};

HeraldedStates heralded_states(const experiment::FusionResult& result, const DiscriminationTable& table);

/// F = (1 - ⟨XX⟩ - ⟨YY⟩ - ⟨ZZ⟩) / 4, clamped to [0, 1].
double estimate_fidelity_singlet(double xx, double yy, double zz);

/// attempt_rate · ηⁿ.
double nfold_rate(double attempt_rate, double efficiency, int fold);

/// Source-to-detector transmission implied by an end-to-end efficiency.
double transmission_efficiency(double end_to_end, double detector, double source);

}  // namespace fusionsim::detection
