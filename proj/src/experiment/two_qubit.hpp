#pragma once

#include <array>
#include <complex>

namespace fusionsim::experiment {

enum class BellLabel { kPhiPlus = 0, kPhiMinus = 1, kPsiPlus = 2, kPsiMinus = 3 };

inline constexpr std::array<BellLabel, 4> kBellLabels = {BellLabel::kPhiPlus, BellLabel::kPhiMinus,
                                                         BellLabel::kPsiPlus, BellLabel::kPsiMinus};

const char* to_string(BellLabel label);

/// Polarization measurement bases: HV (Z), +- (X), RL (Y).
enum class Basis { kHV, kDiagonal, kCircular };

/// Density matrix of two polarization qubits, basis order HH, HV, VH, VV.
/// Not necessarily normalized.
struct TwoQubitState {
  std::array<std::complex<double>, 16> rho{};

  std::complex<double>& at(int r, int c) { return rho[static_cast<std::size_t>(4 * r + c)]; }
  const std::complex<double>& at(int r, int c) const { return rho[static_cast<std::size_t>(4 * r + c)]; }

  double trace() const;
  TwoQubitState normalized() const;
  double purity() const;  // Tr ρ² of the normalized state

  /// Adds weight · |v⟩⟨v|.
  void add_projector(const std::array<std::complex<double>, 4>& v, double weight = 1.0);
  TwoQubitState& operator+=(const TwoQubitState& other);
};

std::array<std::complex<double>, 4> bell_vector(BellLabel label);

/// ⟨B|ρ|B⟩ / Tr ρ.
double fidelity(const TwoQubitState& state, BellLabel label);

/// Joint outcome probabilities (00, 01, 10, 11) with both qubits measured in
/// `basis`; outcome 0 is H, +, or L.
std::array<double, 4> outcome_probabilities(const TwoQubitState& state, Basis basis);

/// P(same) - P(different) in `basis`, i.e. ⟨ZZ⟩, ⟨XX⟩ or ⟨YY⟩.
double correlation(const TwoQubitState& state, Basis basis);

}  // namespace fusionsim::experiment
