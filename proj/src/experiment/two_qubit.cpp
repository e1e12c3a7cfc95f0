#include "experiment/two_qubit.hpp"

#include <cmath>
#include <numbers>

namespace fusionsim::experiment {
namespace {

using cd = std::complex<double>;

// Rows are the two basis states expressed in (H, V).
std::array<std::array<cd, 2>, 2> basis_states(Basis basis) {
  const double s = 1.0 / std::numbers::sqrt2;
  switch (basis) {
    case Basis::kHV:
      return {{{cd{1, 0}, cd{0, 0}}, {cd{0, 0}, cd{1, 0}}}};
    case Basis::kDiagonal:
      return {{{cd{s, 0}, cd{s, 0}}, {cd{s, 0}, cd{-s, 0}}}};
    case Basis::kCircular:
      return {{{cd{s, 0}, cd{0, s}}, {cd{s, 0}, cd{0, -s}}}};
  }
  return {};
}

}  // namespace

const char* to_string(BellLabel label) {
  switch (label) {
    case BellLabel::kPhiPlus:
      return "PhiPlus";
    case BellLabel::kPhiMinus:
      return "PhiMinus";
    case BellLabel::kPsiPlus:
      return "PsiPlus";
    case BellLabel::kPsiMinus:
      return "PsiMinus";
  }
  return "?";
}

double TwoQubitState::trace() const {
  double t = 0.0;
  for (int i = 0; i < 4; ++i) t += at(i, i).real();
  return t;
}

TwoQubitState TwoQubitState::normalized() const {
  TwoQubitState out = *this;
  const double t = trace();
  if (t > 0.0)
    for (auto& x : out.rho) x /= t;
  return out;
}

double TwoQubitState::purity() const {
  const TwoQubitState n = normalized();
  double p = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) p += (n.at(r, c) * n.at(c, r)).real();
  return p;
}

void TwoQubitState::add_projector(const std::array<cd, 4>& v, double weight) {
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) rho[4 * r + c] += weight * v[r] * std::conj(v[c]);
}

TwoQubitState& TwoQubitState::operator+=(const TwoQubitState& other) {
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += other.rho[i];
  return *this;
}

std::array<cd, 4> bell_vector(BellLabel label) {
  const double s = 1.0 / std::numbers::sqrt2;
  switch (label) {
    case BellLabel::kPhiPlus:
      return {cd{s, 0}, cd{}, cd{}, cd{s, 0}};
    case BellLabel::kPhiMinus:
      return {cd{s, 0}, cd{}, cd{}, cd{-s, 0}};
    case BellLabel::kPsiPlus:
      return {cd{}, cd{s, 0}, cd{s, 0}, cd{}};
    case BellLabel::kPsiMinus:
      return {cd{}, cd{s, 0}, cd{-s, 0}, cd{}};
  }
  return {};
}

double fidelity(const TwoQubitState& state, BellLabel label) {
  const auto b = bell_vector(label);
  cd acc{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) acc += std::conj(b[r]) * state.rho[4 * r + c] * b[c];
  const double t = state.trace();
  return t > 0.0 ? acc.real() / t : 0.0;
}

std::array<double, 4> outcome_probabilities(const TwoQubitState& state, Basis basis) {
  const auto e = basis_states(basis);
  const double t = state.trace();
  std::array<double, 4> probs{};
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      // |e_a⟩ ⊗ |e_b⟩ in the HH, HV, VH, VV basis.
      std::array<cd, 4> v{};
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) v[2 * i + j] = e[a][i] * e[b][j];
      TwoQubitState projector;
      projector.add_projector(v);
      cd acc{};
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) acc += projector.at(c, r) * state.at(r, c);
      probs[2 * a + b] = t > 0.0 ? acc.real() / t : 0.0;
    }
  return probs;
}

double correlation(const TwoQubitState& state, Basis basis) {
  const auto p = outcome_probabilities(state, basis);
  return p[0] + p[3] - p[1] - p[2];
}

}  // namespace fusionsim::experiment
