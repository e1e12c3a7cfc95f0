#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fock/mode.hpp"

namespace fusionsim::fock {

using Amplitude = std::complex<double>;

/// Occupation numbers of one Fock basis ket, stored as the sorted multiset of
/// mode indices (one entry per photon). Unused slots are zero.
class Occupation {
 public:
  Occupation() = default;

  /// Builds from an unsorted list of mode indices, one per photon.
  static Occupation from_photons(std::span<const ModeIndex> photons);

  int total() const { return total_; }
  std::span<const ModeIndex> photons() const { return {photons_.data(), static_cast<std::size_t>(total_)}; }
  int count(ModeIndex mode) const;

  /// (mode, count) pairs with nonzero count, in mode order.
  std::vector<std::pair<ModeIndex, int>> counts() const;

  friend auto operator<=>(const Occupation&, const Occupation&) = default;

 private:
  std::array<ModeIndex, kMaxPhotons> photons_{};
  std::uint8_t total_ = 0;
};

/// Sparse pure state over a mode table. Terms are kept in canonical order so
/// equal states compare and iterate identically.
class FockState {
 public:
  using Terms = std::map<Occupation, Amplitude>;

  FockState() = default;
  explicit FockState(ModeTable table) : table_(table) {}

  static FockState vacuum(ModeTable table);

  const ModeTable& table() const { return table_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Photon number shared by every term; -1 for an empty state.
  int total_photons() const;

  double norm_squared() const;
  FockState normalized() const;

  Amplitude amplitude(const Occupation& occ) const;

  /// Adds `amp` to the coefficient of `occ`. Terms must share a photon number.
  void add(const Occupation& occ, Amplitude amp);

  /// Drops terms with |amplitude| <= `tol`.
  void prune(double tol = 1e-15);

  FockState& operator+=(const FockState& other);
  FockState& operator*=(Amplitude s);
  friend FockState operator+(FockState a, const FockState& b) { return a += b; }
  friend FockState operator*(Amplitude s, FockState a) { return a *= s; }

 private:
  ModeTable table_;
  Terms terms_;
};

/// ⟨a|b⟩.
Amplitude inner_product(const FockState& a, const FockState& b);

/// Largest |amplitude difference| over the union of supports.
double max_abs_difference(const FockState& a, const FockState& b);

/// Single-term normalized state with the requested occupations.
FockState create_photons(const ModeTable& table, std::span<const std::pair<ModeId, int>> placements);

/// Applies the creation operator Σ c_m a†_m to every term (unnormalized result).
FockState apply_creation(const FockState& state, std::span<const std::pair<ModeId, Amplitude>> combination);

}  // namespace fusionsim::fock
