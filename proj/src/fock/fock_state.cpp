#include "fock/fock_state.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace fusionsim::fock {

Occupation Occupation::from_photons(std::span<const ModeIndex> photons) {
  if (photons.size() > static_cast<std::size_t>(kMaxPhotons))
    throw std::invalid_argument("occupation exceeds " + std::to_string(kMaxPhotons) + " photons");
  Occupation occ;
  std::copy(photons.begin(), photons.end(), occ.photons_.begin());
  occ.total_ = static_cast<std::uint8_t>(photons.size());
  std::sort(occ.photons_.begin(), occ.photons_.begin() + occ.total_);
  return occ;
}

int Occupation::count(ModeIndex mode) const {
  auto p = photons();
  auto [lo, hi] = std::equal_range(p.begin(), p.end(), mode);
  return static_cast<int>(hi - lo);
}

std::vector<std::pair<ModeIndex, int>> Occupation::counts() const {
  std::vector<std::pair<ModeIndex, int>> out;
  for (ModeIndex m : photons()) {
    if (!out.empty() && out.back().first == m)
      ++out.back().second;
    else
      out.emplace_back(m, 1);
  }
  return out;
}

FockState FockState::vacuum(ModeTable table) {
  FockState s(table);
  s.terms_.emplace(Occupation{}, Amplitude{1.0, 0.0});
  return s;
}

int FockState::total_photons() const {
  return terms_.empty() ? -1 : terms_.begin()->first.total();
}

double FockState::norm_squared() const {
  double acc = 0.0;
  for (const auto& [occ, amp] : terms_) acc += std::norm(amp);
  return acc;
}

FockState FockState::normalized() const {
  const double n = norm_squared();
  if (n <= 0.0) return FockState(table_);
  FockState out = *this;
  out *= Amplitude{1.0 / std::sqrt(n), 0.0};
  return out;
}

Amplitude FockState::amplitude(const Occupation& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Amplitude{} : it->second;
}

void FockState::add(const Occupation& occ, Amplitude amp) {
  if (!terms_.empty() && terms_.begin()->first.total() != occ.total())
    throw std::invalid_argument("terms of one state must share a photon number");
  terms_[occ] += amp;
}

void FockState::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

FockState& FockState::operator+=(const FockState& other) {
  if (!(other.table_ == table_)) throw std::invalid_argument("adding states over different mode tables");
  for (const auto& [occ, amp] : other.terms_) add(occ, amp);
  return *this;
}

FockState& FockState::operator*=(Amplitude s) {
  for (auto& [occ, amp] : terms_) amp *= s;
  return *this;
}

Amplitude inner_product(const FockState& a, const FockState& b) {
  Amplitude acc{};
  for (const auto& [occ, amp] : a.terms()) acc += std::conj(amp) * b.amplitude(occ);
  return acc;
}

double max_abs_difference(const FockState& a, const FockState& b) {
  double worst = 0.0;
  for (const auto& [occ, amp] : a.terms()) worst = std::max(worst, std::abs(amp - b.amplitude(occ)));
  for (const auto& [occ, amp] : b.terms()) worst = std::max(worst, std::abs(amp - a.amplitude(occ)));
  return worst;
}

FockState create_photons(const ModeTable& table, std::span<const std::pair<ModeId, int>> placements) {
  std::set<ModeId> seen;
  std::vector<ModeIndex> photons;
  for (const auto& [mode, count] : placements) {
    if (count < 0) throw std::invalid_argument("negative photon count");
    if (!seen.insert(mode).second) throw std::invalid_argument("duplicate mode in placements");
    const ModeIndex idx = table.index(mode);
    if (static_cast<int>(photons.size()) + count > kMaxPhotons)
      throw std::invalid_argument("total photon number exceeds " + std::to_string(kMaxPhotons));
    photons.insert(photons.end(), static_cast<std::size_t>(count), idx);
  }
  FockState s(table);
  s.add(Occupation::from_photons(photons), Amplitude{1.0, 0.0});
  return s;
}

FockState apply_creation(const FockState& state, std::span<const std::pair<ModeId, Amplitude>> combination) {
  FockState out(state.table());
  std::vector<ModeIndex> photons;
  for (const auto& [occ, amp] : state.terms()) {
    if (occ.total() >= kMaxPhotons)
      throw std::invalid_argument("total photon number exceeds " + std::to_string(kMaxPhotons));
    for (const auto& [mode, coeff] : combination) {
      const ModeIndex idx = state.table().index(mode);
      const int n = occ.count(idx);
      photons.assign(occ.photons().begin(), occ.photons().end());
      photons.push_back(idx);
      out.add(Occupation::from_photons(photons), amp * coeff * std::sqrt(static_cast<double>(n + 1)));
    }
  }
  out.prune(0.0);
  return out;
}

}  // namespace fusionsim::fock
