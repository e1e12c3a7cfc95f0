#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fusionsim::fock {

inline constexpr int kMaxPhotons = 8;

enum class Pol : std::uint8_t { H = 0, V = 1 };

/// One optical mode: a spatial port, a polarization, and an internal "flavor".
/// Flavor 0 is the shared interfering mode; every nonzero flavor is orthogonal
/// to every other flavor, so photons in different flavors never interfere.
struct ModeId {
  std::uint16_t port = 0;
  Pol pol = Pol::H;
  std::uint16_t flavor = 0;

  friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

using ModeIndex = std::uint16_t;

/// Dense indexing of every (port, pol, flavor) triple. Indices follow
/// lexicographic order on (port, pol, flavor), which makes the ordering of
/// occupation vectors canonical.
class ModeTable {
 public:
  ModeTable() = default;
  ModeTable(int num_ports, int num_flavors) : num_ports_(num_ports), num_flavors_(num_flavors) {
    if (num_ports < 1 || num_flavors < 1)
      throw std::invalid_argument("mode table needs at least one port and one flavor");
    if (num_ports * 2 * num_flavors > 0xFFFF)
      throw std::invalid_argument("mode table too large");
  }

  int num_ports() const { return num_ports_; }
  int num_flavors() const { return num_flavors_; }
  int size() const { return num_ports_ * 2 * num_flavors_; }

  bool has_port(int port) const { return port >= 0 && port < num_ports_; }
  bool contains(const ModeId& m) const {
    return has_port(m.port) && m.flavor < num_flavors_;
  }

  ModeIndex index(const ModeId& m) const {
    if (!contains(m))
      throw std::out_of_range("mode (port " + std::to_string(m.port) + ", flavor " +
                              std::to_string(m.flavor) + ") is not in the mode table");
    return static_cast<ModeIndex>((m.port * 2 + static_cast<int>(m.pol)) * num_flavors_ + m.flavor);
  }

  ModeId mode(ModeIndex i) const {
    ModeId m;
    m.flavor = static_cast<std::uint16_t>(i % num_flavors_);
    const int pp = i / num_flavors_;
    m.pol = static_cast<Pol>(pp % 2);
    m.port = static_cast<std::uint16_t>(pp / 2);
    return m;
  }

  friend bool operator==(const ModeTable&, const ModeTable&) = default;

 private:
  int num_ports_ = 1;
  int num_flavors_ = 1;
};

}  // namespace fusionsim::fock
