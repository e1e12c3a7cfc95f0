#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fusionsim::percolation {

enum class Boundary { kOpen, kPeriodic };

struct Bond {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

/// L × L square lattice; site (x, y) has index y * L + x.
class Lattice {
 public:
  /// Throws std::invalid_argument for L < 2, or L < 3 with periodic
  /// boundaries (the wrap bonds would duplicate the interior ones).
  static Lattice square(int side, Boundary boundary);

  int side() const { return side_; }
  Boundary boundary() const { return boundary_; }
  std::uint32_t num_sites() const { return static_cast<std::uint32_t>(side_) * static_cast<std::uint32_t>(side_); }
  std::uint32_t num_bonds() const { return static_cast<std::uint32_t>(bonds_.size()); }
  std::span<const Bond> bonds() const { return bonds_; }
  /// Bond ids touching `site`.
  std::span<const std::uint32_t> incident(std::uint32_t site) const {
    return {incident_.data() + offsets_[site], offsets_[site + 1] - offsets_[site]};
  }
  int row(std::uint32_t site) const { return static_cast<int>(site / static_cast<std::uint32_t>(side_)); }

 private:
  int side_ = 0;
  Boundary boundary_ = Boundary::kOpen;
  std::vector<Bond> bonds_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> incident_;
};

const char* to_string(Boundary boundary);

}  // namespace fusionsim::percolation
