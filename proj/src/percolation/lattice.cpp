#include "percolation/lattice.hpp"

#include <stdexcept>

namespace fusionsim::percolation {

Lattice Lattice::square(int side, Boundary boundary) {
  if (side < 2) throw std::invalid_argument("lattice side must be at least 2");
  if (boundary == Boundary::kPeriodic && side < 3)
    throw std::invalid_argument("periodic lattice side must be at least 3");
  if (side > 46340) throw std::invalid_argument("lattice side too large");

  Lattice lat;
  lat.side_ = side;
  lat.boundary_ = boundary;
  const auto L = static_cast<std::uint32_t>(side);
  const bool wrap = boundary == Boundary::kPeriodic;
  lat.bonds_.reserve(static_cast<std::size_t>(2) * L * L);
  for (std::uint32_t y = 0; y < L; ++y) {
    for (std::uint32_t x = 0; x < L; ++x) {
      const std::uint32_t s = y * L + x;
      if (x + 1 < L)
        lat.bonds_.push_back({s, s + 1});
      else if (wrap)
        lat.bonds_.push_back({s, y * L});
      if (y + 1 < L)
        lat.bonds_.push_back({s, s + L});
      else if (wrap)
        lat.bonds_.push_back({s, x});
    }
  }

  // Compressed incidence lists.
  const std::uint32_t n = L * L;
  lat.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Bond& b : lat.bonds_) {
    ++lat.offsets_[b.a + 1];
    ++lat.offsets_[b.b + 1];
  }
  for (std::uint32_t i = 0; i < n; ++i) lat.offsets_[i + 1] += lat.offsets_[i];
  lat.incident_.resize(lat.offsets_[n]);
  std::vector<std::uint32_t> fill(lat.offsets_.begin(), lat.offsets_.end() - 1);
  for (std::uint32_t id = 0; id < lat.bonds_.size(); ++id) {
    lat.incident_[fill[lat.bonds_[id].a]++] = id;
    lat.incident_[fill[lat.bonds_[id].b]++] = id;
  }
  return lat;
}

const char* to_string(Boundary boundary) { return boundary == Boundary::kOpen ? "open" : "periodic"; }

}  // namespace fusionsim::percolation
