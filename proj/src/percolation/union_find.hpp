#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace fusionsim::percolation {

// Union by size with path halving. Each root also carries a small bit mask
// (used for "touches top row" / "touches bottom row") that is OR-ed on union.
class UnionFind {
 public:
  explicit UnionFind(std::uint32_t n) : parent_(n), size_(n, 1), mask_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns the root of the merged set.
  std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    mask_[a] |= mask_[b];
    return a;
  }

  std::uint32_t size_of(std::uint32_t x) { return size_[find(x)]; }
  std::uint8_t mask_of(std::uint32_t x) { return mask_[find(x)]; }
  void mark(std::uint32_t x, std::uint8_t bits) { mask_[find(x)] |= bits; }
  std::uint32_t elements() const { return static_cast<std::uint32_t>(parent_.size()); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint8_t> mask_;
};

}  // namespace fusionsim::percolation
