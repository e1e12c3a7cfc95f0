#pragma once

#include <map>
#include <span>
#include <variant>
#include <vector>

#include "fock/fock_state.hpp"

namespace fusionsim::fock {

// Beam splitter between two ports, real convention:
//   a† -> √t a† + √(1-t) b†,   b† -> √(1-t) a† - √t b†.
// At t = 1/2 this is a† -> (a† + b†)/√2, b† -> (a† - b†)/√2.
struct BeamSplitter {
  int port_a = 0;
  int port_b = 1;
  double transmissivity = 0.5;
};

// Polarization-independent phase e^{iφ} on every photon in `port`.
struct PhaseShift {
  int port = 0;
  double angle = 0.0;
};

// Half-wave plate with fast axis at `angle`:
//   H -> cos2θ H + sin2θ V,   V -> sin2θ H - cos2θ V.
struct HalfWavePlate {
  int port = 0;
  double angle = 0.0;
};

// Transmits H, reflects V into the other port with amplitude i.
struct PolarizingBeamSplitter {
  int port_a = 0;
  int port_b = 1;
};

// Birefringent retarder: V -> e^{iφ} V, H unchanged.
struct Retarder {
  int port = 0;
  double angle = 0.0;
};

using ElementaryOp = std::variant<BeamSplitter, PhaseShift, HalfWavePlate, PolarizingBeamSplitter, Retarder>;

/// Ports touched by an op (one or two entries).
std::vector<int> op_ports(const ElementaryOp& op);

/// Throws std::out_of_range if any port is missing from the table.
void validate_op(const ModeTable& table, const ElementaryOp& op);

/// Applies the op by substituting creation operators. Flavors are preserved.
FockState apply_op(const FockState& state, const ElementaryOp& op);

class Network {
 public:
  explicit Network(ModeTable table) : table_(table) {}
  Network(ModeTable table, std::vector<ElementaryOp> ops);

  Network& add(ElementaryOp op);

  const ModeTable& table() const { return table_; }
  const std::vector<ElementaryOp>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

  template <typename Op>
  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& op : ops_) n += std::holds_alternative<Op>(op) ? 1 : 0;
    return n;
  }

 private:
  ModeTable table_;
  std::vector<ElementaryOp> ops_;
};

FockState apply_network(FockState state, const Network& network);

struct Selection {
  FockState state;     // renormalized conditional state; empty when probability is 0
  double probability;  // relative to the input norm
};

/// Keeps the terms whose occupation on each listed mode equals the requested
/// count, removes those photons, and renormalizes.
Selection post_select(const FockState& state, std::span<const std::pair<ModeId, int>> pattern);

/// Projects onto the subspace with the given total photon count per port
/// (summed over polarization and flavor). Photons are kept.
Selection project_port_counts(const FockState& state, std::span<const std::pair<int, int>> port_counts);

/// A detector sees one (port, polarization) pair and is blind to flavor.
struct DetectorGroup {
  int port = 0;
  Pol pol = Pol::H;
  friend auto operator<=>(const DetectorGroup&, const DetectorGroup&) = default;
};

using PhotonPattern = std::vector<int>;
using PatternDistribution = std::map<PhotonPattern, double>;

/// Photon-number distribution over the groups; photons elsewhere are traced out.
PatternDistribution pattern_distribution(const FockState& state, std::span<const DetectorGroup> groups);

/// Photon counts of one term over the groups, flavor-blind.
PhotonPattern group_counts(const ModeTable& table, const Occupation& occ, std::span<const DetectorGroup> groups);

}  // namespace fusionsim::fock
