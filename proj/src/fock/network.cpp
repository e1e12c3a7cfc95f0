#include "fock/network.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fusionsim::fock {
namespace {

// Image of a single creation operator: at most two target modes.
struct Transfer {
  std::array<ModeId, 2> target;
  std::array<Amplitude, 2> coeff;
  int size = 0;
};

Transfer single(ModeId m, Amplitude c) {
  Transfer t;
  t.target[0] = m;
  t.coeff[0] = c;
  t.size = 1;
  return t;
}

Transfer pair(ModeId m0, Amplitude c0, ModeId m1, Amplitude c1) {
  Transfer t;
  t.target = {m0, m1};
  t.coeff = {c0, c1};
  t.size = 2;
  return t;
}

ModeId with_port(ModeId m, int port) {
  m.port = static_cast<std::uint16_t>(port);
  return m;
}

ModeId with_pol(ModeId m, Pol pol) {
  m.pol = pol;
  return m;
}

struct TransferVisitor {
  ModeId in;

  Transfer operator()(const BeamSplitter& bs) const {
    const double r = std::sqrt(bs.transmissivity);
    const double s = std::sqrt(1.0 - bs.transmissivity);
    const ModeId a = with_port(in, bs.port_a);
    const ModeId b = with_port(in, bs.port_b);
    if (in.port == bs.port_a) return pair(a, r, b, s);
    return pair(a, s, b, -r);
  }
  Transfer operator()(const PhaseShift& ps) const { return single(in, std::polar(1.0, ps.angle)); }
  Transfer operator()(const HalfWavePlate& hwp) const {
    const double c = std::cos(2.0 * hwp.angle);
    const double s = std::sin(2.0 * hwp.angle);
    const ModeId h = with_pol(in, Pol::H);
    const ModeId v = with_pol(in, Pol::V);
    if (in.pol == Pol::H) return pair(h, c, v, s);
    return pair(h, s, v, -c);
  }
  Transfer operator()(const PolarizingBeamSplitter& pbs) const {
    if (in.pol == Pol::H) return single(in, 1.0);
    const int other = in.port == pbs.port_a ? pbs.port_b : pbs.port_a;
    return single(with_port(in, other), Amplitude{0.0, 1.0});
  }
  Transfer operator()(const Retarder& ret) const {
    if (in.pol == Pol::H) return single(in, 1.0);
    return single(in, std::polar(1.0, ret.angle));
  }
};

double sqrt_factorial(int n) {
  static const std::array<double, kMaxPhotons + 1> table = [] {
    std::array<double, kMaxPhotons + 1> t{};
    double f = 1.0;
    for (int i = 0; i <= kMaxPhotons; ++i) {
      if (i > 0) f *= i;
      t[static_cast<std::size_t>(i)] = std::sqrt(f);
    }
    return t;
  }();
  return table[static_cast<std::size_t>(n)];
}

double occupation_factor(const Occupation& occ) {
  double f = 1.0;
  for (const auto& [mode, n] : occ.counts()) f *= sqrt_factorial(n);
  return f;
}

}  // namespace

std::vector<int> op_ports(const ElementaryOp& op) {
  return std::visit(
      [](const auto& o) -> std::vector<int> {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, BeamSplitter> || std::is_same_v<T, PolarizingBeamSplitter>)
          return {o.port_a, o.port_b};
        else
          return {o.port};
      },
      op);
}

void validate_op(const ModeTable& table, const ElementaryOp& op) {
  const auto ports = op_ports(op);
  for (int p : ports)
    if (!table.has_port(p)) throw std::out_of_range("op references unknown port " + std::to_string(p));
  if (ports.size() == 2 && ports[0] == ports[1]) throw std::invalid_argument("two-port op needs distinct ports");
  if (const auto* bs = std::get_if<BeamSplitter>(&op)) {
    if (!(bs->transmissivity >= 0.0 && bs->transmissivity <= 1.0))
      throw std::invalid_argument("beam splitter transmissivity outside [0, 1]");
  }
}

FockState apply_op(const FockState& state, const ElementaryOp& op) {
  const ModeTable& table = state.table();
  validate_op(table, op);
  const auto ports = op_ports(op);
  auto touches = [&](ModeIndex idx) {
    const int port = table.mode(idx).port;
    for (int p : ports)
      if (p == port) return true;
    return false;
  };

  FockState out(table);
  std::vector<ModeIndex> fixed;
  std::vector<ModeIndex> moving;
  std::vector<Transfer> transfers;
  struct Branch {
    std::vector<ModeIndex> photons;
    Amplitude coeff;
  };
  std::vector<Branch> branches;
  std::vector<Branch> next;

  for (const auto& [occ, amp] : state.terms()) {
    fixed.clear();
    moving.clear();
    for (ModeIndex m : occ.photons()) (touches(m) ? moving : fixed).push_back(m);

    // Input normalization 1/√(n!) of the moving photons.
    const double in_norm = occupation_factor(Occupation::from_photons(moving));

    transfers.clear();
    for (ModeIndex m : moving) transfers.push_back(std::visit(TransferVisitor{table.mode(m)}, op));

    branches.assign(1, Branch{fixed, amp / in_norm});
    for (const Transfer& t : transfers) {
      next.clear();
      for (const Branch& b : branches) {
        for (int k = 0; k < t.size; ++k) {
          if (t.coeff[static_cast<std::size_t>(k)] == Amplitude{}) continue;
          Branch nb{b.photons, b.coeff * t.coeff[static_cast<std::size_t>(k)]};
          nb.photons.push_back(table.index(t.target[static_cast<std::size_t>(k)]));
          next.push_back(std::move(nb));
        }
      }
      branches.swap(next);
    }

    for (const Branch& b : branches) {
      const Occupation result = Occupation::from_photons(b.photons);
      // a†^k|0⟩ = √(k!)|k⟩; fixed photons contribute the same factor on both sides.
      double out_norm = 1.0;
      for (const auto& [mode, n] : result.counts())
        if (touches(mode)) out_norm *= sqrt_factorial(n);
      out.add(result, b.coeff * out_norm);
    }
  }
  out.prune();
  return out;
}

Network::Network(ModeTable table, std::vector<ElementaryOp> ops) : table_(table) {
  for (auto& op : ops) add(std::move(op));
}

Network& Network::add(ElementaryOp op) {
  validate_op(table_, op);
  ops_.push_back(std::move(op));
  return *this;
}

FockState apply_network(FockState state, const Network& network) {
  if (!(state.table() == network.table())) throw std::invalid_argument("state and network use different mode tables");
  for (const auto& op : network.ops()) state = apply_op(state, op);
  return state;
}

Selection post_select(const FockState& state, std::span<const std::pair<ModeId, int>> pattern) {
  const ModeTable& table = state.table();
  std::vector<std::pair<ModeIndex, int>> wanted;
  for (const auto& [mode, count] : pattern) {
    if (count < 0) throw std::invalid_argument("negative count in selection pattern");
    wanted.emplace_back(table.index(mode), count);
  }
  const double total = state.norm_squared();
  FockState kept(table);
  std::vector<ModeIndex> rest;
  for (const auto& [occ, amp] : state.terms()) {
    bool match = true;
    for (const auto& [idx, count] : wanted)
      if (occ.count(idx) != count) {
        match = false;
        break;
      }
    if (!match) continue;
    rest.clear();
    for (ModeIndex m : occ.photons()) {
      bool selected = false;
      for (const auto& [idx, count] : wanted) selected = selected || idx == m;
      if (!selected) rest.push_back(m);
    }
    kept.add(Occupation::from_photons(rest), amp);
  }
  const double p = kept.norm_squared();
  if (p <= 0.0 || total <= 0.0) return {FockState(table), 0.0};
  return {kept.normalized(), p / total};
}

Selection project_port_counts(const FockState& state, std::span<const std::pair<int, int>> port_counts) {
  const ModeTable& table = state.table();
  for (const auto& [port, count] : port_counts)
    if (!table.has_port(port)) throw std::out_of_range("unknown port " + std::to_string(port));
  const double total = state.norm_squared();
  FockState kept(table);
  for (const auto& [occ, amp] : state.terms()) {
    bool match = true;
    for (const auto& [port, count] : port_counts) {
      int n = 0;
      for (ModeIndex m : occ.photons()) n += table.mode(m).port == port ? 1 : 0;
      if (n != count) {
        match = false;
        break;
      }
    }
    if (match) kept.add(occ, amp);
  }
  const double p = kept.norm_squared();
  if (p <= 0.0 || total <= 0.0) return {FockState(table), 0.0};
  return {kept.normalized(), p / total};
}

PhotonPattern group_counts(const ModeTable& table, const Occupation& occ, std::span<const DetectorGroup> groups) {
  PhotonPattern pattern(groups.size(), 0);
  for (ModeIndex m : occ.photons()) {
    const ModeId id = table.mode(m);
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (groups[g].port == id.port && groups[g].pol == id.pol) ++pattern[g];
  }
  return pattern;
}

PatternDistribution pattern_distribution(const FockState& state, std::span<const DetectorGroup> groups) {
  PatternDistribution dist;
  const double total = state.norm_squared();
  if (total <= 0.0) return dist;
  for (const auto& [occ, amp] : state.terms())
    dist[group_counts(state.table(), occ, groups)] += std::norm(amp) / total;
  return dist;
}

}  // namespace fusionsim::fock
