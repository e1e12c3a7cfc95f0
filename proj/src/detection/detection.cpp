#include "detection/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fusionsim::detection {

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kPsiMinus:
      return "PsiMinus";
    case Outcome::kPsiPlus:
      return "PsiPlus";
    case Outcome::kPhiMinus:
      return "PhiMinus";
    case Outcome::kPhiPlus:
      return "PhiPlus";
    case Outcome::kFail:
      return "Fail";
  }
  return "?";
}

Outcome outcome_for(BellLabel label) {
  switch (label) {
    case BellLabel::kPhiPlus:
      return Outcome::kPhiPlus;
    case BellLabel::kPhiMinus:
      return Outcome::kPhiMinus;
    case BellLabel::kPsiPlus:
      return Outcome::kPsiPlus;
    case BellLabel::kPsiMinus:
      return Outcome::kPsiMinus;
  }
  return Outcome::kFail;
}

Outcome DiscriminationTable::classify(const PhotonPattern& pattern) const {
  auto it = entries_.find(pattern);
  return it == entries_.end() ? Outcome::kFail : it->second;
}

DiscriminationTable derive_discrimination_table(const std::array<PatternDistribution, 4>& ideal, double tol) {
  std::map<PhotonPattern, int> seen_by;  // -1 once two inputs share a pattern
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    for (const auto& [pattern, p] : ideal[i]) {
      if (p <= tol) continue;
      auto [it, inserted] = seen_by.emplace(pattern, static_cast<int>(i));
      if (!inserted && it->second != static_cast<int>(i)) it->second = -1;
    }
  }
  std::map<PhotonPattern, Outcome> entries;
  for (const auto& [pattern, who] : seen_by)
    entries[pattern] = who < 0 ? Outcome::kFail : outcome_for(experiment::kBellLabels[static_cast<std::size_t>(who)]);
  return DiscriminationTable(std::move(entries));
}

DiscriminationTable ideal_table(bool ancilla_enabled) {
  experiment::ExperimentConfig ideal;
  ideal.ancilla_enabled = ancilla_enabled;
  std::array<PatternDistribution, 4> dists;
  for (std::size_t i = 0; i < 4; ++i)
    dists[i] = experiment::run_fusion(experiment::kBellLabels[i], ideal).distribution;
  return derive_discrimination_table(dists);
}

void PpnrdConfig::validate() const {
  if (fan_out < 1) throw std::invalid_argument("PPNRD fan-out must be at least 1");
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw std::invalid_argument("detector efficiency must be in [0, 1]");
}

std::vector<double> ppnrd_response(int photons, const PpnrdConfig& config) {
  config.validate();
  if (photons < 0) throw std::invalid_argument("photon number must be non-negative");
  const int k = config.fan_out;
  const double eta = config.efficiency;
  // occupied[j]: probability that j sub-detectors have registered a photon.
  std::vector<double> occupied(static_cast<std::size_t>(k) + 1, 0.0);
  occupied[0] = 1.0;
  for (int n = 0; n < photons; ++n) {
    std::vector<double> next(occupied.size(), 0.0);
    for (int j = 0; j <= k; ++j) {
      const double p = occupied[static_cast<std::size_t>(j)];
      if (p == 0.0) continue;
      next[static_cast<std::size_t>(j)] += p * ((1.0 - eta) + eta * j / k);
      if (j < k) next[static_cast<std::size_t>(j) + 1] += p * eta * (k - j) / k;
    }
    occupied.swap(next);
  }
  return occupied;
}

double normalization_factor(const PhotonPattern& pattern, const PpnrdConfig& config) {
  double f = 1.0;
  for (int n : pattern) {
    if (n > config.fan_out) return 0.0;
    f *= ppnrd_response(n, config)[static_cast<std::size_t>(n)];
  }
  return f;
}

std::map<PhotonPattern, double> normalization_factors(const DiscriminationTable& table, const PpnrdConfig& config) {
  std::map<PhotonPattern, double> out;
  for (const auto& [pattern, outcome] : table.entries()) out[pattern] = normalization_factor(pattern, config);
  return out;
}

PatternDistribution click_distribution(const PatternDistribution& photons, const PpnrdConfig& config) {
  config.validate();
  PatternDistribution clicks;
  for (const auto& [pattern, p] : photons) {
    std::vector<std::vector<double>> responses;
    for (int n : pattern) responses.push_back(ppnrd_response(n, config));
    // Enumerate click combinations group by group.
    PhotonPattern current(pattern.size(), 0);
    auto recurse = [&](auto&& self, std::size_t g, double weight) -> void {
      if (weight == 0.0) return;
      if (g == pattern.size()) {
        clicks[current] += weight;
        return;
      }
      for (std::size_t c = 0; c < responses[g].size(); ++c) {
        current[g] = static_cast<int>(c);
        self(self, g + 1, weight * responses[g][c]);
      }
    };
    recurse(recurse, 0, p);
  }
  return clicks;
}

PatternDistribution correct_click_statistics(const PatternDistribution& clicks, int total_photons,
                                             const PpnrdConfig& config) {
  PatternDistribution corrected;
  for (const auto& [pattern, p] : clicks) {
    int total = 0;
    for (int c : pattern) total += c;
    if (total != total_photons) continue;
    const double f = normalization_factor(pattern, config);
    if (f > 0.0) corrected[pattern] = p / f;
  }
  return corrected;
}

std::array<double, 5> classify_distribution(const PatternDistribution& dist, const DiscriminationTable& table) {
  std::array<double, 5> out{};
  for (const auto& [pattern, p] : dist) out[static_cast<std::size_t>(table.classify(pattern))] += p;
  return out;
}

OutcomeStats success_probability(const experiment::ExperimentConfig& config, ClassificationMode mode,
                                 const PpnrdConfig& ppnrd) {
  config.validate();
  const DiscriminationTable table = ideal_table(config.ancilla_enabled);
  OutcomeStats stats;
  for (std::size_t i = 0; i < 4; ++i) {
    const BellLabel label = experiment::kBellLabels[i];
    PatternDistribution dist = experiment::run_fusion(label, config).distribution;
    double lost = 0.0;
    if (mode == ClassificationMode::kRawClicks) {
      for (auto& [pattern, p] : dist) {
        const double kept = p * normalization_factor(pattern, ppnrd);
        lost += p - kept;
        p = kept;
      }
    }
    auto row = classify_distribution(dist, table);
    row[static_cast<std::size_t>(Outcome::kFail)] += lost;
    stats.confusion[i] = row;
    stats.per_input_success[i] = row[static_cast<std::size_t>(outcome_for(label))];
    for (std::size_t o = 0; o < 5; ++o) stats.mixture[o] += 0.25 * row[o];
  }
  for (std::size_t o = 0; o < 4; ++o) stats.total_success += stats.mixture[o];
  return stats;
}

HeraldedStates heralded_states(const experiment::FusionResult& result, const DiscriminationTable& table) {
  HeraldedStates out;
  for (const auto& [pattern, rho] : result.pair_states) {
    const auto o = static_cast<std::size_t>(table.classify(pattern));
    out.pair_state[o] += rho;
  }
  for (std::size_t o = 0; o < 5; ++o) {
    out.probability[o] = out.pair_state[o].trace();
    out.pair_state[o] = out.pair_state[o].normalized();
  }
  return out;
}

double estimate_fidelity_singlet(double xx, double yy, double zz) {
  for (double c : {xx, yy, zz})
    if (!(c >= -1.0 && c <= 1.0)) throw std::invalid_argument("correlation outside [-1, 1]");
  return std::clamp((1.0 - xx - yy - zz) / 4.0, 0.0, 1.0);
}

double nfold_rate(double attempt_rate, double efficiency, int fold) {
  if (!(attempt_rate >= 0.0) || !std::isfinite(attempt_rate)) throw std::invalid_argument("attempt rate must be >= 0");
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw std::invalid_argument("efficiency must be in [0, 1]");
  if (fold < 1) throw std::invalid_argument("fold must be >= 1");
  return attempt_rate * std::pow(efficiency, fold);
}

double transmission_efficiency(double end_to_end, double detector, double source) {
  auto in_unit = [](double x) { return x > 0.0 && x <= 1.0; };
  if (!in_unit(end_to_end) || !in_unit(detector) || !in_unit(source))
    throw std::invalid_argument("efficiencies must be in (0, 1]");
  return end_to_end / (detector * source);
}

}  // namespace fusionsim::detection
