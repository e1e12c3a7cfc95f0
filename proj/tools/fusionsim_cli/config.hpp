#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cli {

/// Bad flags, malformed config files, out-of-range values. Exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inclusive arithmetic grid, or an explicit list of values.
struct GridSpec {
  std::optional<double> start, stop, step;
  std::vector<double> values;

  std::vector<double> resolve() const;
  nlohmann::json to_json() const;
};

struct DetectorSettings {
  int fan_out = 4;
  double efficiency = 1.0;
};

struct ExperimentSettings {
  double visibility = 1.0;
  std::optional<std::vector<double>> photon_overlaps;
  double transmission = 1.0;
  bool ancilla = true;
  double phase = 0.0;
  std::string classification = "photon-number";  // or "raw-clicks"
  DetectorSettings detector;
};

struct FusionConfig {
  ExperimentSettings experiment;
  std::string input = "all";  // all, phi+, phi-, psi+, psi-
  bool heralded_states = false;
  std::uint64_t seed = 0;
};

struct SweepConfig {
  std::string kind = "visibility";  // or "phase"
  GridSpec grid;
  ExperimentSettings experiment;
  bool fidelity = false;
  std::uint64_t seed = 0;
};

struct PercolateConfig {
  std::vector<int> sizes{10, 100};
  std::string boundary = "open";
  std::string mode = "site-bond";
  std::string observable = "largest-cluster";
  GridSpec grid{0.0, 1.0, 0.002, {}};
  int trials = 200;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct PpnrdConfig {
  int n = 4;
  int k = 4;
  double eta = 1.0;
  std::optional<std::vector<int>> pattern;
};

struct RateConfig {
  double attempts = 7.1e6;
  double eta = 0.16;
  int fold = 8;
  std::optional<double> detector;
  std::optional<double> source;
};

/// Parses a JSON document; unknown keys and wrong types raise ValidationError.
nlohmann::json read_config_file(const std::filesystem::path& path);

void load(const nlohmann::json& doc, FusionConfig& config);
void load(const nlohmann::json& doc, SweepConfig& config);
void load(const nlohmann::json& doc, PercolateConfig& config);
void load(const nlohmann::json& doc, PpnrdConfig& config);
void load(const nlohmann::json& doc, RateConfig& config);

/// Fills the kind-specific default grid if none was given.
void finalize(SweepConfig& config);

void validate(const FusionConfig& config);
void validate(const SweepConfig& config);
void validate(const PercolateConfig& config);
void validate(const PpnrdConfig& config);
void validate(const RateConfig& config);

nlohmann::json to_json(const FusionConfig& config);
nlohmann::json to_json(const SweepConfig& config);
nlohmann::json to_json(const PercolateConfig& config);
nlohmann::json to_json(const PpnrdConfig& config);
nlohmann::json to_json(const RateConfig& config);

/// "0.9,0.95,1" -> {0.9, 0.95, 1}
std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace cli
