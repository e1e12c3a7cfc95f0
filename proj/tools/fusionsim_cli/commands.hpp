#pragma once

#include <filesystem>
#include <optional>

#include "config.hpp"
#include "output.hpp"

namespace cli {

struct CommonOptions {
  std::optional<std::filesystem::path> out;
  Format format = Format::kCsv;
  int threads = 1;
};

void run_fusion(const FusionConfig& config, const CommonOptions& common);
void run_sweep(const SweepConfig& config, const CommonOptions& common);
void run_percolate(const PercolateConfig& config, const CommonOptions& common);
void run_ppnrd(const PpnrdConfig& config, const CommonOptions& common);
void run_rate(const RateConfig& config, const CommonOptions& common);

}  // namespace cli
