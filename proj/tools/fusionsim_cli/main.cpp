#include <CLI11.hpp>

#include <fusionsim/fusionsim.h>

#include <functional>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "config.hpp"

namespace {

using namespace cli;

struct CommonFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::string format = "csv";
  int threads = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* sub, CommonFlags& f, bool full) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  f.out_opt = sub->add_option("--out", f.out, "Output directory");
  if (!full) return;
  f.seed_opt = sub->add_option("--seed", f.seed, "Master seed");
  sub->add_option("--format", f.format, "Tabular output format")->check(CLI::IsMember({"csv", "json"}));
  f.threads_opt = sub->add_option("--threads", f.threads, "Worker threads (results do not depend on it)");
}

template <class Config>
void load_file(const CommonFlags& f, Config& config) {
  if (!f.config.empty()) load(read_config_file(f.config), config);
}

CommonOptions common_options(const CommonFlags& f) {
  CommonOptions c;
  if (f.out_opt && f.out_opt->count()) c.out = f.out;
  c.format = f.format == "json" ? Format::kJson : Format::kCsv;
  c.threads = f.threads;
  if (c.threads < 1) throw ValidationError("threads must be at least 1");
  return c;
}

template <class T>
void override_if(CLI::Option* opt, T& target, const T& value) {
  if (opt->count()) target = value;
}

struct ExperimentFlags {
  double visibility = 1.0, transmission = 1.0, phase = 0.0, efficiency = 1.0;
  int fan_out = 4;
  std::string classification, overlaps;
  bool no_ancilla = false;
  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App* sub, bool with_phase) {
    opts["visibility"] = sub->add_option("--visibility", visibility, "Pairwise indistinguishability V");
    opts["overlaps"] = sub->add_option("--photon-overlaps", overlaps, "Eight per-photon V_i, comma separated");
    opts["transmission"] = sub->add_option("--transmission", transmission, "Per-photon transmission");
    opts["no_ancilla"] = sub->add_flag("--no-ancilla", no_ancilla, "Unboosted fusion");
    if (with_phase) opts["phase"] = sub->add_option("--phase", phase, "Birefringent phase on photon 2 (rad)");
    opts["classification"] =
        sub->add_option("--classification", classification, "photon-number or raw-clicks");
    opts["fan_out"] = sub->add_option("--fan-out", fan_out, "PPNRD sub-detectors (raw-clicks)");
    opts["efficiency"] = sub->add_option("--efficiency", efficiency, "PPNRD efficiency (raw-clicks)");
  }

  void apply(ExperimentSettings& e) const {
    override_if(opts.at("visibility"), e.visibility, visibility);
    if (opts.at("overlaps")->count()) e.photon_overlaps = parse_double_list(overlaps);
    override_if(opts.at("transmission"), e.transmission, transmission);
    if (no_ancilla) e.ancilla = false;
    if (opts.count("phase")) override_if(opts.at("phase"), e.phase, phase);
    override_if(opts.at("classification"), e.classification, classification);
    override_if(opts.at("fan_out"), e.detector.fan_out, fan_out);
    override_if(opts.at("efficiency"), e.detector.efficiency, efficiency);
  }
};

struct GridFlags {
  std::string values;
  double start = 0.0, stop = 1.0, step = 0.01;
  CLI::Option *values_opt = nullptr, *start_opt = nullptr, *stop_opt = nullptr, *step_opt = nullptr;

  void add(CLI::App* sub) {
    values_opt = sub->add_option("--values", values, "Explicit grid, comma separated");
    start_opt = sub->add_option("--start", start, "Grid start");
    stop_opt = sub->add_option("--stop", stop, "Grid stop (inclusive)");
    step_opt = sub->add_option("--step", step, "Grid step");
    values_opt->excludes(start_opt)->excludes(stop_opt)->excludes(step_opt);
  }

  void apply(GridSpec& grid) const {
    if (values_opt->count()) {
      grid = GridSpec{};
      grid.values = parse_double_list(values);
      return;
    }
    if (start_opt->count() || stop_opt->count() || step_opt->count()) grid.values.clear();
    if (start_opt->count()) grid.start = start;
    if (stop_opt->count()) grid.stop = stop;
    if (step_opt->count()) grid.step = step;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fusionsim: boosted fusion gate and percolation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fs_version());

  std::function<void()> action;

  // fusion
  CommonFlags fusion_common;
  ExperimentFlags fusion_exp;
  std::string fusion_input;
  bool heralded = false;
  auto* fusion = app.add_subcommand("fusion", "Pattern distributions and Bell-measurement success statistics");
  add_common(fusion, fusion_common, true);
  fusion_exp.add(fusion, true);
  auto* input_opt = fusion->add_option("--input", fusion_input, "all, phi+, phi-, psi+ or psi-");
  fusion->add_flag("--heralded-states", heralded, "Also run the full resource preparation");
  fusion->callback([&] {
    action = [&] {
      FusionConfig config;
      load_file(fusion_common, config);
      fusion_exp.apply(config.experiment);
      override_if(input_opt, config.input, fusion_input);
      if (heralded) config.heralded_states = true;
      override_if(fusion_common.seed_opt, config.seed, fusion_common.seed);
      validate(config);
      run_fusion(config, common_options(fusion_common));
    };
  });

  // sweep
  CommonFlags sweep_common;
  ExperimentFlags sweep_exp;
  GridFlags sweep_grid;
  std::string sweep_kind;
  bool sweep_fidelity = false;
  auto* sweep = app.add_subcommand("sweep", "Visibility or phase scans");
  add_common(sweep, sweep_common, true);
  sweep_exp.add(sweep, false);
  sweep_grid.add(sweep);
  auto* kind_opt = sweep->add_option("--kind", sweep_kind, "visibility or phase");
  sweep->add_flag("--fidelity", sweep_fidelity, "Add the heralded psi- fidelity (visibility scans)");
  sweep->callback([&] {
    action = [&] {
      SweepConfig config;
      load_file(sweep_common, config);
      override_if(kind_opt, config.kind, sweep_kind);
      sweep_exp.apply(config.experiment);
      sweep_grid.apply(config.grid);
      if (sweep_fidelity) config.fidelity = true;
      override_if(sweep_common.seed_opt, config.seed, sweep_common.seed);
      finalize(config);
      validate(config);
      run_sweep(config, common_options(sweep_common));
    };
  });

  // percolate
  CommonFlags perc_common;
  GridFlags perc_grid;
  std::string sizes, boundary, mode, observable;
  int trials = 0;
  auto* perc = app.add_subcommand("percolate", "Newman-Ziff sweeps and threshold estimate");
  add_common(perc, perc_common, true);
  perc_grid.add(perc);
  auto* sizes_opt = perc->add_option("--sizes", sizes, "Lattice sides, comma separated");
  auto* boundary_opt = perc->add_option("--boundary", boundary, "open or periodic");
  auto* mode_opt = perc->add_option("--mode", mode, "site-bond or bond-only");
  auto* obs_opt = perc->add_option("--observable", observable, "largest-cluster or spanning");
  auto* trials_opt = perc->add_option("--trials", trials, "Sweeps per lattice size");
  perc->callback([&] {
    action = [&] {
      PercolateConfig config;
      load_file(perc_common, config);
      if (sizes_opt->count()) config.sizes = parse_int_list(sizes);
      override_if(boundary_opt, config.boundary, boundary);
      override_if(mode_opt, config.mode, mode);
      override_if(obs_opt, config.observable, observable);
      override_if(trials_opt, config.trials, trials);
      perc_grid.apply(config.grid);
      override_if(perc_common.seed_opt, config.seed, perc_common.seed);
      override_if(perc_common.threads_opt, config.threads, perc_common.threads);
      validate(config);
      auto common = common_options(perc_common);
      common.threads = config.threads;
      run_percolate(config, common);
    };
  });

  // ppnrd
  CommonFlags ppnrd_common;
  int n = 0, k = 0;
  double ppnrd_eta = 1.0;
  std::string pattern;
  auto* ppnrd = app.add_subcommand("ppnrd", "PPNRD click statistics and normalization factors");
  add_common(ppnrd, ppnrd_common, false);
  auto* n_opt = ppnrd->add_option("--n", n, "Photons in one detector group");
  auto* k_opt = ppnrd->add_option("--k", k, "Sub-detectors per PPNRD");
  auto* ppnrd_eta_opt = ppnrd->add_option("--eta", ppnrd_eta, "Per-photon detection efficiency");
  auto* pattern_opt = ppnrd->add_option("--pattern", pattern, "Photon pattern for a normalization factor");
  ppnrd->callback([&] {
    action = [&] {
      PpnrdConfig config;
      load_file(ppnrd_common, config);
      override_if(n_opt, config.n, n);
      override_if(k_opt, config.k, k);
      override_if(ppnrd_eta_opt, config.eta, ppnrd_eta);
      if (pattern_opt->count()) config.pattern = parse_int_list(pattern);
      validate(config);
      run_ppnrd(config, common_options(ppnrd_common));
    };
  });

  // rate
  CommonFlags rate_common;
  double attempts = 0.0, rate_eta = 0.0, detector = 0.0, source = 0.0;
  int fold = 0;
  auto* rate = app.add_subcommand("rate", "n-fold coincidence rate and implied transmission");
  add_common(rate, rate_common, false);
  auto* attempts_opt = rate->add_option("--attempts", attempts, "Attempts per second");
  auto* rate_eta_opt = rate->add_option("--eta", rate_eta, "Per-photon end-to-end efficiency");
  auto* fold_opt = rate->add_option("--fold", fold, "Number of photons in the coincidence");
  auto* detector_opt = rate->add_option("--detector", detector, "Detector efficiency");
  auto* source_opt = rate->add_option("--source", source, "Source efficiency");
  rate->callback([&] {
    action = [&] {
      RateConfig config;
      load_file(rate_common, config);
      override_if(attempts_opt, config.attempts, attempts);
      override_if(rate_eta_opt, config.eta, rate_eta);
      override_if(fold_opt, config.fold, fold);
      if (detector_opt->count()) config.detector = detector;
      if (source_opt->count()) config.source = source;
      validate(config);
      run_rate(config, common_options(rate_common));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    action();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
