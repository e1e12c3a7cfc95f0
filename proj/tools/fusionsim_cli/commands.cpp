#include "commands.hpp"

#include <fusionsim/fusionsim.h>

#include <array>
#include <chrono>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {
namespace {

using nlohmann::json;

void check(fs_status status) {
  if (status == FS_OK) return;
  const std::string message = fs_last_error();
  if (status == FS_ERR_INVALID_ARGUMENT || status == FS_ERR_OUT_OF_RANGE) throw ValidationError(message);
  throw std::runtime_error(message);
}

struct ResultDeleter {
  void operator()(fs_fusion_result* r) const { fs_fusion_result_free(r); }
};
struct CurveDeleter {
  void operator()(fs_sweep_curve* c) const { fs_sweep_curve_free(c); }
};
using ResultPtr = std::unique_ptr<fs_fusion_result, ResultDeleter>;
using CurvePtr = std::unique_ptr<fs_sweep_curve, CurveDeleter>;

constexpr std::array<fs_bell, 4> kInputs = {FS_PHI_PLUS, FS_PHI_MINUS, FS_PSI_PLUS, FS_PSI_MINUS};

const char* bell_name(fs_bell b) {
  switch (b) {
    case FS_PHI_PLUS: return "phi+";
    case FS_PHI_MINUS: return "phi-";
    case FS_PSI_PLUS: return "psi+";
    case FS_PSI_MINUS: return "psi-";
  }
  return "?";
}

const char* outcome_name(int o) {
  static constexpr const char* names[] = {"psi-", "psi+", "phi-", "phi+", "fail"};
  return names[o];
}

fs_bell parse_bell(const std::string& name) {
  for (auto b : kInputs)
    if (name == bell_name(b)) return b;
  throw ValidationError("unknown Bell state " + name);
}

struct NativeExperiment {
  fs_experiment_config config{};
  fs_ppnrd_config ppnrd{};
  std::vector<double> overlaps;
  bool raw_clicks = false;
};

NativeExperiment native(const ExperimentSettings& e, std::uint64_t seed) {
  NativeExperiment n;
  fs_experiment_config_init(&n.config);
  n.config.overlap = e.visibility;
  n.config.transmission = e.transmission;
  n.config.ancilla_enabled = e.ancilla ? 1 : 0;
  n.config.phase = e.phase;
  n.config.seed = seed;
  if (e.photon_overlaps) {
    n.overlaps = *e.photon_overlaps;
    n.config.photon_overlaps = n.overlaps.data();
  }
  n.ppnrd = {e.detector.fan_out, e.detector.efficiency};
  n.raw_clicks = e.classification == "raw-clicks";
  return n;
}

std::filesystem::path prepare_out(const CommonOptions& common) {
  const auto dir = common.out.value_or(".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void log_config(const std::filesystem::path& dir, const std::string& command, const json& config,
                const std::vector<std::string>& outputs) {
  write_json(dir / (command + ".config.json"),
             {{"command", command}, {"version", fs_version()}, {"config", config}, {"outputs", outputs}});
}

std::string ext(Format f) { return f == Format::kCsv ? ".csv" : ".json"; }

std::string pattern_text(const std::vector<int>& counts) {
  std::string s;
  for (std::size_t i = 0; i < counts.size(); ++i) s += (i ? "-" : "") + std::to_string(counts[i]);
  return s;
}

fs_outcome_stats outcome_stats(NativeExperiment& n) {
  fs_outcome_stats stats{};
  check(fs_success_probability(&n.config, n.raw_clicks ? 1 : 0, &n.ppnrd, &stats));
  return stats;
}

struct Heralded {
  double probability = 0.0;
  std::array<double, 4> fidelity{};  // indexed by fs_bell
};

std::array<Heralded, FS_NUM_OUTCOMES> heralded_states(NativeExperiment& n) {
  fs_fusion_result* raw = nullptr;
  check(fs_fusion_run_full(&n.config, &raw));
  ResultPtr result(raw);
  std::array<Heralded, FS_NUM_OUTCOMES> out{};
  for (int o = 0; o < FS_NUM_OUTCOMES; ++o) {
    double re[16], im[16];
    check(fs_fusion_result_heralded_state(result.get(), static_cast<fs_outcome>(o), &out[o].probability, re, im));
    for (auto b : kInputs) check(fs_bell_fidelity(re, im, b, &out[o].fidelity[b]));
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void run_fusion(const FusionConfig& config, const CommonOptions& common) {
  auto n = native(config.experiment, config.seed);
  std::vector<fs_bell> inputs;
  if (config.input == "all")
    inputs.assign(kInputs.begin(), kInputs.end());
  else
    inputs.push_back(parse_bell(config.input));

  Table patterns("fusion-patterns", 1, {"input", "pattern", "outcome", "probability"});
  json groups = json::array();
  for (auto input : inputs) {
    fs_fusion_result* raw = nullptr;
    check(fs_fusion_run(&n.config, input, &raw));
    ResultPtr result(raw);
    const std::size_t g = fs_fusion_result_group_count(result.get());
    if (groups.empty()) {
      for (std::size_t i = 0; i < g; ++i) {
        int port = 0, pol = 0;
        check(fs_fusion_result_group(result.get(), i, &port, &pol));
        groups.push_back({{"port", port}, {"pol", pol == 0 ? "H" : "V"}});
      }
    }
    std::vector<int> counts(g);
    for (std::size_t i = 0; i < fs_fusion_result_pattern_count(result.get()); ++i) {
      double prob = 0.0;
      fs_outcome outcome = FS_OUTCOME_FAIL;
      check(fs_fusion_result_pattern(result.get(), i, counts.data(), counts.size(), &prob, &outcome));
      patterns.add_row({bell_name(input), pattern_text(counts), outcome_name(outcome), prob});
    }
  }

  const auto stats = outcome_stats(n);
  Table outcomes("fusion-outcomes", 1, {"outcome", "probability", "stderr"});
  for (int o = 0; o < FS_NUM_OUTCOMES; ++o) {
    const double p = config.input == "all" ? stats.mixture[o] : stats.confusion[inputs.front()][o];
    outcomes.add_row({outcome_name(o), p, 0.0});
  }

  json per_input = json::object(), confusion = json::object();
  for (auto b : kInputs) {
    per_input[bell_name(b)] = stats.per_input_success[b];
    json row = json::object();
    for (int o = 0; o < FS_NUM_OUTCOMES; ++o) row[outcome_name(o)] = stats.confusion[b][o];
    confusion[bell_name(b)] = row;
  }
  const double success = config.input == "all" ? stats.total_success : stats.per_input_success[inputs.front()];
  json summary = {{"groups", groups},
                  {"success_probability", success},
                  {"total_success", stats.total_success},
                  {"per_input_success", per_input},
                  {"confusion", confusion}};

  std::optional<Table> heralded;
  if (config.heralded_states) {
    heralded.emplace("fusion-heralded", 1,
                     std::vector<std::string>{"outcome", "probability", "fidelity_phi_plus", "fidelity_phi_minus",
                                              "fidelity_psi_plus", "fidelity_psi_minus"});
    const auto states = heralded_states(n);
    for (int o = 0; o < FS_NUM_OUTCOMES; ++o) {
      const auto& h = states[o];
      heralded->add_row({outcome_name(o), h.probability, h.fidelity[FS_PHI_PLUS], h.fidelity[FS_PHI_MINUS],
                         h.fidelity[FS_PSI_PLUS], h.fidelity[FS_PSI_MINUS]});
    }
  }

  const auto dir = prepare_out(common);
  std::vector<std::string> outputs{"fusion_patterns" + ext(common.format), "fusion_outcomes" + ext(common.format),
                                   "fusion_summary.json"};
  patterns.write(dir / "fusion_patterns", common.format);
  outcomes.write(dir / "fusion_outcomes", common.format);
  write_json(dir / "fusion_summary.json", summary);
  if (heralded) {
    heralded->write(dir / "fusion_heralded", common.format);
    outputs.push_back("fusion_heralded" + ext(common.format));
  }
  log_config(dir, "fusion", to_json(config), outputs);
}

void run_sweep(const SweepConfig& config, const CommonOptions& common) {
  const auto grid = config.grid.resolve();
  std::vector<std::string> outputs;
  std::optional<Table> table;
  json summary = json::object();

  if (config.kind == "visibility") {
    std::vector<std::string> cols{"visibility", "total_success", "psi_minus", "psi_plus", "phi_minus", "phi_plus",
                                  "fail"};
    if (config.fidelity) cols.push_back("fidelity_psi_minus");
    table.emplace("sweep-visibility", 1, cols);
    for (double v : grid) {
      auto settings = config.experiment;
      settings.visibility = v;
      auto n = native(settings, config.seed);
      const auto stats = outcome_stats(n);
      std::vector<json> row{v, stats.total_success};
      for (int o = 0; o < FS_NUM_OUTCOMES; ++o) row.emplace_back(stats.mixture[o]);
      if (config.fidelity) row.emplace_back(heralded_states(n)[FS_OUTCOME_PSI_MINUS].fidelity[FS_PSI_MINUS]);
      table->add_row(std::move(row));
    }
  } else {
    table.emplace("sweep-phase", 1,
                  std::vector<std::string>{"phase", "p_pp", "p_pm", "p_mp", "p_mm", "correlation",
                                           "herald_probability"});
    auto n = native(config.experiment, config.seed);
    std::vector<fs_fringe_point> points(grid.size());
    check(fs_phase_sweep(&n.config, grid.data(), grid.size(), points.data()));
    for (const auto& pt : points)
      table->add_row({pt.phase, pt.diagonal[0], pt.diagonal[1], pt.diagonal[2], pt.diagonal[3], pt.correlation,
                      pt.herald_probability});
    double visibility = 0.0;
    check(fs_fringe_visibility(points.data(), points.size(), &visibility));
    summary["fringe_visibility"] = visibility;
  }

  const auto dir = prepare_out(common);
  const std::string stem = "sweep_" + config.kind;
  table->write(dir / stem, common.format);
  outputs.push_back(stem + ext(common.format));
  if (!summary.empty()) {
    write_json(dir / (stem + "_summary.json"), summary);
    outputs.push_back(stem + "_summary.json");
  }
  json logged = to_json(config);
  logged["grid_values"] = grid;
  log_config(dir, "sweep", logged, outputs);
}

void run_percolate(const PercolateConfig& config, const CommonOptions& common) {
  const auto grid = config.grid.resolve();
  fs_sweep_request req{};
  req.boundary = config.boundary == "open" ? FS_BOUNDARY_OPEN : FS_BOUNDARY_PERIODIC;
  req.mode = config.mode == "bond-only" ? FS_PERC_BOND_ONLY : FS_PERC_SITE_BOND;
  req.observable = config.observable == "spanning" ? FS_OBS_SPANNING : FS_OBS_LARGEST_CLUSTER;
  req.grid = grid.data();
  req.grid_len = grid.size();
  req.trials = config.trials;
  req.seed = config.seed;
  req.threads = config.threads;

  std::vector<CurvePtr> curves;
  Table table("percolation", 1, {"L", "boundary", "mode", "p", "mean_fraction", "stderr", "trials", "seed"});
  for (int L : config.sizes) {
    const auto t0 = std::chrono::steady_clock::now();
    req.side = L;
    fs_sweep_curve* raw = nullptr;
    check(fs_percolation_sweep(&req, &raw));
    curves.emplace_back(raw);
    std::cerr << "percolate: L=" << L << " " << config.trials << " trials in " << seconds_since(t0) << " s\n";
    for (std::size_t i = 0; i < fs_sweep_curve_size(raw); ++i) {
      double p = 0.0, mean = 0.0, se = 0.0;
      check(fs_sweep_curve_point(raw, i, &p, &mean, &se));
      table.add_row({L, config.boundary, config.mode, p, mean, se, config.trials, config.seed});
    }
  }

  const auto dir = prepare_out(common);
  table.write(dir / "percolation", common.format);
  std::vector<std::string> outputs{"percolation" + ext(common.format)};
  json logged = to_json(config);
  logged["grid_values"] = grid;
  log_config(dir, "percolate", logged, outputs);

  json report = {{"method", "crossing-0.5"}, {"sizes", config.sizes}, {"mode", config.mode},
                 {"boundary", config.boundary}, {"observable", config.observable}};
  report["grid_step"] = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
  if (curves.size() >= 2) {
    std::vector<const fs_sweep_curve*> ptrs;
    for (const auto& c : curves) ptrs.push_back(c.get());
    fs_threshold th{};
    check(fs_estimate_threshold(ptrs.data(), ptrs.size(), &th));
    report["estimate"] = th.crossing;
    report["max_slope_estimate"] = th.max_slope;
    report["grid_step"] = th.grid_step;
  } else {
    double crossing = 0.0;
    check(fs_sweep_curve_crossing(curves.front().get(), 0.5, &crossing));
    report["estimate"] = crossing;
  }
  json slopes = json::object();
  for (const auto& c : curves) {
    double s = 0.0;
    check(fs_sweep_curve_slope_at(c.get(), report["estimate"].get<double>(), &s));
    slopes[std::to_string(fs_sweep_curve_side(c.get()))] = s;
  }
  report["slope_at_estimate"] = slopes;
  write_json(dir / "threshold.json", report);
  outputs.push_back("threshold.json");
  log_config(dir, "percolate", logged, outputs);
}

void run_ppnrd(const PpnrdConfig& config, const CommonOptions& common) {
  const fs_ppnrd_config det{config.k, config.eta};
  std::vector<double> response(static_cast<std::size_t>(config.k) + 1);
  check(fs_ppnrd_response(config.n, &det, response.data(), response.size()));
  json report = {{"config", to_json(config)},
                 {"response", response},
                 {"resolved_probability", config.n <= config.k ? response[config.n] : 0.0}};
  if (config.pattern) {
    double factor = 0.0;
    check(fs_normalization_factor(config.pattern->data(), config.pattern->size(), &det, &factor));
    report["normalization_factor"] = factor;
  }
  std::cout << report.dump(2) << "\n";
  if (common.out) write_json(prepare_out(common) / "ppnrd.json", report);
}

void run_rate(const RateConfig& config, const CommonOptions& common) {
  double rate = 0.0;
  check(fs_nfold_rate(config.attempts, config.eta, config.fold, &rate));
  json report = {{"config", to_json(config)}, {"rate_hz", rate}};
  if (config.detector) {
    double t = 0.0;
    check(fs_transmission_efficiency(config.eta, *config.detector, *config.source, &t));
    report["transmission"] = t;
  }
  std::cout << report.dump(2) << "\n";
  if (common.out) write_json(prepare_out(common) / "rate.json", report);
}

}  // namespace cli
