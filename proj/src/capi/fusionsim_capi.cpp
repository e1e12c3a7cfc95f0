#include "fusionsim/fusionsim.h"

#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "detection/detection.hpp"
#include "experiment/experiment.hpp"
#include "percolation/newman_ziff.hpp"
#include "percolation/threshold.hpp"

using namespace fusionsim;

struct fs_fusion_result {
  experiment::FusionResult result;
  detection::DiscriminationTable table;
  std::vector<std::pair<fock::PhotonPattern, double>> patterns;
  bool full = false;
  detection::HeraldedStates heralded;
};

struct fs_sweep_curve {
  percolation::SweepCurve curve;
};

namespace {

thread_local std::string g_last_error;

fs_status fail(fs_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <class F>
fs_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FS_OK;
  } catch (const std::out_of_range& e) {
    return fail(FS_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(FS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(FS_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(FS_ERR_RUNTIME, "unknown error");
  }
}

#define FS_REQUIRE(ptr) \
  if (!(ptr)) return fail(FS_ERR_NULL_POINTER, #ptr " is null")

experiment::ExperimentConfig to_cpp(const fs_experiment_config& c) {
  experiment::ExperimentConfig cfg;
  cfg.overlap = c.overlap;
  cfg.transmission = c.transmission;
  cfg.ancilla_enabled = c.ancilla_enabled != 0;
  cfg.phase = c.phase;
  cfg.seed = c.seed;
  if (c.photon_overlaps) {
    std::array<double, experiment::kNumPhotons> v{};
    std::copy(c.photon_overlaps, c.photon_overlaps + experiment::kNumPhotons, v.begin());
    cfg.photon_overlaps = v;
  }
  cfg.validate();
  return cfg;
}

detection::PpnrdConfig to_cpp(const fs_ppnrd_config& c) {
  detection::PpnrdConfig cfg{c.fan_out, c.efficiency};
  cfg.validate();
  return cfg;
}

percolation::Boundary to_cpp(fs_boundary b) {
  switch (b) {
    case FS_BOUNDARY_OPEN: return percolation::Boundary::kOpen;
    case FS_BOUNDARY_PERIODIC: return percolation::Boundary::kPeriodic;
  }
  throw std::invalid_argument("unknown boundary");
}

percolation::PercMode to_cpp(fs_perc_mode m) {
  switch (m) {
    case FS_PERC_BOND_ONLY: return percolation::PercMode::kBondOnly;
    case FS_PERC_SITE_BOND: return percolation::PercMode::kSiteBondEqual;
  }
  throw std::invalid_argument("unknown percolation mode");
}

percolation::Observable to_cpp(fs_observable o) {
  switch (o) {
    case FS_OBS_LARGEST_CLUSTER: return percolation::Observable::kLargestCluster;
    case FS_OBS_SPANNING: return percolation::Observable::kSpanning;
  }
  throw std::invalid_argument("unknown observable");
}

fs_fusion_result* wrap(experiment::FusionResult r, bool ancilla, bool full) {
  auto* out = new fs_fusion_result{std::move(r), detection::ideal_table(ancilla), {}, full, {}};
  out->patterns.assign(out->result.distribution.begin(), out->result.distribution.end());
  if (full) out->heralded = detection::heralded_states(out->result, out->table);
  return out;
}

}  // namespace

extern "C" {

const char* fs_version(void) { return "0.1.0"; }

const char* fs_last_error(void) { return g_last_error.c_str(); }

const char* fs_status_string(fs_status status) {
  switch (status) {
    case FS_OK: return "ok";
    case FS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FS_ERR_OUT_OF_RANGE: return "out of range";
    case FS_ERR_NULL_POINTER: return "null pointer";
    case FS_ERR_RUNTIME: return "runtime error";
  }
  return "unknown status";
}

void fs_experiment_config_init(fs_experiment_config* config) {
  if (!config) return;
  *config = fs_experiment_config{1.0, 1.0, 1, 0.0, 0, nullptr};
}

fs_status fs_fusion_run(const fs_experiment_config* config, fs_bell input, fs_fusion_result** out) {
  FS_REQUIRE(config);
  FS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    if (input < FS_PHI_PLUS || input > FS_PSI_MINUS) throw std::invalid_argument("unknown Bell input");
    const auto cfg = to_cpp(*config);
    *out = wrap(experiment::run_fusion(static_cast<experiment::BellLabel>(input), cfg), cfg.ancilla_enabled, false);
  });
}

fs_status fs_fusion_run_full(const fs_experiment_config* config, fs_fusion_result** out) {
  FS_REQUIRE(config);
  FS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto cfg = to_cpp(*config);
    *out = wrap(experiment::run_fusion_full(cfg), cfg.ancilla_enabled, true);
  });
}

void fs_fusion_result_free(fs_fusion_result* result) { delete result; }

size_t fs_fusion_result_group_count(const fs_fusion_result* result) {
  return result ? result->result.groups.size() : 0;
}

fs_status fs_fusion_result_group(const fs_fusion_result* result, size_t index, int* port, int* pol) {
  FS_REQUIRE(result);
  if (index >= result->result.groups.size()) return fail(FS_ERR_OUT_OF_RANGE, "group index out of range");
  const auto& g = result->result.groups[index];
  if (port) *port = g.port;
  if (pol) *pol = static_cast<int>(g.pol);
  return FS_OK;
}

size_t fs_fusion_result_pattern_count(const fs_fusion_result* result) {
  return result ? result->patterns.size() : 0;
}

fs_status fs_fusion_result_pattern(const fs_fusion_result* result, size_t index, int* counts, size_t counts_len,
                                   double* probability, fs_outcome* outcome) {
  FS_REQUIRE(result);
  if (index >= result->patterns.size()) return fail(FS_ERR_OUT_OF_RANGE, "pattern index out of range");
  const auto& [pattern, prob] = result->patterns[index];
  if (counts) {
    if (counts_len < pattern.size()) return fail(FS_ERR_INVALID_ARGUMENT, "counts buffer too small");
    std::copy(pattern.begin(), pattern.end(), counts);
  }
  if (probability) *probability = prob;
  if (outcome) *outcome = static_cast<fs_outcome>(result->table.classify(pattern));
  return FS_OK;
}

double fs_fusion_result_herald_probability(const fs_fusion_result* result) {
  return result ? result->result.herald_probability : 0.0;
}

double fs_fusion_result_rate_factor(const fs_fusion_result* result) {
  return result ? result->result.rate_factor : 0.0;
}

fs_status fs_fusion_result_heralded_state(const fs_fusion_result* result, fs_outcome outcome, double* probability,
                                          double* rho_re, double* rho_im) {
  FS_REQUIRE(result);
  if (!result->full) return fail(FS_ERR_INVALID_ARGUMENT, "heralded states need the full resource preparation");
  if (outcome < FS_OUTCOME_PSI_MINUS || outcome > FS_OUTCOME_FAIL)
    return fail(FS_ERR_OUT_OF_RANGE, "unknown outcome");
  const auto o = static_cast<std::size_t>(outcome);
  if (probability) *probability = result->heralded.probability[o];
  const auto& rho = result->heralded.pair_state[o].rho;
  for (std::size_t i = 0; i < 16; ++i) {
    if (rho_re) rho_re[i] = rho[i].real();
    if (rho_im) rho_im[i] = rho[i].imag();
  }
  return FS_OK;
}

fs_status fs_bell_fidelity(const double* rho_re, const double* rho_im, fs_bell target, double* out) {
  FS_REQUIRE(rho_re);
  FS_REQUIRE(rho_im);
  FS_REQUIRE(out);
  return guarded([&] {
    if (target < FS_PHI_PLUS || target > FS_PSI_MINUS) throw std::invalid_argument("unknown Bell state");
    experiment::TwoQubitState state;
    for (std::size_t i = 0; i < 16; ++i) state.rho[i] = {rho_re[i], rho_im[i]};
    *out = experiment::fidelity(state, static_cast<experiment::BellLabel>(target));
  });
}

fs_status fs_success_probability(const fs_experiment_config* config, int raw_clicks, const fs_ppnrd_config* ppnrd,
                                 fs_outcome_stats* out) {
  FS_REQUIRE(config);
  FS_REQUIRE(out);
  if (raw_clicks && !ppnrd) return fail(FS_ERR_NULL_POINTER, "raw-click classification needs a PPNRD config");
  return guarded([&] {
    const auto cfg = to_cpp(*config);
    const detection::PpnrdConfig det = ppnrd ? to_cpp(*ppnrd) : detection::PpnrdConfig{};
    const auto mode = raw_clicks ? detection::ClassificationMode::kRawClicks
                                 : detection::ClassificationMode::kPhotonNumber;
    const auto stats = detection::success_probability(cfg, mode, det);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t o = 0; o < 5; ++o) out->confusion[i][o] = stats.confusion[i][o];
      out->per_input_success[i] = stats.per_input_success[i];
    }
    for (std::size_t o = 0; o < 5; ++o) out->mixture[o] = stats.mixture[o];
    out->total_success = stats.total_success;
  });
}

fs_status fs_phase_sweep(const fs_experiment_config* config, const double* phases, size_t count,
                         fs_fringe_point* out) {
  FS_REQUIRE(config);
  if (count > 0) {
    FS_REQUIRE(phases);
    FS_REQUIRE(out);
  }
  return guarded([&] {
    const auto cfg = to_cpp(*config);
    const auto points = experiment::phase_sweep(std::span<const double>(phases, count), cfg);
    for (std::size_t i = 0; i < points.size(); ++i) {
      out[i].phase = points[i].phase;
      std::copy(points[i].diagonal.begin(), points[i].diagonal.end(), out[i].diagonal);
      out[i].correlation = points[i].correlation;
      out[i].herald_probability = points[i].herald_probability;
    }
  });
}

fs_status fs_fringe_visibility(const fs_fringe_point* points, size_t count, double* out) {
  FS_REQUIRE(points);
  FS_REQUIRE(out);
  return guarded([&] {
    std::vector<experiment::FringePoint> pts(count);
    for (std::size_t i = 0; i < count; ++i) {
      pts[i].phase = points[i].phase;
      std::copy(points[i].diagonal, points[i].diagonal + 4, pts[i].diagonal.begin());
    }
    *out = experiment::fringe_visibility(pts);
  });
}

fs_status fs_hom_dip(double overlap, double* coincidence) {
  FS_REQUIRE(coincidence);
  return guarded([&] { *coincidence = experiment::hom_dip(overlap); });
}

fs_status fs_ppnrd_response(int photons, const fs_ppnrd_config* config, double* out, size_t out_len) {
  FS_REQUIRE(config);
  FS_REQUIRE(out);
  return guarded([&] {
    const auto r = detection::ppnrd_response(photons, to_cpp(*config));
    if (out_len < r.size()) throw std::invalid_argument("output buffer needs fan_out + 1 entries");
    std::copy(r.begin(), r.end(), out);
  });
}

fs_status fs_normalization_factor(const int* pattern, size_t len, const fs_ppnrd_config* config, double* out) {
  FS_REQUIRE(config);
  FS_REQUIRE(out);
  if (len > 0) FS_REQUIRE(pattern);
  return guarded([&] {
    *out = detection::normalization_factor(fock::PhotonPattern(pattern, pattern + len), to_cpp(*config));
  });
}

fs_status fs_estimate_fidelity_singlet(double xx, double yy, double zz, double* out) {
  FS_REQUIRE(out);
  return guarded([&] { *out = detection::estimate_fidelity_singlet(xx, yy, zz); });
}

fs_status fs_nfold_rate(double attempt_rate, double efficiency, int fold, double* out) {
  FS_REQUIRE(out);
  return guarded([&] { *out = detection::nfold_rate(attempt_rate, efficiency, fold); });
}

fs_status fs_transmission_efficiency(double end_to_end, double detector, double source, double* out) {
  FS_REQUIRE(out);
  return guarded([&] { *out = detection::transmission_efficiency(end_to_end, detector, source); });
}

fs_status fs_percolation_sweep(const fs_sweep_request* request, fs_sweep_curve** out) {
  FS_REQUIRE(request);
  FS_REQUIRE(out);
  *out = nullptr;
  if (request->grid_len > 0) FS_REQUIRE(request->grid);
  return guarded([&] {
    percolation::SweepRequest req;
    req.side = request->side;
    req.boundary = to_cpp(request->boundary);
    req.mode = to_cpp(request->mode);
    req.observable = to_cpp(request->observable);
    req.grid.assign(request->grid, request->grid + request->grid_len);
    req.trials = request->trials;
    req.seed = request->seed;
    req.threads = request->threads;
    *out = new fs_sweep_curve{percolation::simulate_sweep(req)};
  });
}

void fs_sweep_curve_free(fs_sweep_curve* curve) { delete curve; }

size_t fs_sweep_curve_size(const fs_sweep_curve* curve) { return curve ? curve->curve.p.size() : 0; }

int fs_sweep_curve_side(const fs_sweep_curve* curve) { return curve ? curve->curve.side : 0; }

int fs_sweep_curve_trials(const fs_sweep_curve* curve) { return curve ? curve->curve.trials : 0; }

fs_status fs_sweep_curve_point(const fs_sweep_curve* curve, size_t index, double* p, double* mean,
                               double* stderr_out) {
  FS_REQUIRE(curve);
  const auto& c = curve->curve;
  if (index >= c.p.size()) return fail(FS_ERR_OUT_OF_RANGE, "grid index out of range");
  if (p) *p = c.p[index];
  if (mean) *mean = c.mean[index];
  if (stderr_out) *stderr_out = c.stderr_[index];
  return FS_OK;
}

fs_status fs_sweep_curve_slope_at(const fs_sweep_curve* curve, double p, double* out) {
  FS_REQUIRE(curve);
  FS_REQUIRE(out);
  return guarded([&] { *out = percolation::slope_at(curve->curve, p); });
}

fs_status fs_sweep_curve_crossing(const fs_sweep_curve* curve, double level, double* out) {
  FS_REQUIRE(curve);
  FS_REQUIRE(out);
  return guarded([&] { *out = percolation::level_crossing(curve->curve, level); });
}

fs_status fs_estimate_threshold(const fs_sweep_curve* const* curves, size_t count, fs_threshold* out) {
  FS_REQUIRE(curves);
  FS_REQUIRE(out);
  return guarded([&] {
    std::vector<percolation::SweepCurve> cs;
    cs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (!curves[i]) throw std::invalid_argument("null curve in threshold input");
      cs.push_back(curves[i]->curve);
    }
    const auto est = percolation::estimate_threshold(cs);
    out->crossing = est.crossing;
    out->max_slope = est.max_slope;
    out->grid_step = est.grid_step;
  });
}

fs_status fs_direct_monte_carlo(int side, fs_boundary boundary, fs_perc_mode mode, fs_observable observable,
                                double p, int trials, uint64_t seed, double* mean, double* stderr_out) {
  FS_REQUIRE(mean);
  return guarded([&] {
    const auto lattice = percolation::Lattice::square(side, to_cpp(boundary));
    const auto est = percolation::direct_monte_carlo(lattice, to_cpp(mode), p, trials, seed, to_cpp(observable));
    *mean = est.mean;
    if (stderr_out) *stderr_out = est.stderr_;
  });
}

}  // extern "C"
