/*
 * fusionsim C API.
 *
 * Boosted type-II fusion simulation (Fock-state evolution, Bell-state
 * discrimination, detector models) and Newman-Ziff percolation sweeps.
 *
 * Conventions:
 *   - Every fallible call returns an fs_status; FS_OK is zero.
 *   - On failure, fs_last_error() returns a message for the calling thread.
 *   - Opaque handles are created by fs_*_run / fs_*_sweep and released with
 *     the matching fs_*_free. Passing NULL to a free function is a no-op.
 */
#ifndef FUSIONSIM_FUSIONSIM_H
#define FUSIONSIM_FUSIONSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(FUSIONSIM_BUILDING_LIBRARY)
#define FUSIONSIM_API __attribute__((visibility("default")))
#else
#define FUSIONSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
  FS_OK = 0,
  FS_ERR_INVALID_ARGUMENT = 1,
  FS_ERR_OUT_OF_RANGE = 2,
  FS_ERR_NULL_POINTER = 3,
  FS_ERR_RUNTIME = 4
} fs_status;

FUSIONSIM_API const char* fs_version(void);
FUSIONSIM_API const char* fs_last_error(void);
FUSIONSIM_API const char* fs_status_string(fs_status status);

/* ------------------------------------------------------------------------ */
/* Fusion experiment                                                         */
/* ------------------------------------------------------------------------ */

typedef enum fs_bell { FS_PHI_PLUS = 0, FS_PHI_MINUS = 1, FS_PSI_PLUS = 2, FS_PSI_MINUS = 3 } fs_bell;

typedef enum fs_outcome {
  FS_OUTCOME_PSI_MINUS = 0,
  FS_OUTCOME_PSI_PLUS = 1,
  FS_OUTCOME_PHI_MINUS = 2,
  FS_OUTCOME_PHI_PLUS = 3,
  FS_OUTCOME_FAIL = 4
} fs_outcome;

#define FS_NUM_OUTCOMES 5
#define FS_NUM_PHOTONS 8

typedef struct fs_experiment_config {
  double overlap;      /* pairwise indistinguishability V in [0, 1] */
  double transmission; /* per-photon transmission in [0, 1] (rate only) */
  int ancilla_enabled; /* nonzero: boosted gate with two N00N ancillas */
  double phase;        /* birefringent phase on photon 2 before BS1, radians */
  uint64_t seed;
  /* NULL, or FS_NUM_PHOTONS per-photon indistinguishabilities overriding overlap */
  const double* photon_overlaps;
} fs_experiment_config;

FUSIONSIM_API void fs_experiment_config_init(fs_experiment_config* config);

typedef struct fs_fusion_result fs_fusion_result;

/* Photons 2, 3 prepared in the given Bell state. */
FUSIONSIM_API fs_status fs_fusion_run(const fs_experiment_config* config, fs_bell input, fs_fusion_result** out);
/* Full four-photon resource preparation (two PBS-heralded Bell pairs). */
FUSIONSIM_API fs_status fs_fusion_run_full(const fs_experiment_config* config, fs_fusion_result** out);
FUSIONSIM_API void fs_fusion_result_free(fs_fusion_result* result);

FUSIONSIM_API size_t fs_fusion_result_group_count(const fs_fusion_result* result);
/* Port index and polarization (0 = H, 1 = V) of one detector group. */
FUSIONSIM_API fs_status fs_fusion_result_group(const fs_fusion_result* result, size_t index, int* port, int* pol);
FUSIONSIM_API size_t fs_fusion_result_pattern_count(const fs_fusion_result* result);
/* Pattern `index` in canonical order. `counts` receives group_count entries.
 * `outcome` (optional) receives the ideal-table classification. */
FUSIONSIM_API fs_status fs_fusion_result_pattern(const fs_fusion_result* result, size_t index, int* counts,
                                                 size_t counts_len, double* probability, fs_outcome* outcome);
FUSIONSIM_API double fs_fusion_result_herald_probability(const fs_fusion_result* result);
FUSIONSIM_API double fs_fusion_result_rate_factor(const fs_fusion_result* result);
/* Photon-1,4 polarization state heralded by `outcome` (full preparation only).
 * rho_re / rho_im receive 16 row-major entries in the HH, HV, VH, VV basis. */
FUSIONSIM_API fs_status fs_fusion_result_heralded_state(const fs_fusion_result* result, fs_outcome outcome,
                                                        double* probability, double* rho_re, double* rho_im);
/* <b|rho|b> for a 4x4 two-qubit density matrix in the HH, HV, VH, VV basis. */
FUSIONSIM_API fs_status fs_bell_fidelity(const double* rho_re, const double* rho_im, fs_bell target, double* out);

typedef struct fs_ppnrd_config {
  int fan_out;       /* sub-detectors per PPNRD, >= 1 */
  double efficiency; /* per-photon detection efficiency in [0, 1] */
} fs_ppnrd_config;

typedef struct fs_outcome_stats {
  double confusion[4][FS_NUM_OUTCOMES]; /* P(outcome | input), rows by fs_bell */
  double mixture[FS_NUM_OUTCOMES];      /* uniform mixture of the four inputs */
  double per_input_success[4];
  double total_success;
} fs_outcome_stats;

/* raw_clicks != 0 counts only fully resolved click signatures (needs ppnrd). */
FUSIONSIM_API fs_status fs_success_probability(const fs_experiment_config* config, int raw_clicks,
                                               const fs_ppnrd_config* ppnrd, fs_outcome_stats* out);

typedef struct fs_fringe_point {
  double phase;
  double diagonal[4]; /* P(++), P(+-), P(-+), P(--) of photons 1, 4 */
  double correlation; /* <XX> */
  double herald_probability;
} fs_fringe_point;

FUSIONSIM_API fs_status fs_phase_sweep(const fs_experiment_config* config, const double* phases, size_t count,
                                       fs_fringe_point* out);
FUSIONSIM_API fs_status fs_fringe_visibility(const fs_fringe_point* points, size_t count, double* out);

/* Two-photon cross-port coincidence probability after a 50:50 beam splitter. */
FUSIONSIM_API fs_status fs_hom_dip(double overlap, double* coincidence);

/* ------------------------------------------------------------------------ */
/* Detection estimators                                                      */
/* ------------------------------------------------------------------------ */

/* out receives fan_out + 1 probabilities (click counts 0..fan_out). */
FUSIONSIM_API fs_status fs_ppnrd_response(int photons, const fs_ppnrd_config* config, double* out, size_t out_len);
FUSIONSIM_API fs_status fs_normalization_factor(const int* pattern, size_t len, const fs_ppnrd_config* config,
                                                double* out);
FUSIONSIM_API fs_status fs_estimate_fidelity_singlet(double xx, double yy, double zz, double* out);
FUSIONSIM_API fs_status fs_nfold_rate(double attempt_rate, double efficiency, int fold, double* out);
FUSIONSIM_API fs_status fs_transmission_efficiency(double end_to_end, double detector, double source, double* out);

/* ------------------------------------------------------------------------ */
/* Percolation                                                               */
/* ------------------------------------------------------------------------ */

typedef enum fs_boundary { FS_BOUNDARY_OPEN = 0, FS_BOUNDARY_PERIODIC = 1 } fs_boundary;
typedef enum fs_perc_mode { FS_PERC_BOND_ONLY = 0, FS_PERC_SITE_BOND = 1 } fs_perc_mode;
typedef enum fs_observable { FS_OBS_LARGEST_CLUSTER = 0, FS_OBS_SPANNING = 1 } fs_observable;

typedef struct fs_sweep_request {
  int side;
  fs_boundary boundary;
  fs_perc_mode mode;
  fs_observable observable;
  const double* grid;
  size_t grid_len;
  int trials;
  uint64_t seed;
  int threads;
} fs_sweep_request;

typedef struct fs_sweep_curve fs_sweep_curve;

FUSIONSIM_API fs_status fs_percolation_sweep(const fs_sweep_request* request, fs_sweep_curve** out);
FUSIONSIM_API void fs_sweep_curve_free(fs_sweep_curve* curve);
FUSIONSIM_API size_t fs_sweep_curve_size(const fs_sweep_curve* curve);
FUSIONSIM_API int fs_sweep_curve_side(const fs_sweep_curve* curve);
FUSIONSIM_API int fs_sweep_curve_trials(const fs_sweep_curve* curve);
FUSIONSIM_API fs_status fs_sweep_curve_point(const fs_sweep_curve* curve, size_t index, double* p, double* mean,
                                             double* stderr_out);
FUSIONSIM_API fs_status fs_sweep_curve_slope_at(const fs_sweep_curve* curve, double p, double* out);
/* First p at which the curve reaches `level` (linear interpolation). */
FUSIONSIM_API fs_status fs_sweep_curve_crossing(const fs_sweep_curve* curve, double level, double* out);

typedef struct fs_threshold {
  double crossing;  /* largest-L curve reaches 0.5 */
  double max_slope; /* steepest grid interval of the largest-L curve */
  double grid_step;
} fs_threshold;

FUSIONSIM_API fs_status fs_estimate_threshold(const fs_sweep_curve* const* curves, size_t count, fs_threshold* out);

FUSIONSIM_API fs_status fs_direct_monte_carlo(int side, fs_boundary boundary, fs_perc_mode mode,
                                              fs_observable observable, double p, int trials, uint64_t seed,
                                              double* mean, double* stderr_out);

#ifdef __cplusplus
}
#endif

#endif /* FUSIONSIM_FUSIONSIM_H */
