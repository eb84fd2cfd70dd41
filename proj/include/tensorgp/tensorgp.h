/*
 * tensorgp — tensor-variate Gaussian-process learning with nested scalar-GP
 * kernels, Metropolis-within-Gibbs inference, inverse prediction and
 * predictive model checking.
 *
 * C interface of the shared library. All types are opaque handles; every
 * function returns a tgp_status, with tgp_last_error() describing the most
 * recent failure on the calling thread. Handles are freed with the matching
 * tgp_*_free; freeing NULL is a no-op.
 */

#ifndef TENSORGP_H
#define TENSORGP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tgp_status {
  TGP_OK = 0,
  TGP_ERR_VALIDATION = 1, /* bad shapes, options, or file contents */
  TGP_ERR_NUMERIC = 2,    /* non-recoverable numerical failure */
  TGP_ERR_IO = 3          /* file system trouble */
} tgp_status;

typedef struct tgp_dataset tgp_dataset;
typedef struct tgp_config tgp_config;
typedef struct tgp_report tgp_report;
typedef struct tgp_summary tgp_summary;

/* Message for the last failing call on this thread; never NULL. */
const char* tgp_last_error(void);

/* ---- datasets ------------------------------------------------------- */

/* Format by extension: ".bin" is the raw little-endian form, anything else
 * the CSV form. */
tgp_status tgp_dataset_read(const char* path, tgp_dataset** out);
tgp_status tgp_dataset_write(const tgp_dataset* ds, const char* path);
void tgp_dataset_free(tgp_dataset* ds);

tgp_status tgp_dataset_order(const tgp_dataset* ds, int* k);
tgp_status tgp_dataset_dims(const tgp_dataset* ds, int* dims, int cap);
tgp_status tgp_dataset_design_dim(const tgp_dataset* ds, int* d);

/* Splits off the final slice of the design-point mode as a test set. */
tgp_status tgp_dataset_split_last(const tgp_dataset* ds, tgp_dataset** train,
                                  tgp_dataset** test);

/* ---- synthetic data -------------------------------------------------- */

#define TGP_MAX_ORDER 8

typedef struct tgp_synth_opts {
  int k;                   /* tensor order, 2..TGP_MAX_ORDER */
  int dims[TGP_MAX_ORDER]; /* last entry = number of design points */
  int design_dim;          /* d */
  double q[TGP_MAX_ORDER]; /* true smoothness per axis */
  uint64_t seed;
  double center[TGP_MAX_ORDER];  /* NAN entries = defaults */
  double spacing[TGP_MAX_ORDER]; /* <= 0 entries = sqrt(ln 2 / q) */
  int two_regime;                /* 0/1 */
  double regime_q_factor;
  int has_plant; /* append one slice generated at `plant` */
  double plant[TGP_MAX_ORDER];
  double sigma11, sigma22, rho; /* 2x2 leading-mode generator values */
  double ar1;                   /* middle-mode correlation decay */
} tgp_synth_opts;

void tgp_synth_opts_init(tgp_synth_opts* opt);
tgp_status tgp_synth(const tgp_synth_opts* opt, tgp_dataset** out);

/* ---- run configuration ----------------------------------------------- */

tgp_status tgp_config_create(tgp_config** out);
tgp_status tgp_config_read(const char* path, tgp_config** out);
tgp_status tgp_config_write(const tgp_config* cfg, const char* path);
/* dotted_key is "section.key" exactly as in the config file. */
tgp_status tgp_config_set(tgp_config* cfg, const char* dotted_key, const char* value);
uint64_t tgp_config_hash(const tgp_config* cfg);
tgp_status tgp_config_get_int(const tgp_config* cfg, const char* dotted_key, long long* out);
void tgp_config_free(tgp_config* cfg);

/* ---- runs ------------------------------------------------------------ */

/* One chain over the training data. chain_index selects an independent
 * stream of the configured seed; chains may run concurrently on distinct
 * handles. */
tgp_status tgp_train(const tgp_dataset* ds, const tgp_config* cfg, uint64_t chain_index,
                     tgp_report** out);

/* Inverse prediction. `test` holds one slice (design-point mode of size 1)
 * with the same remaining dims as `train`. The joint scheme samples s_test
 * together with all GP unknowns; the modal scheme freezes them at `summary`
 * (mode when use_mean = 0, mean otherwise). */
tgp_status tgp_predict_joint(const tgp_dataset* train, const tgp_dataset* test,
                             const tgp_config* cfg, uint64_t chain_index, tgp_report** out);
tgp_status tgp_predict_modal(const tgp_dataset* train, const tgp_dataset* test,
                             const tgp_config* cfg, const tgp_summary* summary, int use_mean,
                             uint64_t chain_index, tgp_report** out);

/* Held-slice predictive check at the summary's mode (use_mean = 0) or mean.
 * slice is 1-based on the design-point mode. Writes the observed/predicted
 * CSV and a key = value stats file when the paths are non-NULL; r_out,
 * rmse_out and slope_out may be NULL. */
tgp_status tgp_model_check(const tgp_dataset* ds, const tgp_config* cfg,
                           const tgp_summary* summary, int use_mean, int slice,
                           const char* csv_path, const char* stats_path, double* r_out,
                           double* rmse_out, double* slope_out);

/* ---- reports and summaries ------------------------------------------- */

tgp_status tgp_report_write_trace(const tgp_report* rep, const char* path);
int tgp_report_iterations(const tgp_report* rep);
/* Copies a named trace column (see the README for the schema); *n receives
 * the length. */
tgp_status tgp_report_column(const tgp_report* rep, const char* name, double* out, int cap,
                             int* n);
/* Acceptance rate of one block: "ell", "sigma", "hyper" or "s_test". */
tgp_status tgp_report_acceptance(const tgp_report* rep, const char* block, double* out);
void tgp_report_free(tgp_report* rep);

tgp_status tgp_report_summarize(const tgp_report* rep, double burnin_frac, tgp_summary** out);
/* Pooled summary of independent chains (burn-in applied per chain). */
tgp_status tgp_reports_summarize(const tgp_report* const* reps, int n_reports,
                                 double burnin_frac, tgp_summary** out);

tgp_status tgp_summary_read(const char* csv_path, tgp_summary** out);
tgp_status tgp_summary_write(const tgp_summary* s, const char* csv_path, const char* txt_path);
/* field: "mean", "mode", "sd", "hpd_lo", "hpd_hi" or "geweke". */
tgp_status tgp_summary_lookup(const tgp_summary* s, const char* param, const char* field,
                              double* out);
void tgp_summary_free(tgp_summary* s);

/* ---- free-standing helpers ------------------------------------------- */

/* Shortest interval holding `mass` of the samples. */
tgp_status tgp_hpd(const double* samples, int n, double mass, double* lo, double* hi);

/* Radial model-unit coordinate -> kpc per model unit and bar pattern speed
 * in km/s/kpc (solar radius 8 kpc, circular speed 220 km/s). */
tgp_status tgp_galactic_convert(double s1, double* unit_kpc, double* omega_bar);

#ifdef __cplusplus
}
#endif

#endif /* TENSORGP_H */
