/* bsur: Bayesian seemingly-unrelated-regression variable selection.
 *
 * C interface to the shared library. All functions return a bsur_status code;
 * on failure bsur_last_error() describes the problem for the calling thread.
 * Handles are opaque and must be released with their matching close call.
 */
#ifndef BSUR_H
#define BSUR_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsur_status {
    BSUR_OK = 0,
    BSUR_ERR_CONFIG = 2,   /* bad configuration, spec or input contents */
    BSUR_ERR_NUMERIC = 3,  /* numerical failure in the sampler */
    BSUR_ERR_IO = 4        /* filesystem problem */
} bsur_status;

const char* bsur_version(void);
/* thread-local message for the most recent failing call */
const char* bsur_last_error(void);

/* ---- batch commands (the CLI is a thin wrapper over these) ---- */

/* Fit the model described by a key=value config file; write all output files
 * into out_dir. Optional overrides may be NULL. seed_override < 0 keeps the
 * config value. */
int bsur_fit(const char* config_path, const char* out_dir,
             const char* data_override, const char* y_override,
             const char* x_override, const char* x0_override,
             long long seed_override, long long threads_override, int quiet);

/* kind is "quickstart" or "eqtl"; recipe_path may be NULL. */
int bsur_simulate(const char* kind, const char* recipe_path, const char* out_dir);

/* Score a fit directory against simulator truth files; writes metrics.txt. */
int bsur_evaluate(const char* truth_dir, const char* fit_dir, const char* out_path);

/* Emit trace / density plot data and the response graph DOT file. */
int bsur_diag(const char* fit_dir);

/* ---- dataset handle ---- */

typedef struct bsur_dataset bsur_dataset;

/* Combined matrix with 1-based column blocks ("1:10"); x0_block may be NULL
 * or empty. */
int bsur_dataset_open(const char* path, const char* y_block, const char* x_block,
                      const char* x0_block, bsur_dataset** out);
/* Separate files; x0_path may be NULL. */
int bsur_dataset_open_files(const char* y_path, const char* x_path, const char* x0_path,
                            bsur_dataset** out);
int bsur_dataset_dims(const bsur_dataset* d, int* n, int* s, int* p, int* p0);
void bsur_dataset_close(bsur_dataset* d);

/* ---- fit result handle ---- */

typedef struct bsur_result bsur_result;

/* Run the sampler on an open dataset with the model settings of a config file. */
int bsur_fit_dataset(const bsur_dataset* d, const char* config_path, bsur_result** out);

/* Copy an estimator into caller storage, column-major. Pass buf == NULL to
 * query dimensions. Names: "gamma_hat", "beta_hat", "beta_hat_conditional",
 * "G_hat", "cpo", "logP", "model_size". */
int bsur_result_get(const bsur_result* r, const char* name, double* buf,
                    int* rows, int* cols);
/* elpd estimates for the fit */
int bsur_result_elpd(const bsur_result* r, double* loo, double* waic);
/* Write the standard output file set into a directory. */
int bsur_result_write(const bsur_result* r, const char* out_dir);
void bsur_result_close(bsur_result* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BSUR_H */
