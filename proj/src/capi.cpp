#include "bsur.h"

#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include "core/dataset.hpp"
#include "core/errors.hpp"
#include "core/ess.hpp"
#include "core/inference.hpp"
#include "core/model_spec.hpp"
#include "core/runner.hpp"

namespace {

thread_local std::string g_last_error;

const char* opt(const char* s) { return s ? s : ""; }

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return BSUR_OK;
    } catch (const bsur::ConfigError& e) {
        g_last_error = e.what();
        return BSUR_ERR_CONFIG;
    } catch (const bsur::NumericError& e) {
        g_last_error = e.what();
        return BSUR_ERR_NUMERIC;
    } catch (const bsur::IoError& e) {
        g_last_error = e.what();
        return BSUR_ERR_IO;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BSUR_ERR_NUMERIC;
    }
}

}  // namespace

struct bsur_dataset {
    bsur::Dataset data;
};

struct bsur_result {
    bsur::McmcOutput output;
    bsur::PosteriorSummary summary;
    bsur::Dataset data;
};

extern "C" {

const char* bsur_version(void) { return "0.1.0"; }

const char* bsur_last_error(void) { return g_last_error.c_str(); }

int bsur_fit(const char* config_path, const char* out_dir, const char* data_override,
             const char* y_override, const char* x_override, const char* x0_override,
             long long seed_override, long long threads_override, int quiet) {
    return guarded([&] {
        bsur::FitOverrides ov;
        ov.data_path = opt(data_override);
        ov.y_spec = opt(y_override);
        ov.x_spec = opt(x_override);
        ov.x0_spec = opt(x0_override);
        ov.seed = seed_override;
        ov.max_threads = threads_override;
        bsur::cmd_fit(opt(config_path), opt(out_dir), ov, quiet != 0);
    });
}

int bsur_simulate(const char* kind, const char* recipe_path, const char* out_dir) {
    return guarded([&] { bsur::cmd_simulate(opt(kind), opt(recipe_path), opt(out_dir)); });
}

int bsur_evaluate(const char* truth_dir, const char* fit_dir, const char* out_path) {
    return guarded([&] { bsur::cmd_evaluate(opt(truth_dir), opt(fit_dir), opt(out_path)); });
}

int bsur_diag(const char* fit_dir) {
    return guarded([&] { bsur::cmd_diag(opt(fit_dir)); });
}

int bsur_dataset_open(const char* path, const char* y_block, const char* x_block,
                      const char* x0_block, bsur_dataset** out) {
    return guarded([&] {
        auto d = std::make_unique<bsur_dataset>();
        d->data = bsur::load_dataset_combined(opt(path),
                                              bsur::parse_column_block(opt(y_block)),
                                              bsur::parse_column_block(opt(x_block)),
                                              bsur::parse_column_block(opt(x0_block)));
        *out = d.release();
    });
}

int bsur_dataset_open_files(const char* y_path, const char* x_path, const char* x0_path,
                            bsur_dataset** out) {
    return guarded([&] {
        auto d = std::make_unique<bsur_dataset>();
        d->data = bsur::load_dataset_files(opt(y_path), opt(x_path), opt(x0_path));
        *out = d.release();
    });
}

int bsur_dataset_dims(const bsur_dataset* d, int* n, int* s, int* p, int* p0) {
    if (!d) {
        g_last_error = "null dataset handle";
        return BSUR_ERR_CONFIG;
    }
    if (n) *n = static_cast<int>(d->data.n());
    if (s) *s = static_cast<int>(d->data.s());
    if (p) *p = static_cast<int>(d->data.p());
    if (p0) *p0 = static_cast<int>(d->data.p0());
    return BSUR_OK;
}

void bsur_dataset_close(bsur_dataset* d) { delete d; }

int bsur_fit_dataset(const bsur_dataset* d, const char* config_path, bsur_result** out) {
    if (!d) {
        g_last_error = "null dataset handle";
        return BSUR_ERR_CONFIG;
    }
    return guarded([&] {
        const bsur::RunConfig cfg = bsur::parse_run_config(opt(config_path));
        const bsur::ModelSpec spec = bsur::validate_spec(cfg.spec, d->data);
        auto r = std::make_unique<bsur_result>();
        r->data = d->data;
        r->output = bsur::run_sampler(spec, d->data);
        r->summary = bsur::summarize(r->output);
        *out = r.release();
    });
}

int bsur_result_get(const bsur_result* r, const char* name, double* buf, int* rows, int* cols) {
    if (!r) {
        g_last_error = "null result handle";
        return BSUR_ERR_CONFIG;
    }
    const std::string key = opt(name);
    const arma::mat* m = nullptr;
    arma::mat tmp;
    if (key == "gamma_hat") m = &r->summary.gamma_hat;
    else if (key == "beta_hat") m = &r->summary.beta_hat;
    else if (key == "beta_hat_conditional") m = &r->summary.beta_hat_cond;
    else if (key == "G_hat") m = &r->summary.g_hat;
    else if (key == "cpo") m = &r->summary.cpo;
    else if (key == "logP") {
        tmp = r->output.logP_trace;
        m = &tmp;
    } else if (key == "model_size") {
        tmp = r->output.model_size_trace;
        m = &tmp;
    } else {
        g_last_error = "unknown estimator name '" + key + "'";
        return BSUR_ERR_CONFIG;
    }
    if (rows) *rows = static_cast<int>(m->n_rows);
    if (cols) *cols = static_cast<int>(m->n_cols);
    if (buf) std::memcpy(buf, m->memptr(), sizeof(double) * m->n_elem);
    return BSUR_OK;
}

int bsur_result_elpd(const bsur_result* r, double* loo, double* waic) {
    if (!r) {
        g_last_error = "null result handle";
        return BSUR_ERR_CONFIG;
    }
    if (loo) *loo = r->summary.elpd_loo;
    if (waic) *waic = r->summary.elpd_waic;
    return BSUR_OK;
}

int bsur_result_write(const bsur_result* r, const char* out_dir) {
    if (!r) {
        g_last_error = "null result handle";
        return BSUR_ERR_CONFIG;
    }
    return guarded([&] {
        std::error_code ec;
        std::filesystem::create_directories(opt(out_dir), ec);
        if (ec) throw bsur::IoError("cannot create " + std::string(opt(out_dir)));
        bsur::write_summary_files(opt(out_dir), r->summary, r->output, r->data);
    });
}

void bsur_result_close(bsur_result* r) { delete r; }

}  // extern "C"
