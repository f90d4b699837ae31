#include "core/inference.hpp"

#include <cstdio>
#include <fstream>

#include "core/errors.hpp"

namespace bsur {

PosteriorSummary summarize(const McmcOutput& output, double threshold) {
    if (output.n_recorded == 0)
        throw ConfigError("empty post-burn-in window: nothing recorded");
    const double denom = static_cast<double>(output.n_recorded);
    PosteriorSummary sm;
    sm.threshold = threshold;
    sm.n_recorded = output.n_recorded;
    sm.p0 = output.p0;
    sm.gamma_hat = output.gamma_sum / denom;
    sm.beta_hat = output.beta_sum / denom;
    sm.beta_hat_cond.zeros(output.beta_sum.n_rows, output.beta_sum.n_cols);
    for (arma::uword idx = 0; idx < output.beta_sum.n_elem; ++idx)
        if (output.beta_cond_count(idx) > 0)
            sm.beta_hat_cond(idx) =
                output.beta_cond_sum(idx) / static_cast<double>(output.beta_cond_count(idx));
    sm.g_hat = output.g_sum / denom;
    sm.selected = arma::conv_to<arma::umat>::from(sm.gamma_hat > threshold);
    sm.elpd_loo = output.elpd.elpd_loo();
    sm.elpd_waic = output.elpd.elpd_waic();
    sm.lpd = output.elpd.lpd();
    sm.cpo = output.elpd.cpo();
    sm.unstable_weights = output.elpd.unstable_weights();
    return sm;
}

namespace {

const arma::mat& pick_beta(const PosteriorSummary& sm, BetaType type) {
    return type == BetaType::Marginal ? sm.beta_hat : sm.beta_hat_cond;
}

}  // namespace

arma::mat predict_response(const PosteriorSummary& sm, const arma::mat& X_new,
                           const arma::mat& X0_new, BetaType type) {
    const arma::mat& B = pick_beta(sm, type);
    const arma::uword p0 = sm.p0;
    const arma::uword p = B.n_rows - p0;
    if (X_new.n_cols != p)
        throw ConfigError("predict: X_new has " + std::to_string(X_new.n_cols) +
                          " columns, expected " + std::to_string(p));
    if (X0_new.n_cols != p0)
        throw ConfigError("predict: X0_new has " + std::to_string(X0_new.n_cols) +
                          " columns, expected " + std::to_string(p0));
    if (p0 > 0 && X0_new.n_rows != X_new.n_rows)
        throw ConfigError("predict: X_new and X0_new row counts differ");
    arma::mat out = X_new * B.rows(p0, B.n_rows - 1);
    if (p0 > 0) out += X0_new * B.rows(0, p0 - 1);
    return out;
}

arma::mat predict_coefficients(const PosteriorSummary& sm, BetaType type) {
    return pick_beta(sm, type);
}

std::vector<std::pair<arma::uword, arma::uword>> predict_nonzero(const PosteriorSummary& sm) {
    std::vector<std::pair<arma::uword, arma::uword>> out;
    for (arma::uword k = 0; k < sm.gamma_hat.n_cols; ++k)
        for (arma::uword j = 0; j < sm.gamma_hat.n_rows; ++j)
            if (sm.gamma_hat(j, k) > sm.threshold) out.emplace_back(j, k);
    return out;
}

namespace {

std::vector<std::string> response_names(const Dataset& data) {
    std::vector<std::string> names;
    for (arma::uword k = 0; k < data.s(); ++k)
        names.push_back(k < data.y_names.size() && !data.y_names[k].empty()
                            ? data.y_names[k]
                            : "y" + std::to_string(k + 1));
    return names;
}

}  // namespace

std::vector<std::string> write_summary_files(const std::string& out_dir,
                                             const PosteriorSummary& sm,
                                             const McmcOutput& output,
                                             const Dataset& data) {
    const auto ynames = response_names(data);
    std::vector<std::string> files;
    auto path = [&](const char* name) {
        files.push_back(name);
        return out_dir + "/" + name;
    };

    write_csv_matrix(path("gamma_hat.csv"), sm.gamma_hat, ynames);
    write_csv_matrix(path("beta_hat.csv"), sm.beta_hat, ynames);
    write_csv_matrix(path("beta_hat_conditional.csv"), sm.beta_hat_cond, ynames);
    write_csv_matrix(path("G_hat.csv"), sm.g_hat, ynames);

    {
        std::ofstream out(path("elpd.txt"), std::ios::binary);
        if (!out) throw IoError("cannot write elpd.txt in " + out_dir);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", sm.elpd_loo);
        out << "elpd.LOO = " << buf << "\n";
        std::snprintf(buf, sizeof(buf), "%.17g", sm.elpd_waic);
        out << "elpd.WAIC = " << buf << "\n";
        if (sm.unstable_weights)
            out << "warning = importance weights have heavy tails (kurtosis > 10); "
                   "elpd.LOO may be unstable\n";
    }

    {
        // per-cell CPO plus the per-observation sum of logs
        arma::mat cpo_out(sm.cpo.n_rows, sm.cpo.n_cols + 1);
        cpo_out.cols(0, sm.cpo.n_cols - 1) = sm.cpo;
        cpo_out.col(sm.cpo.n_cols) = arma::sum(arma::log(sm.cpo), 1);
        std::vector<std::string> names = ynames;
        names.push_back("log_cpo_sum");
        write_csv_matrix(path("cpo.csv"), cpo_out, names);
    }

    write_csv_matrix(path("logP.csv"), output.logP_trace, {"logP"});
    write_csv_matrix(path("model_size.csv"), output.model_size_trace, {"model_size"});
    return files;
}

}  // namespace bsur
