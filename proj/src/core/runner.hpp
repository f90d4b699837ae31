#pragma once

#include <string>
#include <vector>

#include "core/inference.hpp"
#include "core/model_spec.hpp"

namespace bsur {

struct FitOverrides {
    std::string data_path, y_spec, x_spec, x0_spec, mrf_path;
    long long seed = -1;       // < 0: keep config value
    long long max_threads = -1;
};

// Full batch fit: parse config, load data, run, write outputs and manifest.
// Throws ConfigError / NumericError / IoError.
void cmd_fit(const std::string& config_path, const std::string& out_dir,
             const FitOverrides& overrides = {}, bool quiet = false);

void cmd_simulate(const std::string& kind, const std::string& recipe_path,
                  const std::string& out_dir);

struct EvalMetrics {
    double gamma_auc = 0.0;
    double tpr = 0.0, fpr = 0.0;     // at mPIP > 0.5
    double g_edge_recall = -1.0;     // -1 when no graph truth available
    double g_nonedge_recall = -1.0;
    double beta_rmse_support = -1.0;
};

EvalMetrics cmd_evaluate(const std::string& truth_dir, const std::string& fit_dir,
                         const std::string& out_path = "");

void cmd_diag(const std::string& fit_dir);

// Rank AUC with midrank tie handling; labels nonzero = positive.
double rank_auc(const arma::vec& scores, const arma::uvec& labels);

}  // namespace bsur
