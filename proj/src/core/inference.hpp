#pragma once

#include <armadillo>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/ess.hpp"

namespace bsur {

enum class BetaType { Marginal, Conditional };

struct PosteriorSummary {
    arma::mat gamma_hat;          // p x s marginal posterior inclusion probabilities
    arma::mat beta_hat;           // (p0+p) x s marginal means (X0 rows first)
    arma::mat beta_hat_cond;      // conditional on gamma_jk = 1 (0 when never selected)
    arma::mat g_hat;              // s x s edge probabilities
    arma::umat selected;          // gamma_hat > threshold
    double threshold = 0.5;
    double elpd_loo = 0.0;
    double elpd_waic = 0.0;
    double lpd = 0.0;
    arma::mat cpo;                // n x s
    bool unstable_weights = false;
    arma::uword n_recorded = 0;
    arma::uword p0 = 0;
};

PosteriorSummary summarize(const McmcOutput& output, double threshold = 0.5);

enum class PredictMode { Response, Coefficients, NonzeroIndices };

// Response mode: X0_new * B0_hat + X_new * B_hat with the requested beta type.
arma::mat predict_response(const PosteriorSummary& summary, const arma::mat& X_new,
                           const arma::mat& X0_new, BetaType type);
arma::mat predict_coefficients(const PosteriorSummary& summary, BetaType type);
// flattened (j, k) indicator positions with mPIP > threshold
std::vector<std::pair<arma::uword, arma::uword>> predict_nonzero(const PosteriorSummary& summary);

// Output files: gamma_hat.csv, beta_hat.csv, G_hat.csv, elpd.txt, cpo.csv,
// logP.csv, model_size.csv. Returns the file names written.
std::vector<std::string> write_summary_files(const std::string& out_dir,
                                             const PosteriorSummary& summary,
                                             const McmcOutput& output,
                                             const Dataset& data);

}  // namespace bsur
