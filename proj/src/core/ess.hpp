#pragma once

#include <armadillo>
#include <functional>
#include <memory>
#include <vector>

#include "core/chain.hpp"
#include "core/dataset.hpp"
#include "core/model_spec.hpp"

namespace bsur {

// Streaming per-cell statistics over the recorded per-draw log densities
// log f(y_ik | theta^t). Everything needed for LOO, WAIC, lpd and CPO is
// accumulated in log space; no draw is stored.
class ElpdAccumulator {
public:
    ElpdAccumulator() = default;
    ElpdAccumulator(arma::uword n, arma::uword s);

    void add(const arma::mat& log_density);
    arma::uword n_draws() const { return T_; }

    arma::mat cell_loo() const;    // log harmonic-mean density per cell
    arma::mat cell_lpd() const;    // log mean density per cell
    arma::mat cell_var_log() const;
    arma::mat cpo() const;         // harmonic means, natural scale

    double elpd_loo() const { return arma::accu(cell_loo()); }
    double lpd() const { return arma::accu(cell_lpd()); }
    double elpd_waic() const { return lpd() - arma::accu(cell_var_log()); }
    // importance weights 1/f with heavy tails make the harmonic mean unstable
    bool unstable_weights(double kurtosis_limit = 10.0) const;

private:
    arma::uword T_ = 0;
    // log-sum-exp state for exp(-logf) (harmonic mean) and exp(logf) (lpd)
    arma::mat neg_max_, neg_sum_;
    arma::mat pos_max_, pos_sum_;
    arma::mat mean_log_, m2_log_;   // Welford on log f
    // scaled raw moments of the weights for the kurtosis flag
    arma::mat w_m1_, w_m2_, w_m3_, w_m4_;
};

// Spec-level helper: records is a T x cells matrix of log f values.
std::pair<double, double> is_elpd(const arma::mat& records);

struct McmcOutput {
    arma::uword n_iter = 0, burnin = 0, n_recorded = 0;
    arma::uword n = 0, s = 0, p = 0, p0 = 0;
    arma::mat gamma_sum;       // p x s
    arma::mat beta_sum;        // (p0+p) x s
    arma::mat beta_cond_sum;   // sum of beta where selected
    arma::umat beta_cond_count;
    arma::mat g_sum;           // s x s
    arma::vec logP_trace;      // length n_iter
    arma::vec model_size_trace;
    ElpdAccumulator elpd;
    double final_hot_temperature = 1.0;
    double exchange_rate = 0.0;
};

// Frozen-state exchange acceptance: min(1, exp[(1/t_a - 1/t_b)(logL_b - logL_a)]).
double exchange_log_acceptance(double t_a, double t_b, double raw_loglik_a, double raw_loglik_b);
bool exchange_move(Chain& a, Chain& b, RngStream& rng);

// Column-block crossover: each response column swaps sides with probability
// one half; symmetric proposal, tempered joint density ratio.
bool crossover_move(Chain& a, Chain& b, RngStream& rng);

// Burn-in temperature rule on a window of exchange outcomes.
double adapt_temperature(arma::uword accepted, arma::uword attempted, double t);

using ProgressFn = std::function<void(arma::uword iter, double logP, arma::uword model_size,
                                      double temperature, double exch_rate)>;

McmcOutput run_sampler(const ModelSpec& spec, const Dataset& data,
                       const ProgressFn& progress = nullptr);

}  // namespace bsur
