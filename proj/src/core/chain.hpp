#pragma once

#include <armadillo>
#include <memory>
#include <vector>

#include "core/dataset.hpp"
#include "core/decomposable_graph.hpp"
#include "core/model_spec.hpp"
#include "core/nig.hpp"
#include "core/rng.hpp"
#include "core/selection_prior.hpp"
#include "core/sur_cov.hpp"

namespace bsur {

// Per-coordinate Beta pseudo-counts driving the Thompson-sampling proposal.
struct BanditStats {
    arma::mat alpha, beta;
    double limit = 1000.0;

    void init(arma::uword p, arma::uword s) {
        alpha.set_size(p, s);
        alpha.fill(0.5);
        beta.set_size(p, s);
        beta.fill(0.5);
    }
    void record(arma::uword j, arma::uword k, bool accepted) {
        if (alpha(j, k) + beta(j, k) > limit) return;
        (accepted ? alpha(j, k) : beta(j, k)) += 1.0;
    }
};

// Scalar proposal scales, tuned during burn-in only.
struct ProposalScales {
    HotspotScales hotspot;
    double tau_step = 0.5;
    double w_step = 0.5;
};

struct GammaProposal {
    std::vector<arma::uword> flips;  // row indices within the column
    double log_menu_ratio = 0.0;
    arma::uword bandit_coord = 0;
    bool valid = true;
};

// One tempered chain. Covers all three covariance families; the HRR family
// works on per-response marginal likelihoods, dSUR/SSUR on the factorised
// likelihood with explicit coefficients.
class Chain {
public:
    Chain(const Dataset& data, const ModelSpec& spec, double temperature,
          std::uint64_t rng_stream);

    // --- state ---
    arma::umat gamma;          // p x s
    arma::mat beta;            // (p0 + p) x s; X0 rows first
    CovarianceState cov;       // dSUR/SSUR
    DecomposableGraph graph;   // SSUR
    CovStructure structure;    // dSUR/SSUR
    double eta = 0.5;          // SSUR
    double w = 1.0;
    SelectionPriorState sel;
    arma::vec hrr_sigma2;      // HRR conditional draws, for recording
    double temperature = 1.0;

    // --- caches ---
    arma::mat XB, U, rhoU;     // dSUR/SSUR
    arma::vec hrr_marg;        // HRR per-response marginal log likelihood
    std::vector<NigPosterior> hrr_post;
    double raw_loglik = 0.0;   // untempered
    double logP_gamma = 0.0, logP_beta = 0.0, logP_sigma_rho = 0.0, logP_graph = 0.0,
           logP_tau = 0.0, logP_eta = 0.0, logP_w = 0.0, logP_sel_hyper = 0.0;

    // slot-owned machinery (stays put when states are exchanged)
    RngStream rng;
    BanditStats bandit;
    ProposalScales scales;

    bool is_hrr() const { return spec_->covariance_prior == CovPrior::IG; }
    bool has_graph() const { return spec_->covariance_prior == CovPrior::HIW; }
    arma::uword n() const { return data_->n(); }
    arma::uword s() const { return data_->s(); }
    arma::uword p() const { return data_->p(); }
    arma::uword p0() const { return data_->p0(); }
    const Dataset& data() const { return *data_; }
    const ModelSpec& spec() const { return *spec_; }
    const Hyperparameters& hyper() const { return spec_->hyper; }

    void sweep(bool adapting);
    double log_posterior() const;
    arma::uword model_size() const { return arma::accu(gamma); }

    // per-cell conditional log densities log f(y_ik | theta), used for
    // elpd / CPO records
    arma::mat pred_log_density() const;

    // rebuild every cache from the parameter state (tests, swaps)
    void recompute_caches();

    // full-state exchange; temperatures, rng streams and adaptation stay put
    static void exchange_states(Chain& a, Chain& b);

    // --- individual steps, exposed for tests ---
    bool step_gamma_column(arma::uword k);
    void gibbs_beta_column(arma::uword k);
    void gibbs_sigma_rho();
    bool step_graph();
    bool step_tau();
    void step_eta();
    void step_prior_level();
    bool step_w();
    void refresh_hrr_conditionals();

    GammaProposal propose_mc3(arma::uword k);
    GammaProposal propose_bandit(arma::uword k);

    // selected design rows for response k (fixed predictors first)
    arma::uvec selected_rows(const arma::uvec& gamma_col) const;
    arma::uvec selected_rows(arma::uword k) const { return selected_rows(gamma.col(k)); }

    // full conditional of beta column k under an arbitrary mask
    struct BetaColCond {
        arma::uvec rows;
        arma::vec mean;
        arma::mat cov;
    };
    BetaColCond beta_col_conditional(arma::uword k, const arma::uvec& rows) const;

    double hrr_column_marginal(arma::uword k, const arma::uvec& rows, double w_val,
                               NigPosterior* post_out = nullptr) const;

    arma::vec selected_beta_values() const;

    // acceptance counters (diagnostics)
    arma::uword gamma_accept = 0, gamma_attempt = 0;

private:
    void init_gamma();
    void init_state();
    void refresh_sur_likelihood();
    void refresh_hrr_marginals();
    void adapt_scale(double& step, arma::uword& acc, arma::uword& att, double window);

    const Dataset* data_;
    const ModelSpec* spec_;
    MrfGraph mrf_;
    arma::mat Xfull_;   // [X0, X]
    arma::mat XtX_;
    arma::uword iteration_ = 0;
    arma::uword tau_acc_ = 0, tau_att_ = 0;
    arma::uword w_acc_ = 0, w_att_ = 0;
    arma::uword hot_acc_ = 0, hot_att_ = 0;
};

}  // namespace bsur
