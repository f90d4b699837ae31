#pragma once

#include <armadillo>

#include "core/rng.hpp"

namespace bsur {

// Conjugate Normal-Inverse-Gamma posterior for one response given its selected
// design columns. beta | sigma2 ~ N(mu_star, sigma2 * V_star),
// sigma2 ~ IG(a_star, b_star).
struct NigPosterior {
    arma::vec mu_star;        // q
    arma::mat V_star;         // q x q
    arma::mat V_star_chol;    // lower Cholesky of V_star
    double a_star = 0.0;
    double b_star = 0.0;
    double log_det_V_star = 0.0;
};

// Prior: beta | sigma2 ~ N(0, sigma2 * w * I_q), sigma2 ~ IG(a_sigma, b_sigma).
// q = 0 (empty design) and n = 0 are both allowed.
NigPosterior nig_posterior(const arma::vec& y, const arma::mat& Xg, double w,
                           double a_sigma, double b_sigma);

// log m(y | gamma) with beta and sigma2 integrated out.
double hrr_log_marginal(const arma::vec& y, const arma::mat& Xg, double w,
                        double a_sigma, double b_sigma);
double hrr_log_marginal(const NigPosterior& post, arma::uword n, arma::uword q, double w,
                        double a_sigma, double b_sigma);

struct NigDraw {
    arma::vec beta;
    double sigma2 = 0.0;
};
NigDraw hrr_sample_beta(const NigPosterior& post, RngStream& rng);

// Posterior predictive at a single design row: shifted/scaled Student t with
// 2 a_star degrees of freedom.
double hrr_log_predictive(const NigPosterior& post, const arma::rowvec& x_row, double y);

}  // namespace bsur
