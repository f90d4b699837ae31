#pragma once

#include <armadillo>
#include <vector>

#include "core/decomposable_graph.hpp"
#include "core/rng.hpp"

namespace bsur {

// Bookkeeping for the factorised covariance: for each response l, the set of
// responses its residual is regressed on, and the prior InverseGamma shape of
// its conditional variance. Dense (inverse Wishart) conditions each response
// on all previous ones; sparse (hyper-inverse Wishart) follows the prime
// components of the response graph.
struct CovStructure {
    std::vector<std::vector<arma::uword>> cond;      // per response
    std::vector<std::vector<arma::uword>> children;  // l in children[k] iff k in cond[l]
    arma::vec prior_shape;                           // per response
    std::vector<arma::uword> order;                  // valid assembly order
};

CovStructure make_dense_structure(arma::uword s, double nu);
CovStructure make_sparse_structure(const DecomposableGraph& g, double nu);

// sigma_rho packs the conditional variances on the diagonal and the
// regression loadings rho_{l,m} symmetrically off the diagonal, nonzero only
// where m is in cond[l].
struct CovarianceState {
    arma::mat sigma_rho;
    double tau = 1.0;
};

// Joint prior density of (sigma_rho) given tau under the factorised prior:
// sigma_l^2 ~ IG(prior_shape_l, tau/2), rho_l | sigma_l^2 ~ N(0, sigma_l^2/tau).
double log_prior_sigma_rho(const arma::mat& sigma_rho, const CovStructure& st, double tau);

// rhoU(:, l) = sum_{m in cond[l]} U(:, m) * rho_{l,m}
arma::mat make_rho_u(const arma::mat& U, const arma::mat& sigma_rho, const CovStructure& st);

// Factorised Gaussian log likelihood: sum_l N(y_l; XB_l + rhoU_l, sigma_l I).
double sur_log_likelihood(const arma::mat& Y, const arma::mat& XB, const arma::mat& sigma_rho,
                          const CovStructure& st);

// Block draw of (sigma, rho) from the full conditional given the residuals
// U = Y - XB; the likelihood is raised to 1/temperature. Returns the log
// density of the draw (needed as a proposal correction in graph moves).
double sample_sigma_rho(arma::mat& sigma_rho, const arma::mat& U, const CovStructure& st,
                        double tau, double temperature, double n_obs, RngStream& rng);

// Density of an existing sigma_rho under the same full conditional.
double log_full_conditional_sigma_rho(const arma::mat& sigma_rho, const arma::mat& U,
                                      const CovStructure& st, double tau, double temperature,
                                      double n_obs);

struct TauUpdate {
    double tau;
    bool accepted;
};
// Random-walk MH on log tau against Gamma(a_tau, b_tau) times the sigma_rho prior.
TauUpdate update_tau(const arma::mat& sigma_rho, const CovStructure& st, double tau,
                     double a_tau, double b_tau, double step, RngStream& rng);

}  // namespace bsur
