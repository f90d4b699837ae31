#include "core/sur_cov.hpp"

#include <cmath>

#include "core/dists.hpp"
#include "core/errors.hpp"

namespace bsur {

namespace {

void fill_children(CovStructure& st, arma::uword s) {
    st.children.assign(s, {});
    for (arma::uword l = 0; l < s; ++l)
        for (arma::uword m : st.cond[l]) st.children[m].push_back(l);
}

}  // namespace

CovStructure make_dense_structure(arma::uword s, double nu) {
    CovStructure st;
    st.cond.resize(s);
    st.prior_shape.set_size(s);
    for (arma::uword k = 0; k < s; ++k) {
        for (arma::uword m = 0; m < k; ++m) st.cond[k].push_back(m);
        // 1-based index: shape (nu - s + 2k - 1) / 2
        st.prior_shape(k) =
            0.5 * (nu - static_cast<double>(s) + 2.0 * static_cast<double>(k + 1) - 1.0);
        st.order.push_back(k);
    }
    fill_children(st, s);
    return st;
}

CovStructure make_sparse_structure(const DecomposableGraph& g, double nu) {
    const arma::uword s = g.n_nodes();
    CovStructure st;
    st.cond.resize(s);
    st.prior_shape.set_size(s);
    st.order = g.perfect_order();
    for (arma::uword q = 0; q < g.n_components(); ++q) {
        const auto& sep = g.separators()[q];
        const auto& res = g.residuals()[q];
        for (arma::uword t = 0; t < res.size(); ++t) {
            const arma::uword l = res[t];
            st.cond[l] = g.conditioning_sets()[l];
            // shape (nu - s + t + |S_q|) / 2 with t 1-based inside the residual
            st.prior_shape(l) = 0.5 * (nu - static_cast<double>(s) +
                                       static_cast<double>(t + 1) +
                                       static_cast<double>(sep.size()));
        }
    }
    fill_children(st, s);
    return st;
}

double log_prior_sigma_rho(const arma::mat& sigma_rho, const CovStructure& st, double tau) {
    double logP = 0.0;
    for (arma::uword l = 0; l < st.cond.size(); ++l) {
        const double sig = sigma_rho(l, l);
        logP += log_pdf_inv_gamma(sig, st.prior_shape(l), 0.5 * tau);
        for (arma::uword m : st.cond[l])
            logP += log_pdf_normal(sigma_rho(m, l), 0.0, sig / tau);
    }
    return logP;
}

arma::mat make_rho_u(const arma::mat& U, const arma::mat& sigma_rho, const CovStructure& st) {
    arma::mat rhoU(U.n_rows, U.n_cols, arma::fill::zeros);
    for (arma::uword l = 0; l < st.cond.size(); ++l)
        for (arma::uword m : st.cond[l]) rhoU.col(l) += sigma_rho(m, l) * U.col(m);
    return rhoU;
}

double sur_log_likelihood(const arma::mat& Y, const arma::mat& XB, const arma::mat& sigma_rho,
                          const CovStructure& st) {
    const arma::mat U = Y - XB;
    const arma::mat rhoU = make_rho_u(U, sigma_rho, st);
    double logP = 0.0;
    for (arma::uword l = 0; l < Y.n_cols; ++l)
        logP += log_pdf_normal_iid(Y.col(l), XB.col(l) + rhoU.col(l), sigma_rho(l, l));
    return logP;
}

namespace {

// Shared scaffolding: posterior scale matrix Sigma = U'U / temperature + tau I,
// then per response the conditional (sigma_l, rho_l) block is Normal-IG with
// parameters from the Schur complement of Sigma.
struct BlockParams {
    double a, b;
    arma::vec rho_mean;
    arma::mat rho_cov_unit;  // multiply by sigma_l to get the covariance
};

BlockParams block_params(const arma::mat& Sigma, const std::vector<arma::uword>& cond,
                         arma::uword l, double prior_shape, double temperature, double n_obs) {
    BlockParams bp;
    double schur = Sigma(l, l);
    const arma::uword q = cond.size();
    if (q > 0) {
        arma::uvec c(q);
        for (arma::uword i = 0; i < q; ++i) c(i) = cond[i];
        arma::mat Scc = Sigma(c, c);
        const arma::uvec li{l};
        const arma::vec scl = Sigma(c, li);
        const arma::mat L = chol_lower_jitter(Scc, "sigma_rho block");
        const arma::mat Linv = arma::inv(arma::trimatl(L));
        bp.rho_cov_unit = Linv.t() * Linv;
        bp.rho_mean = bp.rho_cov_unit * scl;
        schur -= arma::dot(scl, bp.rho_mean);
    }
    bp.a = 0.5 * n_obs / temperature + prior_shape;
    bp.b = 0.5 * schur;
    return bp;
}

}  // namespace

double sample_sigma_rho(arma::mat& sigma_rho, const arma::mat& U, const CovStructure& st,
                        double tau, double temperature, double n_obs, RngStream& rng) {
    const arma::uword s = st.cond.size();
    arma::mat Sigma = (U.t() * U) / temperature;
    Sigma.diag() += tau;
    sigma_rho.zeros(s, s);
    double logP = 0.0;
    for (arma::uword l = 0; l < s; ++l) {
        const auto bp = block_params(Sigma, st.cond[l], l, st.prior_shape(l), temperature, n_obs);
        const double sig = rng.inv_gamma(bp.a, bp.b);
        sigma_rho(l, l) = sig;
        logP += log_pdf_inv_gamma(sig, bp.a, bp.b);
        const arma::uword q = st.cond[l].size();
        if (q > 0) {
            const arma::vec rho = rng.mv_normal(bp.rho_mean, sig * bp.rho_cov_unit);
            logP += log_pdf_mv_normal(rho, bp.rho_mean, sig * bp.rho_cov_unit);
            for (arma::uword i = 0; i < q; ++i) {
                const arma::uword m = st.cond[l][i];
                sigma_rho(m, l) = rho(i);
                sigma_rho(l, m) = rho(i);
            }
        }
    }
    return logP;
}

double log_full_conditional_sigma_rho(const arma::mat& sigma_rho, const arma::mat& U,
                                      const CovStructure& st, double tau, double temperature,
                                      double n_obs) {
    const arma::uword s = st.cond.size();
    arma::mat Sigma = (U.t() * U) / temperature;
    Sigma.diag() += tau;
    double logP = 0.0;
    for (arma::uword l = 0; l < s; ++l) {
        const auto bp = block_params(Sigma, st.cond[l], l, st.prior_shape(l), temperature, n_obs);
        logP += log_pdf_inv_gamma(sigma_rho(l, l), bp.a, bp.b);
        const arma::uword q = st.cond[l].size();
        if (q > 0) {
            arma::vec rho(q);
            for (arma::uword i = 0; i < q; ++i) rho(i) = sigma_rho(st.cond[l][i], l);
            logP += log_pdf_mv_normal(rho, bp.rho_mean, sigma_rho(l, l) * bp.rho_cov_unit);
        }
    }
    return logP;
}

TauUpdate update_tau(const arma::mat& sigma_rho, const CovStructure& st, double tau,
                     double a_tau, double b_tau, double step, RngStream& rng) {
    const double prop = std::exp(std::log(tau) + rng.normal(0.0, step));
    double logA = log_pdf_gamma(prop, a_tau, b_tau) - log_pdf_gamma(tau, a_tau, b_tau);
    logA += log_prior_sigma_rho(sigma_rho, st, prop) - log_prior_sigma_rho(sigma_rho, st, tau);
    logA += std::log(prop) - std::log(tau);  // log-scale Jacobian
    if (rng.log_u01() < logA) return {prop, true};
    return {tau, false};
}

}  // namespace bsur
