#include "core/nig.hpp"

#include <cmath>

#include "core/dists.hpp"
#include "core/errors.hpp"

namespace bsur {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

NigPosterior nig_posterior(const arma::vec& y, const arma::mat& Xg, double w,
                           double a_sigma, double b_sigma) {
    if (!(w > 0.0)) throw NumericError("nig_posterior: w must be positive");
    const arma::uword n = y.n_elem;
    const arma::uword q = Xg.n_cols;
    NigPosterior post;
    post.a_star = a_sigma + 0.5 * static_cast<double>(n);
    if (q == 0) {
        post.b_star = b_sigma + 0.5 * arma::dot(y, y);
        post.log_det_V_star = 0.0;
        return post;
    }
    arma::mat precision = Xg.t() * Xg;
    precision.diag() += 1.0 / w;
    const arma::mat Lp = chol_lower_jitter(precision, "nig_posterior precision");
    // V* = precision^-1 through the factor; log|V*| = -2 sum log diag(Lp)
    arma::mat Linv = arma::inv(arma::trimatl(Lp));
    post.V_star = Linv.t() * Linv;
    post.V_star_chol = chol_lower_jitter(post.V_star, "nig_posterior V_star");
    post.log_det_V_star = -2.0 * arma::accu(arma::log(Lp.diag()));
    post.mu_star = post.V_star * (Xg.t() * y);
    // b* = b + (y'y - mu*' V*^-1 mu*) / 2, with mu_beta = 0
    const arma::vec z = arma::solve(arma::trimatl(post.V_star_chol), post.mu_star);
    post.b_star = b_sigma + 0.5 * (arma::dot(y, y) - arma::dot(z, z));
    if (post.b_star <= 0.0)  // can only be rounding; the quadratic form is <= y'y
        post.b_star = b_sigma > 0.0 ? b_sigma * 1e-12 : 1e-300;
    return post;
}

double hrr_log_marginal(const NigPosterior& post, arma::uword n, arma::uword q, double w,
                        double a_sigma, double b_sigma) {
    return -0.5 * static_cast<double>(n) * kLog2Pi
         + 0.5 * (post.log_det_V_star - static_cast<double>(q) * std::log(w))
         + a_sigma * std::log(b_sigma) - post.a_star * std::log(post.b_star)
         + std::lgamma(post.a_star) - std::lgamma(a_sigma);
}

double hrr_log_marginal(const arma::vec& y, const arma::mat& Xg, double w,
                        double a_sigma, double b_sigma) {
    const NigPosterior post = nig_posterior(y, Xg, w, a_sigma, b_sigma);
    return hrr_log_marginal(post, y.n_elem, Xg.n_cols, w, a_sigma, b_sigma);
}

NigDraw hrr_sample_beta(const NigPosterior& post, RngStream& rng) {
    NigDraw draw;
    draw.sigma2 = rng.inv_gamma(post.a_star, post.b_star);
    if (post.mu_star.n_elem > 0)
        draw.beta = post.mu_star +
                    std::sqrt(draw.sigma2) * (post.V_star_chol * rng.normal_vec(post.mu_star.n_elem));
    return draw;
}

double hrr_log_predictive(const NigPosterior& post, const arma::rowvec& x_row, double y) {
    const double df = 2.0 * post.a_star;
    double loc = 0.0, quad = 0.0;
    if (post.mu_star.n_elem > 0) {
        loc = arma::dot(x_row, post.mu_star);
        // x V* x' = ||L' x'||^2 with V* = L L'
        const arma::vec lx = post.V_star_chol.t() * x_row.t();
        quad = arma::dot(lx, lx);
    }
    const double scale = std::sqrt(post.b_star / post.a_star * (1.0 + quad));
    return log_pdf_student_t(y, df, loc, scale);
}

}  // namespace bsur
