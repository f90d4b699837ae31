#include "core/chain.hpp"

#include <algorithm>
#include <cmath>

#include "core/dists.hpp"
#include "core/errors.hpp"

namespace bsur {

Chain::Chain(const Dataset& data, const ModelSpec& spec, double temperature,
             std::uint64_t rng_stream)
    : temperature(temperature),
      rng(spec.seed, rng_stream),
      data_(&data),
      spec_(&spec) {
    if (spec.gamma_prior == GammaPriorKind::Mrf)
        mrf_ = MrfGraph(spec.mrf_edges.value(), data.p() * data.s());
    Xfull_ = arma::join_rows(data.X0, data.X);
    XtX_ = Xfull_.t() * Xfull_;
    bandit.init(data.p(), data.s());
    init_gamma();
    init_state();
}

void Chain::init_gamma() {
    gamma.zeros(p(), s());
    switch (spec_->gamma_init) {
        case GammaInitKind::Zeros:
            break;
        case GammaInitKind::Ones:
            gamma.ones(p(), s());
            break;
        case GammaInitKind::Random:
            for (arma::uword k = 0; k < s(); ++k)
                for (arma::uword j = 0; j < p(); ++j)
                    gamma(j, k) = rng.bernoulli(0.1) ? 1 : 0;
            break;
        case GammaInitKind::Mle: {
            // univariate regression p-values, Bonferroni cut at 0.05 / (p s)
            const double cut = 0.05 / static_cast<double>(p() * s());
            const double nn = static_cast<double>(n());
            if (nn < 3.0) break;
            for (arma::uword j = 0; j < p(); ++j) {
                const arma::vec x = data_->X.col(j);
                const double sxx = arma::accu(arma::square(x - arma::mean(x)));
                if (sxx <= 0.0) continue;
                for (arma::uword k = 0; k < s(); ++k) {
                    const arma::vec y = data_->Y.col(k);
                    const double sxy = arma::dot(x - arma::mean(x), y - arma::mean(y));
                    const double slope = sxy / sxx;
                    const arma::vec resid = y - arma::mean(y) - slope * (x - arma::mean(x));
                    const double df = nn - 2.0;
                    const double se2 = arma::dot(resid, resid) / df / sxx;
                    if (se2 <= 0.0) {
                        gamma(j, k) = 1;
                        continue;
                    }
                    const double t = slope / std::sqrt(se2);
                    const double pval = 2.0 * (1.0 - student_t_cdf(std::fabs(t), df));
                    if (pval < cut) gamma(j, k) = 1;
                }
            }
            break;
        }
    }
}

void Chain::init_state() {
    const auto& h = hyper();
    w = 1.0;
    sel.kind = spec_->gamma_prior;
    if (sel.kind == GammaPriorKind::Hierarchical)
        sel.omega = arma::vec(p(), arma::fill::value(*h.a_omega / (*h.a_omega + *h.b_omega)));
    if (sel.kind == GammaPriorKind::Hotspot) {
        sel.o = arma::vec(s(), arma::fill::value(*h.a_o / (*h.a_o + *h.b_o)));
        sel.pi = arma::vec(p(), arma::fill::ones);
    }
    beta.zeros(p0() + p(), s());
    hrr_sigma2.ones(s());

    if (is_hrr()) {
        recompute_caches();
        refresh_hrr_conditionals();
        return;
    }

    cov.tau = 1.0;
    cov.sigma_rho = arma::eye(s(), s());
    if (has_graph()) {
        graph = DecomposableGraph::empty_graph(s());
        eta = *h.a_eta / (*h.a_eta + *h.b_eta);
        structure = make_sparse_structure(graph, *h.nu);
    } else {
        structure = make_dense_structure(s(), *h.nu);
    }
    recompute_caches();
    // settle sigma/rho and beta before the first sweep
    gibbs_sigma_rho();
    for (arma::uword k = 0; k < s(); ++k) gibbs_beta_column(k);
}

arma::uvec Chain::selected_rows(const arma::uvec& gamma_col) const {
    std::vector<arma::uword> rows;
    rows.reserve(p0() + arma::accu(gamma_col));
    for (arma::uword j = 0; j < p0(); ++j) rows.push_back(j);
    for (arma::uword j = 0; j < p(); ++j)
        if (gamma_col(j)) rows.push_back(p0() + j);
    return arma::uvec(rows);
}

double Chain::hrr_column_marginal(arma::uword k, const arma::uvec& rows, double w_val,
                                  NigPosterior* post_out) const {
    const arma::mat Xg = Xfull_.cols(rows);
    const NigPosterior post = nig_posterior(data_->Y.col(k), Xg, w_val,
                                            *hyper().a_sigma, *hyper().b_sigma);
    const double marg = hrr_log_marginal(post, n(), rows.n_elem, w_val,
                                         *hyper().a_sigma, *hyper().b_sigma);
    if (post_out) *post_out = post;
    return marg;
}

Chain::BetaColCond Chain::beta_col_conditional(arma::uword k, const arma::uvec& rows) const {
    BetaColCond out;
    out.rows = rows;
    if (rows.n_elem == 0) return out;
    const double sig_k = cov.sigma_rho(k, k);
    double xtx_mult = 0.0;
    arma::vec y_tilde = (data_->Y.col(k) - rhoU.col(k)) / sig_k;
    for (arma::uword l : structure.children[k]) {
        const double r = cov.sigma_rho(k, l);
        if (r == 0.0) continue;
        const double sig_l = cov.sigma_rho(l, l);
        xtx_mult += r * r / sig_l;
        // free of beta_k: the u_k terms cancel against rhoU_l
        const arma::vec c_l = U.col(l) - rhoU.col(l) + r * (U.col(k) - data_->Y.col(k));
        y_tilde -= (r / sig_l) * c_l;
    }
    arma::mat A = (XtX_(rows, rows) / temperature) * (1.0 / sig_k + xtx_mult);
    A.diag() += 1.0 / w;
    const arma::mat L = chol_lower_jitter(A, "beta column precision");
    const arma::mat Linv = arma::inv(arma::trimatl(L));
    out.cov = Linv.t() * Linv;
    out.mean = out.cov * (Xfull_.cols(rows).t() * y_tilde / temperature);
    return out;
}

GammaProposal Chain::propose_mc3(arma::uword k) {
    GammaProposal prop;
    std::vector<arma::uword> ones, zeros;
    for (arma::uword j = 0; j < p(); ++j)
        (gamma(j, k) ? ones : zeros).push_back(j);
    const double n1 = static_cast<double>(ones.size());
    const double n0 = static_cast<double>(zeros.size());

    enum MoveKind { Add, Del, Swap };
    std::vector<MoveKind> menu;
    if (n0 > 0) menu.push_back(Add);
    if (n1 > 0) menu.push_back(Del);
    if (n0 > 0 && n1 > 0) menu.push_back(Swap);
    const MoveKind mv = menu[rng.uniform_int(menu.size())];
    const double m_fwd = static_cast<double>(menu.size());

    double log_q_fwd = 0.0, n1_new = n1, n0_new = n0;
    switch (mv) {
        case Add:
            prop.flips = {zeros[rng.uniform_int(zeros.size())]};
            log_q_fwd = -std::log(m_fwd * n0);
            n1_new = n1 + 1;
            n0_new = n0 - 1;
            break;
        case Del:
            prop.flips = {ones[rng.uniform_int(ones.size())]};
            log_q_fwd = -std::log(m_fwd * n1);
            n1_new = n1 - 1;
            n0_new = n0 + 1;
            break;
        case Swap:
            prop.flips = {ones[rng.uniform_int(ones.size())],
                          zeros[rng.uniform_int(zeros.size())]};
            log_q_fwd = -std::log(m_fwd * n1 * n0);
            break;
    }
    double m_rev = 0.0;
    if (n0_new > 0) m_rev += 1.0;
    if (n1_new > 0) m_rev += 1.0;
    if (n0_new > 0 && n1_new > 0) m_rev += 1.0;
    double log_q_rev = 0.0;
    switch (mv) {
        case Add: log_q_rev = -std::log(m_rev * n1_new); break;
        case Del: log_q_rev = -std::log(m_rev * n0_new); break;
        case Swap: log_q_rev = -std::log(m_rev * n1_new * n0_new); break;
    }
    prop.log_menu_ratio = log_q_rev - log_q_fwd;
    return prop;
}

GammaProposal Chain::propose_bandit(arma::uword k) {
    GammaProposal prop;
    arma::vec mismatch(p());
    for (arma::uword j = 0; j < p(); ++j) {
        const double z = rng.beta(bandit.alpha(j, k), bandit.beta(j, k));
        mismatch(j) = gamma(j, k) ? 1.0 - z : z;
    }
    const arma::uword j = rng.categorical(mismatch);
    prop.flips = {j};
    prop.bandit_coord = j;
    const double total = arma::accu(mismatch);
    const double total_back = total - mismatch(j) + (1.0 - mismatch(j));
    prop.log_menu_ratio = (std::log(1.0 - mismatch(j)) - std::log(total_back)) -
                          (std::log(mismatch(j)) - std::log(total));
    return prop;
}

bool Chain::step_gamma_column(arma::uword k) {
    GammaProposal prop = spec_->gamma_sampler == GammaSamplerKind::MC3 ? propose_mc3(k)
                                                                       : propose_bandit(k);
    ++gamma_attempt;

    // prior delta, applying flips one at a time
    arma::umat work = gamma;
    double prior_delta = 0.0;
    for (arma::uword j : prop.flips) {
        prior_delta += log_prior_gamma_delta(work, sel, hyper(), mrf_, j, k);
        work(j, k) = 1 - work(j, k);
    }
    arma::uvec new_col = work.col(k);

    bool accepted = false;
    if (is_hrr()) {
        NigPosterior post_new;
        const double marg_new = hrr_column_marginal(k, selected_rows(new_col), w, &post_new);
        const double logA = prop.log_menu_ratio + prior_delta +
                            (marg_new - hrr_marg(k)) / temperature;
        if (rng.log_u01() < logA) {
            accepted = true;
            gamma.col(k) = new_col;
            hrr_marg(k) = marg_new;
            hrr_post[k] = post_new;
            raw_loglik = arma::accu(hrr_marg);
            logP_gamma += prior_delta;
        }
    } else {
        const arma::uvec rows_new = selected_rows(new_col);
        const BetaColCond cond_new = beta_col_conditional(k, rows_new);
        arma::vec beta_new;
        double log_q_fwd = 0.0;
        if (rows_new.n_elem > 0) {
            beta_new = rng.mv_normal(cond_new.mean, cond_new.cov);
            log_q_fwd = log_pdf_mv_normal(beta_new, cond_new.mean, cond_new.cov);
        }
        const arma::uvec rows_cur = selected_rows(k);
        double log_q_rev = 0.0;
        if (rows_cur.n_elem > 0) {
            const BetaColCond cond_cur = beta_col_conditional(k, rows_cur);
            const arma::vec beta_cur = beta(rows_cur, arma::uvec{k});
            log_q_rev = log_pdf_mv_normal(beta_cur, cond_cur.mean, cond_cur.cov);
        }

        // proposed caches for column k
        arma::mat XB_prop = XB;
        XB_prop.col(k) = rows_new.n_elem ? arma::vec(Xfull_.cols(rows_new) * beta_new)
                                         : arma::vec(n(), arma::fill::zeros);
        arma::mat U_prop = U;
        U_prop.col(k) = data_->Y.col(k) - XB_prop.col(k);
        const arma::mat rhoU_prop = make_rho_u(U_prop, cov.sigma_rho, structure);
        double loglik_prop = 0.0;
        for (arma::uword l = 0; l < s(); ++l)
            loglik_prop += log_pdf_normal_iid(data_->Y.col(l), XB_prop.col(l) + rhoU_prop.col(l),
                                              cov.sigma_rho(l, l));

        double beta_prior_delta = 0.0;
        for (arma::uword i = 0; i < rows_new.n_elem; ++i)
            beta_prior_delta += log_pdf_normal(beta_new(i), 0.0, w);
        for (arma::uword i = 0; i < rows_cur.n_elem; ++i)
            beta_prior_delta -= log_pdf_normal(beta(rows_cur(i), k), 0.0, w);

        const double logA = prop.log_menu_ratio + prior_delta + beta_prior_delta +
                            (loglik_prop - raw_loglik) / temperature + log_q_rev - log_q_fwd;
        if (rng.log_u01() < logA) {
            accepted = true;
            gamma.col(k) = new_col;
            beta.col(k).zeros();
            for (arma::uword i = 0; i < rows_new.n_elem; ++i)
                beta(rows_new(i), k) = beta_new(i);
            XB = std::move(XB_prop);
            U = std::move(U_prop);
            rhoU = rhoU_prop;
            raw_loglik = loglik_prop;
            logP_gamma += prior_delta;
            logP_beta += beta_prior_delta;
        }
    }

    if (spec_->gamma_sampler == GammaSamplerKind::Bandit)
        bandit.record(prop.bandit_coord, k, accepted);
    gamma_accept += accepted;
    return accepted;
}

void Chain::gibbs_beta_column(arma::uword k) {
    const arma::uvec rows = selected_rows(k);
    beta.col(k).zeros();
    if (rows.n_elem > 0) {
        const BetaColCond cond = beta_col_conditional(k, rows);
        const arma::vec draw = rng.mv_normal(cond.mean, cond.cov);
        for (arma::uword i = 0; i < rows.n_elem; ++i) beta(rows(i), k) = draw(i);
        XB.col(k) = Xfull_.cols(rows) * draw;
    } else {
        XB.col(k).zeros();
    }
    U.col(k) = data_->Y.col(k) - XB.col(k);
    refresh_sur_likelihood();
    logP_beta = 0.0;
    const arma::vec sel_beta = selected_beta_values();
    for (arma::uword i = 0; i < sel_beta.n_elem; ++i)
        logP_beta += log_pdf_normal(sel_beta(i), 0.0, w);
}

void Chain::gibbs_sigma_rho() {
    sample_sigma_rho(cov.sigma_rho, U, structure, cov.tau, temperature,
                     static_cast<double>(n()), rng);
    refresh_sur_likelihood();
    logP_sigma_rho = log_prior_sigma_rho(cov.sigma_rho, structure, cov.tau);
}

bool Chain::step_graph() {
    if (s() <= 1) return false;
    const EdgeFlipProposal prop = propose_edge_flip(graph, rng);
    if (!prop.moved) return false;
    const CovStructure st_new = make_sparse_structure(prop.graph, *hyper().nu);

    arma::mat sig_rho_new;
    const double log_q_fwd = sample_sigma_rho(sig_rho_new, U, st_new, cov.tau, temperature,
                                              static_cast<double>(n()), rng);
    const double log_q_rev = log_full_conditional_sigma_rho(
        cov.sigma_rho, U, structure, cov.tau, temperature, static_cast<double>(n()));

    const double graph_prior_new = log_prior_graph(prop.graph, eta);
    const double sig_prior_new = log_prior_sigma_rho(sig_rho_new, st_new, cov.tau);
    const arma::mat rhoU_new = make_rho_u(U, sig_rho_new, st_new);
    double loglik_new = 0.0;
    for (arma::uword l = 0; l < s(); ++l)
        loglik_new += log_pdf_normal_iid(data_->Y.col(l), XB.col(l) + rhoU_new.col(l),
                                         sig_rho_new(l, l));

    const double logA = prop.log_ratio + log_q_rev - log_q_fwd +
                        (graph_prior_new + sig_prior_new + loglik_new / temperature) -
                        (logP_graph + logP_sigma_rho + raw_loglik / temperature);
    if (rng.log_u01() < logA) {
        graph = prop.graph;
        structure = st_new;
        cov.sigma_rho = sig_rho_new;
        rhoU = rhoU_new;
        raw_loglik = loglik_new;
        logP_graph = graph_prior_new;
        logP_sigma_rho = sig_prior_new;
        return true;
    }
    return false;
}

bool Chain::step_tau() {
    ++tau_att_;
    const TauUpdate upd = update_tau(cov.sigma_rho, structure, cov.tau, *hyper().a_tau,
                                     *hyper().b_tau, scales.tau_step, rng);
    if (upd.accepted) {
        ++tau_acc_;
        cov.tau = upd.tau;
        logP_tau = log_pdf_gamma(cov.tau, *hyper().a_tau, *hyper().b_tau);
        logP_sigma_rho = log_prior_sigma_rho(cov.sigma_rho, structure, cov.tau);
    }
    return upd.accepted;
}

void Chain::step_eta() {
    eta = update_eta(graph, hyper(), rng);
    logP_eta = log_pdf_beta(eta, *hyper().a_eta, *hyper().b_eta);
    logP_graph = log_prior_graph(graph, eta);
}

void Chain::step_prior_level() {
    const auto& h = hyper();
    switch (sel.kind) {
        case GammaPriorKind::Hierarchical: {
            logP_sel_hyper = 0.0;
            for (arma::uword j = 0; j < p(); ++j) {
                sel.omega(j) = update_hierarchical_omega(gamma.row(j), h, rng);
                logP_sel_hyper += log_pdf_beta(sel.omega(j), *h.a_omega, *h.b_omega);
            }
            break;
        }
        case GammaPriorKind::Hotspot: {
            hot_acc_ += update_hotspot(sel, gamma, h, scales.hotspot, rng);
            hot_att_ += s() + p();
            logP_sel_hyper = 0.0;
            for (arma::uword k = 0; k < s(); ++k)
                logP_sel_hyper += log_pdf_beta(sel.o(k), *h.a_o, *h.b_o);
            for (arma::uword j = 0; j < p(); ++j)
                logP_sel_hyper += log_pdf_gamma(sel.pi(j), *h.a_pi, *h.b_pi);
            break;
        }
        case GammaPriorKind::Mrf:
            logP_sel_hyper = 0.0;
            break;
    }
    logP_gamma = log_prior_gamma(gamma, sel, h, mrf_);
}

arma::vec Chain::selected_beta_values() const {
    std::vector<double> vals;
    for (arma::uword k = 0; k < s(); ++k) {
        for (arma::uword j = 0; j < p0(); ++j) vals.push_back(beta(j, k));
        for (arma::uword j = 0; j < p(); ++j)
            if (gamma(j, k)) vals.push_back(beta(p0() + j, k));
    }
    return arma::vec(vals);
}

bool Chain::step_w() {
    const auto& h = hyper();
    if (!is_hrr()) {
        w = update_w(selected_beta_values(), h, rng);
        logP_w = log_pdf_inv_gamma(w, *h.a_w, *h.b_w);
        const arma::vec sel_beta = selected_beta_values();
        logP_beta = 0.0;
        for (arma::uword i = 0; i < sel_beta.n_elem; ++i)
            logP_beta += log_pdf_normal(sel_beta(i), 0.0, w);
        return true;
    }
    // HRR: beta is integrated out, so w moves against the marginal likelihood
    ++w_att_;
    const double prop = std::exp(std::log(w) + rng.normal(0.0, scales.w_step));
    arma::vec marg_new(s());
    std::vector<NigPosterior> post_new(s());
    double total_new = 0.0;
    for (arma::uword k = 0; k < s(); ++k) {
        marg_new(k) = hrr_column_marginal(k, selected_rows(k), prop, &post_new[k]);
        total_new += marg_new(k);
    }
    double logA = (total_new - raw_loglik) / temperature;
    logA += log_pdf_inv_gamma(prop, *h.a_w, *h.b_w) - log_pdf_inv_gamma(w, *h.a_w, *h.b_w);
    logA += std::log(prop) - std::log(w);
    if (rng.log_u01() < logA) {
        ++w_acc_;
        w = prop;
        hrr_marg = marg_new;
        hrr_post = std::move(post_new);
        raw_loglik = total_new;
        logP_w = log_pdf_inv_gamma(w, *h.a_w, *h.b_w);
        return true;
    }
    return false;
}

void Chain::refresh_hrr_conditionals() {
    beta.zeros(p0() + p(), s());
    for (arma::uword k = 0; k < s(); ++k) {
        const arma::uvec rows = selected_rows(k);
        const NigDraw draw = hrr_sample_beta(hrr_post[k], rng);
        hrr_sigma2(k) = draw.sigma2;
        for (arma::uword i = 0; i < rows.n_elem; ++i) beta(rows(i), k) = draw.beta(i);
    }
}

void Chain::refresh_sur_likelihood() {
    rhoU = make_rho_u(U, cov.sigma_rho, structure);
    raw_loglik = 0.0;
    for (arma::uword l = 0; l < s(); ++l)
        raw_loglik += log_pdf_normal_iid(data_->Y.col(l), XB.col(l) + rhoU.col(l),
                                         cov.sigma_rho(l, l));
}

void Chain::refresh_hrr_marginals() {
    hrr_marg.set_size(s());
    hrr_post.assign(s(), {});
    for (arma::uword k = 0; k < s(); ++k)
        hrr_marg(k) = hrr_column_marginal(k, selected_rows(k), w, &hrr_post[k]);
    raw_loglik = arma::accu(hrr_marg);
}

void Chain::adapt_scale(double& step, arma::uword& acc, arma::uword& att, double window) {
    if (att < static_cast<arma::uword>(window)) return;
    const double rate = static_cast<double>(acc) / static_cast<double>(att);
    if (rate < 0.34) step *= 0.9;
    else if (rate > 0.54) step *= 1.1;
    step = std::clamp(step, 1e-3, 10.0);
    acc = 0;
    att = 0;
}

void Chain::sweep(bool adapting) {
    for (arma::uword k = 0; k < s(); ++k) step_gamma_column(k);
    if (is_hrr()) {
        refresh_hrr_conditionals();
    } else {
        for (arma::uword k = 0; k < s(); ++k) gibbs_beta_column(k);
        gibbs_sigma_rho();
        if (has_graph()) step_graph();
        step_tau();
        if (has_graph()) step_eta();
    }
    step_prior_level();
    step_w();
    ++iteration_;

    if (adapting) {
        adapt_scale(scales.tau_step, tau_acc_, tau_att_, 50.0);
        adapt_scale(scales.w_step, w_acc_, w_att_, 50.0);
        adapt_scale(scales.hotspot.o_step, hot_acc_, hot_att_, 50.0);
        scales.hotspot.pi_step = scales.hotspot.o_step;
    }
}

double Chain::log_posterior() const {
    double logP = raw_loglik + logP_gamma + logP_w + logP_sel_hyper;
    if (!is_hrr()) logP += logP_beta + logP_sigma_rho + logP_tau;
    if (has_graph()) logP += logP_graph + logP_eta;
    return logP;
}

arma::mat Chain::pred_log_density() const {
    arma::mat out(n(), s());
    if (is_hrr()) {
        for (arma::uword k = 0; k < s(); ++k) {
            const arma::uvec rows = selected_rows(k);
            const arma::mat Xg = Xfull_.cols(rows);
            for (arma::uword i = 0; i < n(); ++i)
                out(i, k) = hrr_log_predictive(hrr_post[k], Xg.row(i), data_->Y(i, k));
        }
    } else {
        for (arma::uword k = 0; k < s(); ++k)
            for (arma::uword i = 0; i < n(); ++i)
                out(i, k) = log_pdf_normal(data_->Y(i, k), XB(i, k) + rhoU(i, k),
                                           cov.sigma_rho(k, k));
    }
    return out;
}

void Chain::recompute_caches() {
    const auto& h = hyper();
    logP_gamma = log_prior_gamma(gamma, sel, h, mrf_);
    logP_w = log_pdf_inv_gamma(w, *h.a_w, *h.b_w);
    logP_sel_hyper = 0.0;
    if (sel.kind == GammaPriorKind::Hierarchical)
        for (arma::uword j = 0; j < p(); ++j)
            logP_sel_hyper += log_pdf_beta(sel.omega(j), *h.a_omega, *h.b_omega);
    if (sel.kind == GammaPriorKind::Hotspot) {
        for (arma::uword k = 0; k < s(); ++k)
            logP_sel_hyper += log_pdf_beta(sel.o(k), *h.a_o, *h.b_o);
        for (arma::uword j = 0; j < p(); ++j)
            logP_sel_hyper += log_pdf_gamma(sel.pi(j), *h.a_pi, *h.b_pi);
    }

    if (is_hrr()) {
        refresh_hrr_marginals();
        return;
    }
    XB = Xfull_ * beta;
    U = data_->Y - XB;
    refresh_sur_likelihood();
    logP_sigma_rho = log_prior_sigma_rho(cov.sigma_rho, structure, cov.tau);
    logP_tau = log_pdf_gamma(cov.tau, *h.a_tau, *h.b_tau);
    const arma::vec sel_beta = selected_beta_values();
    logP_beta = 0.0;
    for (arma::uword i = 0; i < sel_beta.n_elem; ++i)
        logP_beta += log_pdf_normal(sel_beta(i), 0.0, w);
    if (has_graph()) {
        logP_graph = log_prior_graph(graph, eta);
        logP_eta = log_pdf_beta(eta, *h.a_eta, *h.b_eta);
    }
}

void Chain::exchange_states(Chain& a, Chain& b) {
    std::swap(a.gamma, b.gamma);
    std::swap(a.beta, b.beta);
    std::swap(a.cov, b.cov);
    std::swap(a.graph, b.graph);
    std::swap(a.structure, b.structure);
    std::swap(a.eta, b.eta);
    std::swap(a.w, b.w);
    std::swap(a.sel, b.sel);
    std::swap(a.hrr_sigma2, b.hrr_sigma2);
    std::swap(a.XB, b.XB);
    std::swap(a.U, b.U);
    std::swap(a.rhoU, b.rhoU);
    std::swap(a.hrr_marg, b.hrr_marg);
    std::swap(a.hrr_post, b.hrr_post);
    std::swap(a.raw_loglik, b.raw_loglik);
    std::swap(a.logP_gamma, b.logP_gamma);
    std::swap(a.logP_beta, b.logP_beta);
    std::swap(a.logP_sigma_rho, b.logP_sigma_rho);
    std::swap(a.logP_graph, b.logP_graph);
    std::swap(a.logP_tau, b.logP_tau);
    std::swap(a.logP_eta, b.logP_eta);
    std::swap(a.logP_w, b.logP_w);
    std::swap(a.logP_sel_hyper, b.logP_sel_hyper);
}

}  // namespace bsur
