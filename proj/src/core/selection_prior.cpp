#include "core/selection_prior.hpp"

#include <algorithm>
#include <cmath>

#include "core/dists.hpp"
#include "core/errors.hpp"

namespace bsur {

MrfGraph::MrfGraph(const std::vector<MrfEdge>& edges, arma::uword n_vertices)
    : n_vertices_(n_vertices), adj_(n_vertices) {
    for (const auto& e : edges) {
        if (e.a >= n_vertices || e.b >= n_vertices)
            throw ConfigError("MRF edge index out of range");
        adj_[e.a].emplace_back(e.b, e.weight);
        adj_[e.b].emplace_back(e.a, e.weight);
    }
}

double hotspot_omega(double o_k, double pi_j) {
    return std::min(o_k * pi_j, 1.0 - kOmegaEps);
}

double log_prior_gamma(const arma::umat& gamma, const SelectionPriorState& state,
                       const Hyperparameters& hyper, const MrfGraph& mrf) {
    const arma::uword p = gamma.n_rows, s = gamma.n_cols;
    double logP = 0.0;
    switch (state.kind) {
        case GammaPriorKind::Hierarchical: {
            for (arma::uword j = 0; j < p; ++j) {
                const double w = state.omega(j);
                for (arma::uword k = 0; k < s; ++k)
                    logP += log_pdf_bernoulli(gamma(j, k) != 0, w);
            }
            break;
        }
        case GammaPriorKind::Hotspot: {
            for (arma::uword k = 0; k < s; ++k)
                for (arma::uword j = 0; j < p; ++j)
                    logP += log_pdf_bernoulli(gamma(j, k) != 0,
                                              hotspot_omega(state.o(k), state.pi(j)));
            break;
        }
        case GammaPriorKind::Mrf: {
            const double d = *hyper.mrf_d, e = *hyper.mrf_e;
            const double ones = static_cast<double>(arma::accu(gamma));
            double quad = 0.0;
            // each undirected edge counted once
            for (arma::uword v = 0; v < mrf.n_vertices(); ++v) {
                if (gamma(v % p, v / p) == 0) continue;
                for (const auto& [u, w] : mrf.neighbours(v))
                    if (u > v && gamma(u % p, u / p) != 0) quad += w;
            }
            logP = d * ones + e * quad;
            break;
        }
    }
    return logP;
}

double log_prior_gamma_delta(const arma::umat& gamma, const SelectionPriorState& state,
                             const Hyperparameters& hyper, const MrfGraph& mrf,
                             arma::uword j, arma::uword k) {
    const bool on = gamma(j, k) != 0;  // current value; delta is for toggling it
    const double sign = on ? -1.0 : 1.0;
    switch (state.kind) {
        case GammaPriorKind::Hierarchical: {
            const double w = state.omega(j);
            return sign * (std::log(w) - std::log1p(-w));
        }
        case GammaPriorKind::Hotspot: {
            const double w = hotspot_omega(state.o(k), state.pi(j));
            return sign * (std::log(w) - std::log1p(-w));
        }
        case GammaPriorKind::Mrf: {
            const arma::uword p = gamma.n_rows;
            const arma::uword v = k * p + j;
            double nbr = 0.0;
            for (const auto& [u, w] : mrf.neighbours(v)) {
                if (u == v) continue;
                if (gamma(u % p, u / p) != 0) nbr += w;
            }
            return sign * (*hyper.mrf_d + *hyper.mrf_e * nbr);
        }
    }
    return 0.0;
}

double update_hierarchical_omega(const arma::urowvec& gamma_row, const Hyperparameters& hyper,
                                 RngStream& rng) {
    const double hits = static_cast<double>(arma::accu(gamma_row));
    const double s = static_cast<double>(gamma_row.n_elem);
    return rng.beta(*hyper.a_omega + hits, *hyper.b_omega + s - hits);
}

namespace {

double hotspot_conditional_col(const arma::umat& gamma, arma::uword k, double o_k,
                               const arma::vec& pi) {
    double logP = 0.0;
    for (arma::uword j = 0; j < gamma.n_rows; ++j)
        logP += log_pdf_bernoulli(gamma(j, k) != 0, hotspot_omega(o_k, pi(j)));
    return logP;
}

double hotspot_conditional_row(const arma::umat& gamma, arma::uword j, double pi_j,
                               const arma::vec& o) {
    double logP = 0.0;
    for (arma::uword k = 0; k < gamma.n_cols; ++k)
        logP += log_pdf_bernoulli(gamma(j, k) != 0, hotspot_omega(o(k), pi_j));
    return logP;
}

}  // namespace

arma::uword update_hotspot(SelectionPriorState& state, const arma::umat& gamma,
                           const Hyperparameters& hyper, const HotspotScales& scales,
                           RngStream& rng) {
    arma::uword accepted = 0;

    // o_k random walk on the logit scale
    for (arma::uword k = 0; k < state.o.n_elem; ++k) {
        const double cur = state.o(k);
        const double logit_cur = std::log(cur) - std::log1p(-cur);
        const double logit_new = logit_cur + rng.normal(0.0, scales.o_step);
        const double prop = 1.0 / (1.0 + std::exp(-logit_new));
        if (prop <= 0.0 || prop >= 1.0) continue;
        double logA = log_pdf_beta(prop, *hyper.a_o, *hyper.b_o) -
                      log_pdf_beta(cur, *hyper.a_o, *hyper.b_o);
        logA += hotspot_conditional_col(gamma, k, prop, state.pi) -
                hotspot_conditional_col(gamma, k, cur, state.pi);
        // Jacobian of the logit transform
        logA += std::log(prop) + std::log1p(-prop) - std::log(cur) - std::log1p(-cur);
        if (rng.log_u01() < logA) {
            state.o(k) = prop;
            ++accepted;
        }
    }

    // pi_j random walk on the log scale
    for (arma::uword j = 0; j < state.pi.n_elem; ++j) {
        const double cur = state.pi(j);
        const double prop = std::exp(std::log(cur) + rng.normal(0.0, scales.pi_step));
        if (!(prop > 0.0) || !std::isfinite(prop)) continue;
        double logA = log_pdf_gamma(prop, *hyper.a_pi, *hyper.b_pi) -
                      log_pdf_gamma(cur, *hyper.a_pi, *hyper.b_pi);
        logA += hotspot_conditional_row(gamma, j, prop, state.o) -
                hotspot_conditional_row(gamma, j, cur, state.o);
        logA += std::log(prop) - std::log(cur);
        if (rng.log_u01() < logA) {
            state.pi(j) = prop;
            ++accepted;
        }
    }
    return accepted;
}

double log_prior_graph(const DecomposableGraph& g, double eta) {
    const double m = static_cast<double>(g.n_nodes() * (g.n_nodes() - 1)) / 2.0;
    const double ne = static_cast<double>(g.edge_count());
    return ne * std::log(eta) + (m - ne) * std::log1p(-eta);
}

double update_eta(const DecomposableGraph& g, const Hyperparameters& hyper, RngStream& rng) {
    const double m = static_cast<double>(g.n_nodes() * (g.n_nodes() - 1)) / 2.0;
    const double ne = static_cast<double>(g.edge_count());
    return rng.beta(*hyper.a_eta + ne, *hyper.b_eta + m - ne);
}

double update_w(const arma::vec& beta_selected, const Hyperparameters& hyper, RngStream& rng) {
    const double shape = *hyper.a_w + 0.5 * static_cast<double>(beta_selected.n_elem);
    const double rate = *hyper.b_w + 0.5 * arma::dot(beta_selected, beta_selected);
    return rng.inv_gamma(shape, rate);
}

}  // namespace bsur
