#include "core/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/dists.hpp"
#include "core/errors.hpp"

namespace bsur {

QuickstartTruth simulate_quickstart(std::uint64_t seed) {
    const arma::uword n = 10, s = 3, p = 15;
    RngStream rng(seed, 0);
    QuickstartTruth out;
    out.B_true.zeros(p, s);
    out.B_true(0, 2) = 1.0;
    out.B_true(1, 0) = 1.0;
    out.B_true(1, 1) = 1.0;
    out.B_true(2, 0) = 1.0;
    out.B_true(2, 1) = 1.0;
    out.B_true(3, 2) = 1.0;
    out.gamma_true = arma::conv_to<arma::umat>::from(out.B_true != 0.0);

    arma::mat X(n, p);
    for (arma::uword j = 0; j < p; ++j)
        for (arma::uword i = 0; i < n; ++i) X(i, j) = rng.normal(2.0, 1.0);
    arma::mat E(n, s);
    for (arma::uword k = 0; k < s; ++k)
        for (arma::uword i = 0; i < n; ++i) E(i, k) = rng.normal(0.0, 0.2);

    out.data.X = X;
    out.data.Y = X * out.B_true + E;
    out.data.X0.set_size(n, 0);
    for (arma::uword k = 0; k < s; ++k) out.data.y_names.push_back("y" + std::to_string(k + 1));
    for (arma::uword j = 0; j < p; ++j) out.data.x_names.push_back("x" + std::to_string(j + 1));
    return out;
}

arma::umat eqtl_default_graph(arma::uword s) {
    arma::umat adj(s, s, arma::fill::zeros);
    const arma::uword g1 = std::max<arma::uword>(1, (6 * s + 9) / 10);  // ceil(0.6 s)
    for (arma::uword a = 0; a < s; ++a)
        for (arma::uword b = a + 1; b < s; ++b)
            if ((a < g1) == (b < g1)) adj(a, b) = adj(b, a) = 1;
    return adj;
}

arma::umat eqtl_default_gamma(arma::uword p, arma::uword s) {
    arma::umat g(p, s, arma::fill::zeros);
    const arma::uword g1 = std::max<arma::uword>(1, (6 * s + 9) / 10);
    auto clip = [p](arma::uword j) { return std::min(j, p - 1); };
    // SNP block for the first response group
    for (arma::uword j : {clip(p / 10), clip(p / 10 + 1), clip(p / 10 + 2)})
        for (arma::uword k = 0; k < g1; ++k) g(j, k) = 1;
    // SNP block for the second group
    for (arma::uword j : {clip(p / 2), clip(p / 2 + 1), clip(p / 2 + 2)})
        for (arma::uword k = g1; k < s; ++k) g(j, k) = 1;
    // hotspot SNPs across every response
    for (arma::uword k = 0; k < s; ++k) {
        g(clip(p / 5), k) = 1;
        g(clip(p / 5 + 1), k) = 1;
    }
    // two isolated associations
    g(clip(3 * p / 4), 0) = 1;
    if (s > 1) g(clip(4 * p / 5), s - 1) = 1;
    return g;
}

GWishartDraw sample_gwishart_decomposable(const DecomposableGraph& graph, double delta,
                                          const arma::mat& M, RngStream& rng) {
    if (!(delta > 0.0)) throw ConfigError("G-Wishart delta must be positive");
    const arma::uword s = graph.n_nodes();
    if (M.n_rows != s || M.n_cols != s) throw ConfigError("G-Wishart scale has wrong size");

    // Sequential conditional construction of Sigma = K^{-1} in the perfect
    // numbering; node l conditions on its separator plus the earlier residuals
    // of its component. The IG shape (delta + |cond|)/2 reduces to the Bartlett
    // shapes of a Wishart(delta + s - 1, M^{-1}) when the graph is complete.
    arma::mat Sigma(s, s, arma::fill::zeros);
    std::vector<arma::uword> done;
    for (arma::uword l : graph.perfect_order()) {
        const auto& cond = graph.conditioning_sets()[l];
        const arma::uword q = cond.size();
        double sig;
        arma::vec rho;
        if (q == 0) {
            sig = rng.inv_gamma(0.5 * delta, 0.5 * M(l, l));
        } else {
            arma::uvec c(q);
            for (arma::uword i = 0; i < q; ++i) c(i) = cond[i];
            const arma::mat Mcc = M(c, c);
            const arma::vec mcl = M(c, arma::uvec{l});
            const arma::mat L = chol_lower_jitter(Mcc, "gwishart scale block");
            const arma::mat Linv = arma::inv(arma::trimatl(L));
            const arma::mat Mcc_inv = Linv.t() * Linv;
            const arma::vec mean = Mcc_inv * mcl;
            const double schur = M(l, l) - arma::dot(mcl, mean);
            sig = rng.inv_gamma(0.5 * (delta + static_cast<double>(q)), 0.5 * schur);
            rho = rng.mv_normal(mean, sig * Mcc_inv);
        }
        // extend Sigma: Var(u_l | cond) = sig, E[u_l | cond] = rho' u_cond
        Sigma(l, l) = sig;
        for (arma::uword m : done) {
            double cov_lm = 0.0;
            for (arma::uword i = 0; i < q; ++i) cov_lm += rho(i) * Sigma(cond[i], m);
            Sigma(l, m) = Sigma(m, l) = cov_lm;
        }
        for (arma::uword i = 0; i < q; ++i) Sigma(l, l) += rho(i) * Sigma(l, cond[i]);
        done.push_back(l);
    }

    GWishartDraw out;
    out.covariance = Sigma;
    out.precision = arma::inv_sympd(Sigma);
    // the completion puts exact zeros on non-edges; clear rounding residue
    for (arma::uword a = 0; a < s; ++a)
        for (arma::uword b = a + 1; b < s; ++b)
            if (!graph.has_edge(a, b)) out.precision(a, b) = out.precision(b, a) = 0.0;
    return out;
}

EqtlTruth simulate_eqtl(const EqtlRecipe& recipe) {
    const arma::uword n = recipe.n, p = recipe.p, s = recipe.s;
    RngStream rng(recipe.seed, 0);
    EqtlTruth out;
    out.gamma_true = recipe.gamma_true.n_elem ? recipe.gamma_true : eqtl_default_gamma(p, s);
    arma::umat adj = recipe.graph_true.n_elem ? recipe.graph_true : eqtl_default_graph(s);
    if (out.gamma_true.n_rows != p || out.gamma_true.n_cols != s)
        throw ConfigError("gamma_true has wrong dimensions");
    const DecomposableGraph graph = DecomposableGraph::decompose(adj);
    out.graph_true = adj;

    // synthetic SNPs: per-column allele frequency, genotype 0/1/2
    arma::mat X(n, p);
    for (arma::uword j = 0; j < p; ++j) {
        const double f = recipe.maf_min + (recipe.maf_max - recipe.maf_min) * rng.u01();
        for (arma::uword i = 0; i < n; ++i)
            X(i, j) = static_cast<double>(rng.bernoulli(f)) + static_cast<double>(rng.bernoulli(f));
    }

    out.B_true.zeros(p, s);
    for (arma::uword k = 0; k < s; ++k)
        for (arma::uword j = 0; j < p; ++j)
            if (out.gamma_true(j, k)) out.B_true(j, k) = rng.normal(0.0, recipe.coef_sd);

    arma::mat Utilde(n, s);
    for (arma::uword k = 0; k < s; ++k)
        for (arma::uword i = 0; i < n; ++i) Utilde(i, k) = rng.normal(0.0, recipe.noise_sd);

    arma::mat M(s, s);
    M.fill(recipe.m_offdiag);
    M.diag().ones();
    M *= recipe.m_scale;
    const GWishartDraw gw = sample_gwishart_decomposable(graph, recipe.gwishart_delta, M, rng);
    out.precision = gw.precision;
    // U = Utilde * chol(P^{-1}) with the upper factor, so Cov(rows) = noise_sd^2 P^{-1}
    arma::mat R = arma::chol(gw.covariance);
    arma::mat U = Utilde * R;

    const arma::mat signal = X * out.B_true;
    out.data.X = X;
    out.data.Y = signal + U;
    out.data.X0.set_size(n, 0);
    for (arma::uword k = 0; k < s; ++k) out.data.y_names.push_back("GEX" + std::to_string(k + 1));
    for (arma::uword j = 0; j < p; ++j) out.data.x_names.push_back("SNP" + std::to_string(j + 1));

    double snr = 0.0;
    for (arma::uword k = 0; k < s; ++k) {
        const double vs = arma::var(signal.col(k));
        const double vu = arma::var(U.col(k));
        snr += vu > 0.0 ? vs / vu : 0.0;
    }
    out.snr = snr / static_cast<double>(s);
    return out;
}

std::vector<MrfEdge> build_mrf_graph(const std::vector<MrfPair>& pairs, arma::uword p,
                                     arma::uword s) {
    std::set<std::pair<arma::uword, arma::uword>> seen;
    std::vector<MrfEdge> edges;
    for (const auto& pair : pairs) {
        std::vector<arma::uword> nodes;
        for (arma::uword k : pair.responses) {
            if (k >= s) throw ConfigError("build_mrf_graph: response index out of range");
            for (arma::uword j : pair.predictors) {
                if (j >= p) throw ConfigError("build_mrf_graph: predictor index out of range");
                nodes.push_back(k * p + j);
            }
        }
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        for (arma::uword a = 0; a < nodes.size(); ++a)
            for (arma::uword b = a + 1; b < nodes.size(); ++b)
                if (seen.insert({nodes[a], nodes[b]}).second)
                    edges.push_back({nodes[a], nodes[b], 1.0});
    }
    return edges;
}

}  // namespace bsur
