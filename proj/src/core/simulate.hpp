#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "core/dataset.hpp"
#include "core/decomposable_graph.hpp"
#include "core/model_spec.hpp"
#include "core/rng.hpp"

namespace bsur {

struct QuickstartTruth {
    Dataset data;       // n=10, s=3, p=15
    arma::mat B_true;   // 15 x 3, six unit entries
    arma::umat gamma_true;
};

QuickstartTruth simulate_quickstart(std::uint64_t seed);

struct EqtlRecipe {
    arma::uword n = 100, p = 150, s = 10;
    double coef_sd = 1.0;       // beta_jk ~ N(0, coef_sd^2)
    double noise_sd = 0.5;      // utilde ~ N(0, noise_sd^2)
    double gwishart_delta = 2.0;
    double m_offdiag = 0.9;     // scale matrix: m_scale on the diagonal,
    double m_scale = 1.0;       // m_scale * m_offdiag elsewhere
    double maf_min = 0.05, maf_max = 0.5;
    std::uint64_t seed = 1;
    // empty: use the built-in block designs below
    arma::umat gamma_true;
    arma::umat graph_true;
};

struct EqtlTruth {
    Dataset data;
    arma::umat gamma_true;   // p x s
    arma::umat graph_true;   // s x s
    arma::mat B_true;        // p x s (already masked)
    arma::mat precision;     // s x s draw from the G-Wishart
    double snr = 0.0;        // mean_k Var(X beta_k) / Var(u_k)
};

EqtlTruth simulate_eqtl(const EqtlRecipe& recipe);

// Two connected response groups (sizes ceil(0.6 s) and the rest), mirroring
// the block structure of the eQTL study truth.
arma::umat eqtl_default_graph(arma::uword s);
// Structured sparse indicator blocks: two SNP groups tied to the response
// groups, one hotspot SNP hitting every response, two single associations.
arma::umat eqtl_default_gamma(arma::uword p, arma::uword s);

// Draw K ~ W_G(delta, M) restricted to a decomposable graph, by clique-wise
// composition along the junction tree. On the complete graph this is a
// Wishart with delta + s - 1 degrees of freedom and scale M^{-1}.
struct GWishartDraw {
    arma::mat precision;   // zero exactly on non-edges
    arma::mat covariance;  // its inverse (the positive-definite completion)
};
GWishartDraw sample_gwishart_decomposable(const DecomposableGraph& graph, double delta,
                                          const arma::mat& M, RngStream& rng);

// MRF prior edges from (predictor set, response set) pairs: all flattened
// indicator indices in a pair become pairwise connected with weight 1.
struct MrfPair {
    std::vector<arma::uword> predictors;  // 0-based
    std::vector<arma::uword> responses;
};
std::vector<MrfEdge> build_mrf_graph(const std::vector<MrfPair>& pairs, arma::uword p,
                                     arma::uword s);

}  // namespace bsur
