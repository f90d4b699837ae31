#pragma once

#include <armadillo>
#include <vector>

#include "core/decomposable_graph.hpp"
#include "core/model_spec.hpp"
#include "core/rng.hpp"

namespace bsur {

// Hotspot probabilities o_k * pi_j are clamped at 1 - kOmegaEps so the
// Bernoulli density stays finite; pi is Gamma-distributed and the product can
// exceed one.
inline constexpr double kOmegaEps = 1e-10;

// Adjacency of the MRF prior over the flattened p x s indicators, built once
// from the validated edge list (upper-triangle, each undirected edge once).
class MrfGraph {
public:
    MrfGraph() = default;
    MrfGraph(const std::vector<MrfEdge>& edges, arma::uword n_vertices);

    arma::uword n_vertices() const { return n_vertices_; }
    const std::vector<std::pair<arma::uword, double>>& neighbours(arma::uword v) const {
        return adj_[v];
    }

private:
    arma::uword n_vertices_ = 0;
    std::vector<std::vector<std::pair<arma::uword, double>>> adj_;
};

// State of whichever selection prior is active. gamma itself lives in the
// chain; this holds the prior-level random quantities.
struct SelectionPriorState {
    GammaPriorKind kind = GammaPriorKind::Hotspot;
    arma::vec omega;  // hierarchical: per predictor
    arma::vec o;      // hotspot: per response
    arma::vec pi;     // hotspot: per predictor
};

double hotspot_omega(double o_k, double pi_j);

// Unnormalised log prior of the whole indicator matrix.
double log_prior_gamma(const arma::umat& gamma, const SelectionPriorState& state,
                       const Hyperparameters& hyper, const MrfGraph& mrf);

// log prior(gamma with (j,k) flipped) - log prior(gamma); O(deg) for MRF.
double log_prior_gamma_delta(const arma::umat& gamma, const SelectionPriorState& state,
                             const Hyperparameters& hyper, const MrfGraph& mrf,
                             arma::uword j, arma::uword k);

// Conjugate Beta draw for one omega_j given row j of gamma.
double update_hierarchical_omega(const arma::urowvec& gamma_row, const Hyperparameters& hyper,
                                 RngStream& rng);

// One random-walk MH scan over all o_k (logit scale) and pi_j (log scale).
// Returns the number of accepted proposals; scales are tuned by the caller.
struct HotspotScales {
    double o_step = 0.5;
    double pi_step = 0.5;
};
arma::uword update_hotspot(SelectionPriorState& state, const arma::umat& gamma,
                           const Hyperparameters& hyper, const HotspotScales& scales,
                           RngStream& rng);

// Graph edge prior (Eq. on the response graph): Bernoulli(eta) per edge.
double log_prior_graph(const DecomposableGraph& g, double eta);
double update_eta(const DecomposableGraph& g, const Hyperparameters& hyper, RngStream& rng);

// Conjugate slab-variance draw given the selected coefficients.
double update_w(const arma::vec& beta_selected, const Hyperparameters& hyper, RngStream& rng);

}  // namespace bsur
