#pragma once

#include <armadillo>
#include <vector>

#include "core/rng.hpp"

namespace bsur {

// Decomposable (chordal) graph over the s responses together with a perfect
// clique sequence: prime components C_q, separators S_q (S_1 empty) and the
// residuals R_q = C_q \ S_q. Residuals partition the node set; concatenating
// them gives a perfect numbering of the nodes.
class DecomposableGraph {
public:
    DecomposableGraph() = default;  // zero nodes

    static bool is_decomposable(const arma::umat& adjacency);
    static DecomposableGraph decompose(const arma::umat& adjacency);
    static DecomposableGraph empty_graph(arma::uword s);
    static DecomposableGraph complete_graph(arma::uword s);

    arma::uword n_nodes() const { return s_; }
    const arma::umat& adjacency() const { return adj_; }
    arma::uword edge_count() const;
    std::vector<std::pair<arma::uword, arma::uword>> edges() const;  // a < b

    arma::uword n_components() const { return cliques_.size(); }
    const std::vector<std::vector<arma::uword>>& cliques() const { return cliques_; }
    const std::vector<std::vector<arma::uword>>& separators() const { return seps_; }
    const std::vector<std::vector<arma::uword>>& residuals() const { return residuals_; }
    // perfect numbering: residual blocks in sequence order, ascending inside
    const std::vector<arma::uword>& perfect_order() const { return order_; }
    // for each node: the nodes it is conditioned on (its separator plus the
    // earlier residuals of its component), sorted ascending
    const std::vector<std::vector<arma::uword>>& conditioning_sets() const { return cond_; }

    bool has_edge(arma::uword a, arma::uword b) const { return adj_(a, b) != 0; }
    // all single-edge toggles that keep the graph decomposable
    std::vector<std::pair<arma::uword, arma::uword>> legal_flips() const;
    DecomposableGraph with_flip(arma::uword a, arma::uword b) const;

private:
    void build_decomposition();

    arma::uword s_ = 0;
    arma::umat adj_;
    std::vector<std::vector<arma::uword>> cliques_, seps_, residuals_;
    std::vector<arma::uword> order_;
    std::vector<std::vector<arma::uword>> cond_;
};

struct EdgeFlipProposal {
    DecomposableGraph graph;
    arma::uword a = 0, b = 0;
    bool moved = false;          // false only for s == 1
    double log_ratio = 0.0;      // log q(g | g') - log q(g' | g)
};

// Uniform draw over the decomposability-preserving single-edge flips.
EdgeFlipProposal propose_edge_flip(const DecomposableGraph& g, RngStream& rng);

}  // namespace bsur
