#include <doctest.h>

#include <map>
#include <set>

#include "core/decomposable_graph.hpp"
#include "core/errors.hpp"
#include "oracles.hpp"

using namespace bsur;

namespace {

arma::umat adj_from_bits(arma::uword s, arma::uword bits) {
    arma::umat adj(s, s, arma::fill::zeros);
    arma::uword idx = 0;
    for (arma::uword a = 0; a < s; ++a)
        for (arma::uword b = a + 1; b < s; ++b, ++idx)
            if ((bits >> idx) & 1) adj(a, b) = adj(b, a) = 1;
    return adj;
}

void check_decomposition_invariants(const DecomposableGraph& g) {
    // running intersection bookkeeping: S_1 empty, residuals partition nodes
    REQUIRE(g.n_components() >= 1);
    CHECK(g.separators()[0].empty());
    std::set<arma::uword> seen;
    for (arma::uword q = 0; q < g.n_components(); ++q) {
        for (arma::uword v : g.residuals()[q]) {
            CHECK(seen.insert(v).second);
        }
        // |C_q| = |S_q| + |R_q|
        CHECK(g.cliques()[q].size() == g.separators()[q].size() + g.residuals()[q].size());
    }
    CHECK(seen.size() == g.n_nodes());

    // cliques reconstruct the adjacency
    arma::umat rebuilt(g.n_nodes(), g.n_nodes(), arma::fill::zeros);
    for (const auto& clique : g.cliques())
        for (arma::uword i = 0; i < clique.size(); ++i)
            for (arma::uword j = i + 1; j < clique.size(); ++j)
                rebuilt(clique[i], clique[j]) = rebuilt(clique[j], clique[i]) = 1;
    CHECK(arma::accu(rebuilt != g.adjacency()) == 0);

    // every clique is complete in the graph
    for (const auto& clique : g.cliques())
        for (arma::uword i = 0; i < clique.size(); ++i)
            for (arma::uword j = i + 1; j < clique.size(); ++j)
                CHECK(g.adjacency()(clique[i], clique[j]) == 1);

    // conditioning sets only reference nodes earlier in the perfect order
    std::map<arma::uword, arma::uword> pos;
    for (arma::uword i = 0; i < g.perfect_order().size(); ++i) pos[g.perfect_order()[i]] = i;
    for (arma::uword l = 0; l < g.n_nodes(); ++l)
        for (arma::uword m : g.conditioning_sets()[l]) {
            CHECK(pos[m] < pos[l]);
            CHECK(g.adjacency()(l, m) == 1);
        }
}

}  // namespace

TEST_CASE("is_decomposable on the named examples") {
    CHECK(DecomposableGraph::is_decomposable(DecomposableGraph::complete_graph(4).adjacency()));
    arma::umat cycle(4, 4, arma::fill::zeros);
    cycle(0, 1) = cycle(1, 0) = 1;
    cycle(1, 2) = cycle(2, 1) = 1;
    cycle(2, 3) = cycle(3, 2) = 1;
    cycle(3, 0) = cycle(0, 3) = 1;
    CHECK_FALSE(DecomposableGraph::is_decomposable(cycle));
    CHECK(DecomposableGraph::is_decomposable(arma::umat(5, 5, arma::fill::zeros)));

    arma::umat asym(3, 3, arma::fill::zeros);
    asym(0, 1) = 1;
    CHECK_THROWS_AS(DecomposableGraph::is_decomposable(asym), ConfigError);
}

TEST_CASE("is_decomposable agrees with brute-force PEO search for all graphs, s <= 5") {
    for (arma::uword s = 1; s <= 5; ++s) {
        const arma::uword n_edges = s * (s - 1) / 2;
        for (arma::uword bits = 0; bits < (arma::uword(1) << n_edges); ++bits) {
            const arma::umat adj = adj_from_bits(s, bits);
            CHECK(DecomposableGraph::is_decomposable(adj) == oracle::brute_force_chordal(adj));
        }
    }
}

TEST_CASE("decompose on the named examples") {
    SUBCASE("empty graph: s singleton components") {
        const auto g = DecomposableGraph::empty_graph(4);
        CHECK(g.n_components() == 4);
        for (const auto& sep : g.separators()) CHECK(sep.empty());
        check_decomposition_invariants(g);
    }
    SUBCASE("complete graph: one component") {
        const auto g = DecomposableGraph::complete_graph(5);
        CHECK(g.n_components() == 1);
        CHECK(g.cliques()[0].size() == 5);
        check_decomposition_invariants(g);
    }
    SUBCASE("bowtie: two triangles sharing a node") {
        arma::umat adj(5, 5, arma::fill::zeros);
        auto link = [&](arma::uword a, arma::uword b) { adj(a, b) = adj(b, a) = 1; };
        link(0, 1);
        link(0, 2);
        link(1, 2);
        link(2, 3);
        link(2, 4);
        link(3, 4);
        const auto g = DecomposableGraph::decompose(adj);
        CHECK(g.n_components() == 2);
        CHECK(g.separators()[1].size() == 1);
        CHECK(g.separators()[1][0] == 2);
        check_decomposition_invariants(g);
    }
    SUBCASE("non-decomposable input is rejected") {
        arma::umat cycle(4, 4, arma::fill::zeros);
        cycle(0, 1) = cycle(1, 0) = 1;
        cycle(1, 2) = cycle(2, 1) = 1;
        cycle(2, 3) = cycle(3, 2) = 1;
        cycle(3, 0) = cycle(0, 3) = 1;
        CHECK_THROWS_AS(DecomposableGraph::decompose(cycle), ConfigError);
    }
}

TEST_CASE("decomposition invariants hold for every decomposable graph with s <= 5") {
    for (arma::uword s = 1; s <= 5; ++s) {
        const arma::uword n_edges = s * (s - 1) / 2;
        for (arma::uword bits = 0; bits < (arma::uword(1) << n_edges); ++bits) {
            const arma::umat adj = adj_from_bits(s, bits);
            if (!DecomposableGraph::is_decomposable(adj)) continue;
            check_decomposition_invariants(DecomposableGraph::decompose(adj));
        }
    }
}

TEST_CASE("edge_count and edges") {
    CHECK(DecomposableGraph::empty_graph(6).edge_count() == 0);
    CHECK(DecomposableGraph::complete_graph(7).edge_count() == 21);
    const auto edges = DecomposableGraph::complete_graph(3).edges();
    REQUIRE(edges.size() == 3);
    CHECK(edges[0] == std::pair<arma::uword, arma::uword>{0, 1});
}

TEST_CASE("edge flips: identity at s = 1, legality, exact counts") {
    RngStream rng(11, 0);
    SUBCASE("s = 1 returns the graph unchanged with ratio 0") {
        const auto g = DecomposableGraph::empty_graph(1);
        const auto prop = propose_edge_flip(g, rng);
        CHECK_FALSE(prop.moved);
        CHECK(prop.log_ratio == 0.0);
        CHECK(prop.graph.n_nodes() == 1);
    }
    SUBCASE("empty graph on 3 nodes: all three additions are legal") {
        const auto g = DecomposableGraph::empty_graph(3);
        const auto flips = g.legal_flips();
        CHECK(flips.size() == 3);
        const auto prop = propose_edge_flip(g, rng);
        CHECK(prop.moved);
        CHECK(prop.graph.edge_count() == 1);
        // one edge present: the two remaining additions and the removal are legal
        CHECK(prop.graph.legal_flips().size() == 3);
        CHECK(prop.log_ratio == doctest::Approx(std::log(3.0) - std::log(3.0)));
    }
    SUBCASE("a flip that would create a chordless 4-cycle is never proposed") {
        // path 0-1-2-3: adding 0-3 closes a chordless cycle
        arma::umat adj(4, 4, arma::fill::zeros);
        adj(0, 1) = adj(1, 0) = 1;
        adj(1, 2) = adj(2, 1) = 1;
        adj(2, 3) = adj(3, 2) = 1;
        const auto g = DecomposableGraph::decompose(adj);
        for (const auto& [a, b] : g.legal_flips())
            CHECK_FALSE((a == 0 && b == 3));
        for (int trial = 0; trial < 200; ++trial) {
            const auto prop = propose_edge_flip(g, rng);
            CHECK(DecomposableGraph::is_decomposable(prop.graph.adjacency()));
        }
    }
}

TEST_CASE("edge flip proposals are reversible with consistent ratios, s <= 5") {
    for (arma::uword s = 2; s <= 5; ++s) {
        const arma::uword n_edges = s * (s - 1) / 2;
        for (arma::uword bits = 0; bits < (arma::uword(1) << n_edges); ++bits) {
            const arma::umat adj = adj_from_bits(s, bits);
            if (!DecomposableGraph::is_decomposable(adj)) continue;
            const auto g = DecomposableGraph::decompose(adj);
            const auto flips = g.legal_flips();
            CHECK(!flips.empty());
            for (const auto& [a, b] : flips) {
                const auto g2 = g.with_flip(a, b);
                // the reverse flip is legal from g2 and restores g
                const auto back = g2.legal_flips();
                bool found = false;
                for (const auto& [c, d] : back)
                    if (c == a && d == b) found = true;
                CHECK(found);
                CHECK(arma::accu(g2.with_flip(a, b).adjacency() != adj) == 0);
                // ratio consistency: log N_g - log N_g2 from either direction
                const double fwd = std::log((double)flips.size()) - std::log((double)back.size());
                const double rev = std::log((double)back.size()) - std::log((double)flips.size());
                CHECK(fwd == doctest::Approx(-rev));
            }
        }
    }
}

TEST_CASE("uniform choice over legal flips") {
    // two nodes: the single edge toggles back and forth
    auto g = DecomposableGraph::empty_graph(2);
    RngStream rng(5, 0);
    int added = 0;
    for (int i = 0; i < 100; ++i) {
        const auto prop = propose_edge_flip(g, rng);
        added += prop.graph.edge_count();
        g = prop.graph;
    }
    CHECK(added > 0);
}
