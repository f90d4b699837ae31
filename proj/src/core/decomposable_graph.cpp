#include "core/decomposable_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "core/errors.hpp"

namespace bsur {

namespace {

void check_symmetric(const arma::umat& adj) {
    if (adj.n_rows != adj.n_cols) throw ConfigError("adjacency matrix must be square");
    for (arma::uword i = 0; i < adj.n_rows; ++i) {
        if (adj(i, i) != 0) throw ConfigError("adjacency matrix must have a zero diagonal");
        for (arma::uword j = i + 1; j < adj.n_cols; ++j)
            if (adj(i, j) != adj(j, i))
                throw ConfigError("adjacency matrix must be symmetric");
    }
}

// Maximum cardinality search; ties broken towards the lowest node index.
std::vector<arma::uword> mcs_order(const arma::umat& adj) {
    const arma::uword s = adj.n_rows;
    std::vector<arma::uword> order;
    order.reserve(s);
    std::vector<arma::uword> weight(s, 0);
    std::vector<bool> numbered(s, false);
    for (arma::uword step = 0; step < s; ++step) {
        arma::uword best = s;
        for (arma::uword v = 0; v < s; ++v)
            if (!numbered[v] && (best == s || weight[v] > weight[best])) best = v;
        numbered[best] = true;
        order.push_back(best);
        for (arma::uword u = 0; u < s; ++u)
            if (!numbered[u] && adj(best, u)) ++weight[u];
    }
    return order;
}

// Chordal iff for every vertex the earlier-visited neighbours form a clique.
bool mcs_is_chordal(const arma::umat& adj, const std::vector<arma::uword>& order) {
    const arma::uword s = adj.n_rows;
    std::vector<arma::uword> pos(s);
    for (arma::uword i = 0; i < s; ++i) pos[order[i]] = i;
    for (arma::uword i = 0; i < s; ++i) {
        const arma::uword v = order[i];
        std::vector<arma::uword> earlier;
        for (arma::uword u = 0; u < s; ++u)
            if (adj(v, u) && pos[u] < i) earlier.push_back(u);
        for (arma::uword a = 0; a < earlier.size(); ++a)
            for (arma::uword b = a + 1; b < earlier.size(); ++b)
                if (!adj(earlier[a], earlier[b])) return false;
    }
    return true;
}

}  // namespace

bool DecomposableGraph::is_decomposable(const arma::umat& adjacency) {
    check_symmetric(adjacency);
    if (adjacency.n_rows <= 1) return true;
    return mcs_is_chordal(adjacency, mcs_order(adjacency));
}

DecomposableGraph DecomposableGraph::empty_graph(arma::uword s) {
    return decompose(arma::zeros<arma::umat>(s, s));
}

DecomposableGraph DecomposableGraph::complete_graph(arma::uword s) {
    arma::umat adj = arma::ones<arma::umat>(s, s);
    adj.diag().zeros();
    return decompose(adj);
}

DecomposableGraph DecomposableGraph::decompose(const arma::umat& adjacency) {
    check_symmetric(adjacency);
    const auto order = mcs_order(adjacency);
    if (adjacency.n_rows > 1 && !mcs_is_chordal(adjacency, order))
        throw ConfigError("graph is not decomposable");
    DecomposableGraph g;
    g.s_ = adjacency.n_rows;
    g.adj_ = adjacency;
    g.build_decomposition();
    return g;
}

void DecomposableGraph::build_decomposition() {
    cliques_.clear();
    seps_.clear();
    residuals_.clear();
    order_.clear();
    cond_.assign(s_, {});
    if (s_ == 0) return;

    // candidate cliques from the MCS order, then keep the maximal ones
    const auto order = mcs_order(adj_);
    std::vector<arma::uword> pos(s_);
    for (arma::uword i = 0; i < s_; ++i) pos[order[i]] = i;
    std::vector<std::vector<arma::uword>> cands;
    for (arma::uword i = 0; i < s_; ++i) {
        const arma::uword v = order[i];
        std::vector<arma::uword> c{v};
        for (arma::uword u = 0; u < s_; ++u)
            if (adj_(v, u) && pos[u] < i) c.push_back(u);
        std::sort(c.begin(), c.end());
        cands.push_back(std::move(c));
    }
    std::vector<std::vector<arma::uword>> maximal;
    for (arma::uword i = 0; i < cands.size(); ++i) {
        bool keep = true;
        for (arma::uword j = 0; j < cands.size() && keep; ++j) {
            if (i == j) continue;
            const bool subset = std::includes(cands[j].begin(), cands[j].end(),
                                              cands[i].begin(), cands[i].end());
            if (subset && (cands[j].size() > cands[i].size() || j < i)) keep = false;
        }
        if (keep) maximal.push_back(cands[i]);
    }

    // maximum-weight spanning tree over pairwise clique intersections (Prim),
    // then a BFS from the root gives a perfect sequence with S_q = C_q n parent
    const arma::uword m = maximal.size();
    std::vector<bool> in_tree(m, false);
    std::vector<long long> parent(m, -1);
    std::vector<arma::uword> bfs;
    in_tree[0] = true;
    bfs.push_back(0);
    auto isect_size = [&](arma::uword a, arma::uword b) {
        std::vector<arma::uword> tmp;
        std::set_intersection(maximal[a].begin(), maximal[a].end(),
                              maximal[b].begin(), maximal[b].end(), std::back_inserter(tmp));
        return tmp.size();
    };
    for (arma::uword step = 1; step < m; ++step) {
        arma::uword best_c = m, best_p = m;
        std::size_t best_w = 0;
        bool found = false;
        for (arma::uword c = 0; c < m; ++c) {
            if (in_tree[c]) continue;
            for (arma::uword t : bfs) {
                const std::size_t w = isect_size(c, t);
                if (!found || w > best_w || (w == best_w && (c < best_c || (c == best_c && t < best_p)))) {
                    found = true;
                    best_w = w;
                    best_c = c;
                    best_p = t;
                }
            }
        }
        in_tree[best_c] = true;
        parent[best_c] = static_cast<long long>(best_p);
        bfs.push_back(best_c);
    }

    for (arma::uword qi = 0; qi < m; ++qi) {
        const arma::uword q = bfs[qi];
        const auto& cq = maximal[q];
        std::vector<arma::uword> sep;
        if (parent[q] >= 0) {
            const auto& par = maximal[static_cast<arma::uword>(parent[q])];
            std::set_intersection(cq.begin(), cq.end(), par.begin(), par.end(),
                                  std::back_inserter(sep));
        }
        std::vector<arma::uword> res;
        std::set_difference(cq.begin(), cq.end(), sep.begin(), sep.end(),
                            std::back_inserter(res));
        cliques_.push_back(cq);
        seps_.push_back(sep);
        residuals_.push_back(res);
        for (arma::uword t = 0; t < res.size(); ++t) {
            const arma::uword node = res[t];
            std::vector<arma::uword> cond = sep;
            cond.insert(cond.end(), res.begin(), res.begin() + t);
            std::sort(cond.begin(), cond.end());
            cond_[node] = std::move(cond);
            order_.push_back(node);
        }
    }
}

arma::uword DecomposableGraph::edge_count() const {
    return arma::accu(adj_) / 2;
}

std::vector<std::pair<arma::uword, arma::uword>> DecomposableGraph::edges() const {
    std::vector<std::pair<arma::uword, arma::uword>> out;
    for (arma::uword a = 0; a < s_; ++a)
        for (arma::uword b = a + 1; b < s_; ++b)
            if (adj_(a, b)) out.emplace_back(a, b);
    return out;
}

std::vector<std::pair<arma::uword, arma::uword>> DecomposableGraph::legal_flips() const {
    std::vector<std::pair<arma::uword, arma::uword>> out;
    arma::umat adj = adj_;
    for (arma::uword a = 0; a < s_; ++a)
        for (arma::uword b = a + 1; b < s_; ++b) {
            adj(a, b) = adj(b, a) = 1 - adj(a, b);
            if (is_decomposable(adj)) out.emplace_back(a, b);
            adj(a, b) = adj(b, a) = 1 - adj(a, b);
        }
    return out;
}

DecomposableGraph DecomposableGraph::with_flip(arma::uword a, arma::uword b) const {
    arma::umat adj = adj_;
    adj(a, b) = adj(b, a) = 1 - adj(a, b);
    return decompose(adj);
}

EdgeFlipProposal propose_edge_flip(const DecomposableGraph& g, RngStream& rng) {
    EdgeFlipProposal prop;
    if (g.n_nodes() <= 1) {
        prop.graph = g;
        return prop;
    }
    const auto flips = g.legal_flips();
    const auto [a, b] = flips[rng.uniform_int(flips.size())];
    prop.graph = g.with_flip(a, b);
    prop.a = a;
    prop.b = b;
    prop.moved = true;
    const auto back = prop.graph.legal_flips();
    prop.log_ratio = std::log(static_cast<double>(flips.size())) -
                     std::log(static_cast<double>(back.size()));
    return prop;
}

}  // namespace bsur
