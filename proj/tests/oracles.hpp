// Test-only reference implementations, kept independent of the library code
// paths they check: quadrature integrators, brute-force graph search,
// exhaustive model enumeration and covariance reassembly.
#pragma once

#include <armadillo>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Composite Simpson on [lo, hi]; n_panels even.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int n_panels = 400) {
    const double h = (hi - lo) / n_panels;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n_panels; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Gauss-Legendre 64-point on [lo, hi] applied per subinterval.
inline double gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                             int n_sub = 8) {
    static const arma::vec x = [] {
        arma::vec nodes(32);
        // roots of P_64 on (0,1) half-interval, computed by Newton from cos guesses
        for (int i = 0; i < 32; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (64 + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= 64; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = 64.0 * (t * p1 - p0) / (t * t - 1.0);
                const double t_new = t - p1 / dp;
                if (std::fabs(t_new - t) < 1e-15) {
                    t = t_new;
                    break;
                }
                t = t_new;
            }
            nodes(i) = t;
        }
        return nodes;
    }();
    static const arma::vec wts = [] {
        arma::vec w(32);
        for (int i = 0; i < 32; ++i) {
            double t = x(i);
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= 64; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = 64.0 * (t * p1 - p0) / (t * t - 1.0);
            w(i) = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        return w;
    }();

    double total = 0.0;
    const double step = (hi - lo) / n_sub;
    for (int spanidx = 0; spanidx < n_sub; ++spanidx) {
        const double a = lo + spanidx * step, b = a + step;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < 32; ++i) {
            total += wts(i) * half * (f(mid + half * x(i)) + f(mid - half * x(i)));
        }
    }
    return total;
}

inline double log_pdf_ig(double x, double shape, double rate) {
    if (x <= 0.0) return -INFINITY;
    return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

inline double log_pdf_gamma(double x, double shape, double rate) {
    if (x <= 0.0) return -INFINITY;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

inline double log_mvn(const arma::vec& r, const arma::mat& cov) {
    const arma::mat L = arma::chol(cov, "lower");
    const arma::vec z = arma::solve(arma::trimatl(L), r);
    return -0.5 * (r.n_elem * std::log(2.0 * M_PI) + arma::dot(z, z)) -
           arma::accu(arma::log(L.diag()));
}

// Backtracking search over elimination orderings for a perfect elimination
// ordering; the brute-force chordality oracle.
inline bool has_peo(const arma::umat& adj, std::vector<arma::uword>& remaining) {
    if (remaining.empty()) return true;
    for (size_t pick = 0; pick < remaining.size(); ++pick) {
        const arma::uword v = remaining[pick];
        bool simplicial = true;
        for (size_t a = 0; a < remaining.size() && simplicial; ++a) {
            if (remaining[a] == v || !adj(v, remaining[a])) continue;
            for (size_t b = a + 1; b < remaining.size() && simplicial; ++b) {
                if (remaining[b] == v || !adj(v, remaining[b])) continue;
                if (!adj(remaining[a], remaining[b])) simplicial = false;
            }
        }
        if (!simplicial) continue;
        std::vector<arma::uword> rest;
        for (auto u : remaining)
            if (u != v) rest.push_back(u);
        if (has_peo(adj, rest)) return true;
    }
    return false;
}

inline bool brute_force_chordal(const arma::umat& adj) {
    std::vector<arma::uword> all;
    for (arma::uword v = 0; v < adj.n_rows; ++v) all.push_back(v);
    return has_peo(adj, all);
}

// Rebuild the dense covariance implied by the factorised (sigma, rho) state:
// walking the assembly order, Var(u_l | cond) = sigma_l and the loadings fill
// the covariances with every earlier variable.
inline arma::mat assemble_covariance(const arma::mat& sigma_rho,
                                     const std::vector<std::vector<arma::uword>>& cond,
                                     const std::vector<arma::uword>& order) {
    const arma::uword s = sigma_rho.n_rows;
    arma::mat C(s, s, arma::fill::zeros);
    std::vector<arma::uword> done;
    for (arma::uword l : order) {
        const auto& c = cond[l];
        C(l, l) = sigma_rho(l, l);
        for (arma::uword m : done) {
            double cov_lm = 0.0;
            for (arma::uword i = 0; i < c.size(); ++i) cov_lm += sigma_rho(c[i], l) * C(c[i], m);
            C(l, m) = C(m, l) = cov_lm;
        }
        for (arma::uword i = 0; i < c.size(); ++i) C(l, l) += sigma_rho(c[i], l) * C(l, c[i]);
        done.push_back(l);
    }
    return C;
}

// Matrix-normal density of Y = XB + U with vec(U) ~ N(0, C x I_n): rows of U
// are iid N(0, C).
inline double matrix_normal_loglik(const arma::mat& Y, const arma::mat& XB, const arma::mat& C) {
    const arma::mat U = Y - XB;
    const arma::mat L = arma::chol(C, "lower");
    const double logdet = 2.0 * arma::accu(arma::log(L.diag()));
    const arma::mat Z = arma::solve(arma::trimatl(L), U.t());
    const double n = static_cast<double>(Y.n_rows), s = static_cast<double>(Y.n_cols);
    return -0.5 * n * s * std::log(2.0 * M_PI) - 0.5 * n * logdet -
           0.5 * arma::accu(arma::square(Z));
}

// All binary matrices of given size, for exhaustive indicator enumeration.
inline std::vector<arma::umat> all_binary_matrices(arma::uword rows, arma::uword cols) {
    std::vector<arma::umat> out;
    const arma::uword total = rows * cols;
    for (arma::uword bits = 0; bits < (arma::uword(1) << total); ++bits) {
        arma::umat g(rows, cols);
        for (arma::uword i = 0; i < total; ++i) g(i) = (bits >> i) & 1;
        out.push_back(g);
    }
    return out;
}

}  // namespace oracle
