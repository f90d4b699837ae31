#include "core/ess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "core/dists.hpp"
#include "core/errors.hpp"

namespace bsur {

namespace {

// Threaded BLAS reductions are not bit-reproducible under varying machine
// load; pin to one thread unless the caller configured otherwise.
void pin_blas_threads() {
    static const bool once = [] {
        setenv("OPENBLAS_NUM_THREADS", "1", 0);
        setenv("OMP_NUM_THREADS", "1", 0);
        return true;
    }();
    (void)once;
}

}  // namespace

ElpdAccumulator::ElpdAccumulator(arma::uword n, arma::uword s) {
    const double ninf = -std::numeric_limits<double>::infinity();
    neg_max_.set_size(n, s); neg_max_.fill(ninf);
    pos_max_.set_size(n, s); pos_max_.fill(ninf);
    neg_sum_.zeros(n, s);
    pos_sum_.zeros(n, s);
    mean_log_.zeros(n, s);
    m2_log_.zeros(n, s);
    w_m1_.zeros(n, s);
    w_m2_.zeros(n, s);
    w_m3_.zeros(n, s);
    w_m4_.zeros(n, s);
}

void ElpdAccumulator::add(const arma::mat& log_density) {
    ++T_;
    const double t = static_cast<double>(T_);
    for (arma::uword idx = 0; idx < log_density.n_elem; ++idx) {
        const double lf = log_density(idx);
        const double neg = -lf;

        // harmonic-mean accumulator (weights w = exp(neg)), rescaled to the max
        if (neg > neg_max_(idx)) {
            const double shift = std::exp(neg_max_(idx) - neg);
            neg_sum_(idx) = neg_sum_(idx) * shift + 1.0;
            w_m1_(idx) = w_m1_(idx) * shift + 1.0;
            w_m2_(idx) = w_m2_(idx) * shift * shift + 1.0;
            w_m3_(idx) = w_m3_(idx) * shift * shift * shift + 1.0;
            w_m4_(idx) = w_m4_(idx) * shift * shift * shift * shift + 1.0;
            neg_max_(idx) = neg;
        } else {
            const double e = std::exp(neg - neg_max_(idx));
            neg_sum_(idx) += e;
            w_m1_(idx) += e;
            w_m2_(idx) += e * e;
            w_m3_(idx) += e * e * e;
            w_m4_(idx) += e * e * e * e;
        }

        if (lf > pos_max_(idx)) {
            pos_sum_(idx) = pos_sum_(idx) * std::exp(pos_max_(idx) - lf) + 1.0;
            pos_max_(idx) = lf;
        } else {
            pos_sum_(idx) += std::exp(lf - pos_max_(idx));
        }

        const double delta = lf - mean_log_(idx);
        mean_log_(idx) += delta / t;
        m2_log_(idx) += delta * (lf - mean_log_(idx));
    }
}

arma::mat ElpdAccumulator::cell_loo() const {
    // log [ T / sum_t exp(-logf) ]
    return std::log(static_cast<double>(T_)) - (neg_max_ + arma::log(neg_sum_));
}

arma::mat ElpdAccumulator::cell_lpd() const {
    return pos_max_ + arma::log(pos_sum_) - std::log(static_cast<double>(T_));
}

arma::mat ElpdAccumulator::cell_var_log() const {
    if (T_ < 2) return arma::zeros(m2_log_.n_rows, m2_log_.n_cols);
    return m2_log_ / static_cast<double>(T_ - 1);
}

arma::mat ElpdAccumulator::cpo() const {
    return arma::exp(cell_loo());
}

bool ElpdAccumulator::unstable_weights(double kurtosis_limit) const {
    if (T_ < 4) return false;
    const double t = static_cast<double>(T_);
    for (arma::uword idx = 0; idx < w_m1_.n_elem; ++idx) {
        // central moments from scaled raw moments; scale cancels in kurtosis
        const double m1 = w_m1_(idx) / t;
        const double m2 = w_m2_(idx) / t - m1 * m1;
        if (m2 <= 0.0) continue;
        const double m3 = w_m3_(idx) / t;
        const double m4 = w_m4_(idx) / t;
        const double c4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * (w_m2_(idx) / t) -
                          3.0 * m1 * m1 * m1 * m1;
        if (c4 / (m2 * m2) > kurtosis_limit) return true;
    }
    return false;
}

std::pair<double, double> is_elpd(const arma::mat& records) {
    if (records.n_rows == 0) throw ConfigError("is_elpd needs at least one recorded draw");
    ElpdAccumulator acc(1, records.n_cols);
    for (arma::uword t = 0; t < records.n_rows; ++t) acc.add(records.row(t));
    return {acc.elpd_loo(), acc.elpd_waic()};
}

double exchange_log_acceptance(double t_a, double t_b, double raw_loglik_a,
                               double raw_loglik_b) {
    return (1.0 / t_a - 1.0 / t_b) * (raw_loglik_b - raw_loglik_a);
}

bool exchange_move(Chain& a, Chain& b, RngStream& rng) {
    const double logA = exchange_log_acceptance(a.temperature, b.temperature,
                                                a.raw_loglik, b.raw_loglik);
    if (rng.log_u01() < logA) {
        Chain::exchange_states(a, b);
        return true;
    }
    return false;
}

bool crossover_move(Chain& a, Chain& b, RngStream& rng) {
    const arma::uword s = a.s();
    std::vector<arma::uword> cols;
    for (arma::uword k = 0; k < s; ++k)
        if (rng.bernoulli(0.5)) cols.push_back(k);
    if (cols.empty()) return true;  // identity, accepted

    const double cur = a.raw_loglik / a.temperature + a.logP_gamma + a.logP_beta +
                       b.raw_loglik / b.temperature + b.logP_gamma + b.logP_beta;

    auto swap_cols = [&cols](Chain& x, Chain& y) {
        for (arma::uword k : cols) {
            const arma::uvec gtmp = x.gamma.col(k);
            x.gamma.col(k) = y.gamma.col(k);
            y.gamma.col(k) = gtmp;
            const arma::vec btmp = x.beta.col(k);
            x.beta.col(k) = y.beta.col(k);
            y.beta.col(k) = btmp;
        }
    };
    swap_cols(a, b);
    a.recompute_caches();
    b.recompute_caches();
    const double prop = a.raw_loglik / a.temperature + a.logP_gamma + a.logP_beta +
                        b.raw_loglik / b.temperature + b.logP_gamma + b.logP_beta;
    if (rng.log_u01() < prop - cur) return true;
    swap_cols(a, b);  // revert
    a.recompute_caches();
    b.recompute_caches();
    return false;
}

double adapt_temperature(arma::uword accepted, arma::uword attempted, double t) {
    if (attempted < 50) return t;
    const double rate = static_cast<double>(accepted) / static_cast<double>(attempted);
    if (rate < 0.20) return std::max(1.0, t * 0.9);
    if (rate > 0.35) return t * 1.1;
    return t;
}

McmcOutput run_sampler(const ModelSpec& spec, const Dataset& data, const ProgressFn& progress) {
    pin_blas_threads();
    const arma::uword K = spec.n_chains;
    const double initial_hot_temperature = 2.0;

    std::vector<std::unique_ptr<Chain>> chains;
    chains.reserve(K);
    for (arma::uword c = 0; c < K; ++c)
        chains.push_back(std::make_unique<Chain>(
            data, spec, c == 0 ? 1.0 : initial_hot_temperature, c));
    RngStream coord(spec.seed, K);

    McmcOutput out;
    out.n_iter = spec.n_iter;
    out.burnin = spec.burnin;
    out.n = data.n();
    out.s = data.s();
    out.p = data.p();
    out.p0 = data.p0();
    out.gamma_sum.zeros(data.p(), data.s());
    out.beta_sum.zeros(data.p0() + data.p(), data.s());
    out.beta_cond_sum.zeros(data.p0() + data.p(), data.s());
    out.beta_cond_count.zeros(data.p0() + data.p(), data.s());
    out.g_sum.zeros(data.s(), data.s());
    out.logP_trace.set_size(spec.n_iter);
    out.model_size_trace.set_size(spec.n_iter);
    out.elpd = ElpdAccumulator(data.n(), data.s());

    arma::uword window_acc = 0, window_att = 0;
    arma::uword total_acc = 0, total_att = 0;
    const unsigned n_workers = std::min<unsigned>(spec.max_threads, static_cast<unsigned>(K));

    for (arma::uword iter = 0; iter < spec.n_iter; ++iter) {
        const bool adapting = iter < spec.burnin;

        if (n_workers > 1 && K > 1) {
            std::vector<std::thread> workers;
            for (arma::uword c = 1; c < K; ++c)
                workers.emplace_back([&, c] { chains[c]->sweep(adapting); });
            chains[0]->sweep(adapting);
            for (auto& t : workers) t.join();
        } else {
            for (auto& ch : chains) ch->sweep(adapting);
        }

        if (K > 1) {
            // exchange: with probability one half a pair that includes the
            // main chain, otherwise a uniform pair
            arma::uword ia, ib;
            if (coord.bernoulli(0.5)) {
                ia = 0;
                ib = 1 + coord.uniform_int(K - 1);
            } else {
                ia = coord.uniform_int(K);
                ib = coord.uniform_int(K - 1);
                if (ib >= ia) ++ib;
            }
            // main <-> hot attempts probe the temperature; hot <-> hot swaps at
            // the shared temperature always accept and carry no signal
            const bool probe_pair = ia == 0 || ib == 0;
            const bool acc = exchange_move(*chains[ia], *chains[ib], coord);
            if (probe_pair) {
                ++window_att;
                ++total_att;
                window_acc += acc;
                total_acc += acc;
            }

            if (coord.u01() < 0.1) {
                arma::uword ca = coord.uniform_int(K);
                arma::uword cb = coord.uniform_int(K - 1);
                if (cb >= ca) ++cb;
                crossover_move(*chains[ca], *chains[cb], coord);
            }

            if (adapting && window_att >= 50) {
                const double t_new =
                    adapt_temperature(window_acc, window_att, chains[1]->temperature);
                for (arma::uword c = 1; c < K; ++c) chains[c]->temperature = t_new;
                window_acc = 0;
                window_att = 0;
            }
        }

        Chain& main = *chains[0];
        out.logP_trace(iter) = main.log_posterior();
        out.model_size_trace(iter) = static_cast<double>(main.model_size());

        if (iter >= spec.burnin) {
            ++out.n_recorded;
            out.gamma_sum += arma::conv_to<arma::mat>::from(main.gamma);
            out.beta_sum += main.beta;
            for (arma::uword k = 0; k < data.s(); ++k) {
                for (arma::uword j = 0; j < data.p0(); ++j) {
                    out.beta_cond_sum(j, k) += main.beta(j, k);
                    out.beta_cond_count(j, k) += 1;
                }
                for (arma::uword j = 0; j < data.p(); ++j)
                    if (main.gamma(j, k)) {
                        out.beta_cond_sum(data.p0() + j, k) += main.beta(data.p0() + j, k);
                        out.beta_cond_count(data.p0() + j, k) += 1;
                    }
            }
            if (main.has_graph())
                out.g_sum += arma::conv_to<arma::mat>::from(main.graph.adjacency());
            else if (!main.is_hrr())
                out.g_sum += arma::ones(data.s(), data.s()) - arma::eye(data.s(), data.s());
            out.elpd.add(main.pred_log_density());
        }

        if (progress && spec.tick > 0 && (iter + 1) % spec.tick == 0)
            progress(iter + 1, out.logP_trace(iter), main.model_size(),
                     K > 1 ? chains[1]->temperature : 1.0,
                     total_att ? static_cast<double>(total_acc) / total_att : 0.0);
    }

    out.final_hot_temperature = K > 1 ? chains[1]->temperature : 1.0;
    out.exchange_rate = total_att ? static_cast<double>(total_acc) / total_att : 0.0;
    return out;
}

}  // namespace bsur
