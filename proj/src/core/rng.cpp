#include "core/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace bsur {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0xD2B74407B1CE6E93ULL * (stream + 1));
    for (auto& w : s_) w = splitmix64(x);
    // splitmix never yields all-zero state in practice, but guard anyway
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::u01() {
    // 53-bit mantissa, strictly inside (0,1)
    double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
}

double RngStream::log_u01() { return std::log(u01()); }

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, q;
    do {
        u = 2.0 * u01() - 1.0;
        v = 2.0 * u01() - 1.0;
        q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double RngStream::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("gamma: shape and rate must be positive");
    if (shape < 1.0) {
        // boost: X_a = X_{a+1} * U^{1/a}
        const double u = u01();
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

double RngStream::inv_gamma(double shape, double rate) {
    return 1.0 / gamma(shape, rate);
}

double RngStream::beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

arma::uword RngStream::uniform_int(arma::uword n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
    // Lemire rejection-free-ish multiply-shift; unbiased via rejection
    const std::uint64_t bound = n;
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    std::uint64_t l = static_cast<std::uint64_t>(m);
    if (l < bound) {
        const std::uint64_t t = (-bound) % bound;
        while (l < t) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * bound;
            l = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<arma::uword>(m >> 64);
}

arma::uword RngStream::categorical(const arma::vec& weights) {
    const double total = arma::accu(weights);
    if (!(total > 0.0)) throw std::invalid_argument("categorical: nonpositive weight total");
    double u = u01() * total;
    for (arma::uword i = 0; i + 1 < weights.n_elem; ++i) {
        u -= weights(i);
        if (u <= 0.0) return i;
    }
    return weights.n_elem - 1;
}

arma::vec RngStream::normal_vec(arma::uword n) {
    arma::vec z(n);
    for (arma::uword i = 0; i < n; ++i) z(i) = normal();
    return z;
}

arma::vec RngStream::mv_normal(const arma::vec& mean, const arma::mat& cov) {
    if (mean.n_elem == 0) return arma::vec();
    arma::mat L = arma::chol(cov, "lower");
    return mean + L * normal_vec(mean.n_elem);
}

}  // namespace bsur
