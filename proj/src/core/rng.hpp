#pragma once

#include <armadillo>
#include <cstdint>

namespace bsur {

// Counter-free xoshiro256++ stream. A (seed, stream) pair fully determines the
// draw sequence; distinct streams are decorrelated through splitmix64 seeding.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    double u01();                       // uniform on (0,1)
    double log_u01();                   // log of a U(0,1) draw
    double normal();                    // standard normal, Marsaglia polar
    double normal(double mean, double sd) { return mean + sd * normal(); }
    double gamma(double shape, double rate);
    double inv_gamma(double shape, double rate);   // 1/X with X ~ Gamma(shape, rate)
    double beta(double a, double b);
    bool bernoulli(double p) { return u01() < p; }
    arma::uword uniform_int(arma::uword n);        // uniform on {0, ..., n-1}
    arma::uword categorical(const arma::vec& weights);  // unnormalised, > 0

    arma::vec normal_vec(arma::uword n);
    // mean + chol(cov)*z; cov must be SPD
    arma::vec mv_normal(const arma::vec& mean, const arma::mat& cov);

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bsur
