#include "core/dists.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"

namespace bsur {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

double log_pdf_normal(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

double log_pdf_normal_iid(const arma::vec& x, const arma::vec& mean, double var) {
    const double n = static_cast<double>(x.n_elem);
    const double ss = arma::accu(arma::square(x - mean));
    return -0.5 * (n * (kLog2Pi + std::log(var)) + ss / var);
}

double log_pdf_mv_normal(const arma::vec& x, const arma::vec& mean, const arma::mat& cov) {
    if (x.n_elem == 0) return 0.0;
    arma::mat L = chol_lower_jitter(cov, "mv normal density");
    arma::vec z = arma::solve(arma::trimatl(L), x - mean);
    const double log_det_half = arma::accu(arma::log(L.diag()));
    return -0.5 * (static_cast<double>(x.n_elem) * kLog2Pi + arma::dot(z, z)) - log_det_half;
}

double log_pdf_gamma(double x, double shape, double rate) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double log_pdf_inv_gamma(double x, double shape, double rate) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

double log_pdf_beta(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return -std::numeric_limits<double>::infinity();
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b)
         + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
}

double log_pdf_bernoulli(bool x, double p) {
    return x ? std::log(p) : std::log1p(-p);
}

double log_pdf_student_t(double x, double df, double loc, double scale) {
    const double z = (x - loc) / scale;
    return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df)
         - 0.5 * std::log(df * M_PI) - std::log(scale)
         - 0.5 * (df + 1.0) * std::log1p(z * z / df);
}

double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

namespace {

// Lentz continued fraction for the incomplete beta
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const int max_iter = 300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 3e-15) break;
    }
    return h;
}

}  // namespace

double inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b)
                          + a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_front) * beta_cf(a, b, x) / a;
    return 1.0 - std::exp(ln_front) * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    const double x = df / (df + t * t);
    const double p = 0.5 * inc_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? 1.0 - p : p;
}

arma::mat chol_lower_jitter(const arma::mat& A, const char* context) {
    arma::mat L;
    if (arma::chol(L, A, "lower")) return L;
    const double scale = std::max(arma::mean(A.diag()), 1e-30);
    for (double eps : {1e-10, 1e-6}) {
        arma::mat Aj = A;
        Aj.diag() += eps * scale;
        if (arma::chol(L, Aj, "lower")) return L;
    }
    throw NumericError(std::string("Cholesky failed after jitter escalation in ") + context);
}

}  // namespace bsur
