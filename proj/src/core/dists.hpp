#pragma once

#include <armadillo>

namespace bsur {

double log_pdf_normal(double x, double mean, double var);
// iid vector case: every element has the same variance
double log_pdf_normal_iid(const arma::vec& x, const arma::vec& mean, double var);
// dense covariance
double log_pdf_mv_normal(const arma::vec& x, const arma::vec& mean, const arma::mat& cov);

double log_pdf_gamma(double x, double shape, double rate);
double log_pdf_inv_gamma(double x, double shape, double rate);
double log_pdf_beta(double x, double a, double b);
double log_pdf_bernoulli(bool x, double p);
// location-scale Student t with df degrees of freedom
double log_pdf_student_t(double x, double df, double loc, double scale);

// log(exp(a) + exp(b)) without overflow
double log_sum_exp(double a, double b);

// Regularised incomplete beta I_x(a, b); used for the t CDF
double inc_beta(double a, double b, double x);
double student_t_cdf(double t, double df);

// Cholesky with escalating diagonal jitter (1e-10 then 1e-6 of mean diagonal).
// Throws NumericError if the factorisation still fails.
arma::mat chol_lower_jitter(const arma::mat& A, const char* context);

}  // namespace bsur
