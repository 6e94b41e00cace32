#pragma once

#include "fsdiff/parameters.hpp"

namespace fsdiff {

// Drift a(x) = -theta (x - kappa).  Throws domain_error for x <= 0.
double drift(const Parameters& p, double x);

// Squared diffusion coefficient
//   sigma^2(x) = 2 theta x (x/(beta/2 - 1) + kappa/(alpha/2))
//              = 4 theta x (alpha x + rho) / (alpha (beta - 2)).
double sigma_squared(const Parameters& p, double x);

// d/dx sigma^2(x); used by the Milstein correction.
double sigma_squared_prime(const Parameters& p, double x);

// Scale density s(x) = x^(-alpha/2) (x + rho/alpha)^(alpha/2 + beta/2 - 1),
// normalization constant fixed to 1.
double scale_density(const Parameters& p, double x);
double log_scale_density(const Parameters& p, double x);

// Stationary density
//   p(x) = 1/(x B(a/2, b/2)) (alpha x / (alpha x + rho))^(alpha/2)
//                            (rho / (alpha x + rho))^(beta/2)
// which integrates to one over (0, inf).
double invariant_density(const Parameters& p, double x);
double log_invariant_density(const Parameters& p, double x);

// Stationary CDF / quantile.  The invariant law is (rho/beta) * F(alpha, beta),
// so both reduce to the regularized incomplete beta function.
double invariant_cdf(const Parameters& p, double x);
double invariant_quantile(const Parameters& p, double q);

// Stationary moment E X^upsilon, finite for upsilon in (-alpha/2, beta/2):
//   m_u = (rho/alpha)^u Gamma(alpha/2 + u) Gamma(beta/2 - u) / (Gamma(alpha/2) Gamma(beta/2)).
// Throws moment_divergence_error outside the window.
double theoretical_moment(const Parameters& p, double upsilon);

// Stationary variance 2 kappa^2 (alpha + beta - 2) / (alpha (beta - 4));
// requires beta > 4.
double stationary_variance(const Parameters& p);

// Stationary autocovariance Var_pi * exp(-theta t), t >= 0; requires beta > 4.
double autocovariance(const Parameters& p, double t);

}  // namespace fsdiff
