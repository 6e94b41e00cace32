#include "fsdiff/sde_core.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <string>

#include "fsdiff/errors.hpp"

namespace fsdiff {

namespace {

void require_positive_state(double x, const char* op) {
    if (!(x > 0.0))
        throw domain_error(std::string(op) + ": state must be > 0, got " + std::to_string(x));
}

}  // namespace

double drift(const Parameters& p, double x) {
    require_positive_state(x, "drift");
    return -p.theta * (x - p.kappa);
}

double sigma_squared(const Parameters& p, double x) {
    require_positive_state(x, "sigma_squared");
    return 2.0 * p.theta * x * (x / (0.5 * p.beta - 1.0) + p.kappa / (0.5 * p.alpha));
}

double sigma_squared_prime(const Parameters& p, double x) {
    require_positive_state(x, "sigma_squared_prime");
    return 2.0 * p.theta * (2.0 * x / (0.5 * p.beta - 1.0) + p.kappa / (0.5 * p.alpha));
}

double log_scale_density(const Parameters& p, double x) {
    require_positive_state(x, "scale_density");
    const double shift = p.rho() / p.alpha;
    return -0.5 * p.alpha * std::log(x) + (0.5 * p.alpha + 0.5 * p.beta - 1.0) * std::log(x + shift);
}

double scale_density(const Parameters& p, double x) {
    return std::exp(log_scale_density(p, x));
}

double log_invariant_density(const Parameters& p, double x) {
    require_positive_state(x, "invariant_density");
    const double a = 0.5 * p.alpha;
    const double b = 0.5 * p.beta;
    const double rho = p.rho();
    const double log_beta_fn = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double log_denom = std::log(p.alpha * x + rho);
    return -std::log(x) - log_beta_fn + a * (std::log(p.alpha) + std::log(x) - log_denom) +
           b * (std::log(rho) - log_denom);
}

double invariant_density(const Parameters& p, double x) {
    return std::exp(log_invariant_density(p, x));
}

double invariant_cdf(const Parameters& p, double x) {
    if (x <= 0.0) return 0.0;
    // alpha X / (alpha X + rho) ~ Beta(alpha/2, beta/2)
    const double u = p.alpha * x / (p.alpha * x + p.rho());
    return boost::math::ibeta(0.5 * p.alpha, 0.5 * p.beta, u);
}

double invariant_quantile(const Parameters& p, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw domain_error("invariant_quantile: q must lie in (0,1), got " + std::to_string(q));
    const double u = boost::math::ibeta_inv(0.5 * p.alpha, 0.5 * p.beta, q);
    return p.rho() * u / (p.alpha * (1.0 - u));
}

double theoretical_moment(const Parameters& p, double upsilon) {
    const double a = 0.5 * p.alpha;
    const double b = 0.5 * p.beta;
    if (!(upsilon > -a && upsilon < b))
        throw moment_divergence_error(
            "theoretical_moment: upsilon=" + std::to_string(upsilon) +
            " outside (-alpha/2, beta/2) = (" + std::to_string(-a) + ", " + std::to_string(b) + ")");
    const double log_m = upsilon * std::log(p.rho() / p.alpha) + std::lgamma(a + upsilon) +
                         std::lgamma(b - upsilon) - std::lgamma(a) - std::lgamma(b);
    return std::exp(log_m);
}

double stationary_variance(const Parameters& p) {
    if (!(p.beta > 4.0))
        throw moment_divergence_error("stationary_variance: requires beta > 4, got beta=" +
                                      std::to_string(p.beta));
    return 2.0 * p.kappa * p.kappa * (p.alpha + p.beta - 2.0) / (p.alpha * (p.beta - 4.0));
}

double autocovariance(const Parameters& p, double t) {
    if (!(t >= 0.0))
        throw domain_error("autocovariance: lag must be >= 0, got " + std::to_string(t));
    return stationary_variance(p) * std::exp(-p.theta * t);
}

}  // namespace fsdiff
