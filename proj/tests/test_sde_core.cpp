#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsdiff/errors.hpp"
#include "fsdiff/sde_core.hpp"
#include "support/quadrature.hpp"

using namespace fsdiff;

namespace {

// Fisher-Snedecor F(alpha, beta) density, written out independently.
double fs_density(double alpha, double beta, double x) {
    const double log_b =
        std::lgamma(0.5 * alpha) + std::lgamma(0.5 * beta) - std::lgamma(0.5 * (alpha + beta));
    return std::exp(-std::log(x) - log_b + 0.5 * alpha * std::log(alpha * x / (alpha * x + beta)) +
                    0.5 * beta * std::log(beta / (alpha * x + beta)));
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / (n - 1.0));
    return xs;
}

}  // namespace

TEST_CASE("drift: closed form and domain") {
    CHECK(drift(Parameters(1.0, 2.0, 6.0, 10.0), 2.0) == doctest::Approx(0.0));
    CHECK(drift(Parameters(0.5, 1.25, 6.0, 10.0), 3.0) == doctest::Approx(-0.875));
    CHECK(drift(Parameters(2.0, 1.0, 6.0, 10.0), 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(drift(Parameters(1.0, 2.0, 6.0, 10.0), 0.0), domain_error);
    CHECK_THROWS_AS(drift(Parameters(1.0, 2.0, 6.0, 10.0), -1.0), domain_error);
}

TEST_CASE("sigma_squared: closed form, boundary, algebraic equivalence") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    CHECK(sigma_squared(p, 1.0) == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
    CHECK(sigma_squared(p, 2.0) == doctest::Approx(14.0 / 3.0).epsilon(1e-14));
    CHECK(sigma_squared(p, 1e-12) < 1e-10);
    CHECK_THROWS_AS(sigma_squared(p, 0.0), domain_error);

    // 2 theta x (x/(b/2-1) + k/(a/2)) == 4 theta x (alpha x + rho)/(alpha (beta-2))
    for (const Parameters q : {Parameters(0.7, 3.0, 5.0, 9.0), Parameters(2.0, 0.4, 12.0, 20.0)}) {
        for (double x : log_grid(1e-4, 1e4, 41)) {
            const double alt = 4.0 * q.theta * x * (q.alpha * x + q.rho()) / (q.alpha * (q.beta - 2.0));
            CHECK(sigma_squared(q, x) == doctest::Approx(alt).epsilon(1e-13));
        }
    }
}

TEST_CASE("sigma_squared_prime matches finite differences") {
    const Parameters p(1.3, 2.4, 7.0, 11.0);
    for (double x : {0.05, 0.7, 3.0, 40.0}) {
        const double h = 1e-6 * x;
        const double fd = (sigma_squared(p, x + h) - sigma_squared(p, x - h)) / (2.0 * h);
        CHECK(sigma_squared_prime(p, x) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("scale_density: worked values") {
    const Parameters p(1.0, 1.25, 6.0, 10.0);
    CHECK(scale_density(p, 1.0) == doctest::Approx(std::pow(8.0 / 3.0, 7)).epsilon(1e-13));
    CHECK(scale_density(p, 2.0) ==
          doctest::Approx(std::pow(2.0, -3) * std::pow(2.0 + 5.0 / 3.0, 7)).epsilon(1e-13));
    CHECK_THROWS_AS(scale_density(p, 0.0), domain_error);
}

TEST_CASE("speed-measure identity: invariant * sigma^2 * scale constant in x") {
    for (const Parameters p : {Parameters(1.0, 2.0, 6.0, 10.0), Parameters(0.5, 1.25, 6.0, 10.0),
                               Parameters(2.0, 0.3, 5.0, 9.0), Parameters(1.0, 4.0, 12.0, 20.0)}) {
        const double ref = invariant_density(p, 1.0) * sigma_squared(p, 1.0) * scale_density(p, 1.0);
        for (double x : log_grid(1e-4, 1e4, 101)) {
            const double value = invariant_density(p, x) * sigma_squared(p, x) * scale_density(p, x);
            CHECK(value == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("invariant_density: kappa = beta/(beta-2) recovers the F density") {
    for (double alpha : {6.0, 5.0, 12.0}) {
        for (double beta : {10.0, 9.0, 20.0}) {
            const Parameters p(1.0, beta / (beta - 2.0), alpha, beta);
            for (double x : log_grid(1e-3, 1e3, 61)) {
                const double expected = fs_density(alpha, beta, x);
                CHECK(invariant_density(p, x) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("invariant_density integrates to one") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    const double mass = oracle::integrate_positive_axis([&](double x) { return invariant_density(p, x); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("invariant cdf/quantile: consistency and quadrature cross-check") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    for (double q : {0.01, 0.2, 0.5, 0.9, 0.999}) {
        const double x = invariant_quantile(p, q);
        CHECK(invariant_cdf(p, x) == doctest::Approx(q).epsilon(1e-10));
    }
    // cdf increments match quadrature of the density
    const double a = 0.7, b = 3.1;
    const double mass = oracle::adaptive_simpson([&](double x) { return invariant_density(p, x); }, a, b);
    CHECK(invariant_cdf(p, b) - invariant_cdf(p, a) == doctest::Approx(mass).epsilon(1e-9));
    CHECK_THROWS_AS(invariant_quantile(p, 0.0), domain_error);
}

TEST_CASE("theoretical_moment: worked values and quadrature oracle") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    CHECK(theoretical_moment(p, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(theoretical_moment(p, 2.0) == doctest::Approx(256.0 / 36.0).epsilon(1e-13));
    CHECK(theoretical_moment(p, -1.0) == doctest::Approx(0.9375).epsilon(1e-13));

    for (double u : {-1.5, -1.0, 0.5, 1.0, 2.0, 3.0}) {
        const double numeric = oracle::integrate_positive_axis(
            [&](double x) { return std::pow(x, u) * invariant_density(p, x); });
        CHECK(theoretical_moment(p, u) == doctest::Approx(numeric).epsilon(1e-6));
    }

    CHECK_THROWS_AS(theoretical_moment(p, 5.0), moment_divergence_error);
    CHECK_THROWS_AS(theoretical_moment(p, -3.0), moment_divergence_error);
}

TEST_CASE("moment divergence boundary: truncated quadrature keeps growing") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    // right tail at upsilon = beta/2
    {
        const double u = 0.5 * p.beta;
        double prev = 0.0;
        for (double r : {1e2, 1e4, 1e6}) {
            const double truncated = oracle::adaptive_simpson(
                [&](double y) {
                    const double x = std::exp(y);
                    return std::pow(x, u) * invariant_density(p, x) * x;
                },
                std::log(1e-8), std::log(r), 1e-9);
            CHECK(truncated > prev * 1.05);
            prev = truncated;
        }
    }
    // left tail at upsilon = -alpha/2
    {
        const double u = -0.5 * p.alpha;
        double prev = 0.0;
        for (double eps : {1e-2, 1e-4, 1e-6}) {
            const double truncated = oracle::adaptive_simpson(
                [&](double y) {
                    const double x = std::exp(y);
                    return std::pow(x, u) * invariant_density(p, x) * x;
                },
                std::log(eps), std::log(1e2), 1e-9);
            CHECK(truncated > prev * 1.05);
            prev = truncated;
        }
    }
}

TEST_CASE("autocovariance: variance at zero lag, exponential ratio, window") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    CHECK(stationary_variance(p) == doctest::Approx(112.0 / 36.0).epsilon(1e-13));
    CHECK(autocovariance(p, 0.0) == doctest::Approx(256.0 / 36.0 - 4.0).epsilon(1e-13));
    for (double t : {0.1, 1.0, 3.5})
        CHECK(autocovariance(p, t) / autocovariance(p, 0.0) ==
              doctest::Approx(std::exp(-p.theta * t)).epsilon(1e-13));
    CHECK_THROWS_AS(autocovariance(Parameters(1.0, 1.0, 6.0, 3.5), 1.0), moment_divergence_error);
    CHECK_THROWS_AS(autocovariance(p, -0.5), domain_error);
}

TEST_CASE("theoretical_moment agrees with the variance identity") {
    for (const Parameters p : {Parameters(1.0, 2.0, 6.0, 10.0), Parameters(0.3, 5.0, 9.0, 13.0)}) {
        const double var = theoretical_moment(p, 2.0) - std::pow(theoretical_moment(p, 1.0), 2);
        CHECK(stationary_variance(p) == doctest::Approx(var).epsilon(1e-12));
    }
}
