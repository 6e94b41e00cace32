#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsdiff/errors.hpp"
#include "fsdiff/sde_core.hpp"
#include "fsdiff/weight.hpp"
#include "support/quadrature.hpp"

using namespace fsdiff;

namespace {

// Tail closed forms of the generator on the pure-power regions.
double generator_tail_large_x(const Parameters& p, double delta, double x) {
    const double phi = std::pow(x, delta);
    const double bracket = (1.0 - p.kappa / x) -
                           (delta - 1.0) * (1.0 / (0.5 * p.beta - 1.0) + p.kappa / (x * 0.5 * p.alpha));
    return -p.theta * delta * phi * bracket;
}

double generator_tail_small_x(const Parameters& p, double gamma, double x) {
    const double phi = std::pow(x, -gamma);
    const double brace = (p.kappa / x - 1.0) -
                         (gamma + 1.0) * (1.0 / (0.5 * p.beta - 1.0) + p.kappa / (x * 0.5 * p.alpha));
    return -p.theta * gamma * phi * brace;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / (n - 1.0));
    return xs;
}

}  // namespace

TEST_CASE("lyapunov phi: pure power regions are exact") {
    const LyapunovPhi phi(WeightSpec(1.0, 2.0));
    {
        const PhiValue v = phi(0.1);
        CHECK(v.value == doctest::Approx(10.0).epsilon(1e-14));
        CHECK(v.d1 == doctest::Approx(-100.0).epsilon(1e-14));
        CHECK(v.d2 == doctest::Approx(2000.0).epsilon(1e-14));
    }
    {
        const PhiValue v = phi(10.0);
        CHECK(v.value == doctest::Approx(100.0).epsilon(1e-14));
        CHECK(v.d1 == doctest::Approx(20.0).epsilon(1e-14));
        CHECK(v.d2 == doctest::Approx(2.0).epsilon(1e-14));
    }
    CHECK(phi.shift() == 0.0);
    CHECK_THROWS_AS(phi(0.0), domain_error);
}

TEST_CASE("lyapunov phi: at least one everywhere") {
    for (const WeightSpec w :
         {WeightSpec(1.0, 2.0), WeightSpec(0.0, 3.5), WeightSpec(2.9, 0.0), WeightSpec(0.25, 0.25)}) {
        const LyapunovPhi phi(w);
        for (double x : log_grid(1e-6, 1e6, 301)) CHECK(phi.value(x) >= 1.0 - 1e-12);
    }
}

TEST_CASE("lyapunov phi: C2 joins and derivatives match finite differences") {
    for (const WeightSpec w : {WeightSpec(1.0, 2.0), WeightSpec(1.5, 4.0), WeightSpec(0.5, 0.75)}) {
        const LyapunovPhi phi(w);
        // knots included for the first derivative; the second difference is
        // kept off the exact knots, where phi is C2 but not C3
        for (double x : {0.2, 0.5, 0.6, 0.9, 1.0, 1.3, 1.7, 2.0, 2.5, 6.0}) {
            const double h = 1e-5 * x;
            const double d1 = (phi.value(x + h) - phi.value(x - h)) / (2.0 * h);
            CHECK(phi(x).d1 == doctest::Approx(d1).epsilon(1e-5));
        }
        for (double x : {0.2, 0.45, 0.6, 0.9, 0.995, 1.3, 1.7, 1.995, 2.5, 6.0}) {
            const double h = 1e-5 * x;
            const double d2 = (phi.value(x + h) - 2.0 * phi.value(x) + phi.value(x - h)) / (h * h);
            CHECK(phi(x).d2 == doctest::Approx(d2).epsilon(1e-4));
        }
    }
}

TEST_CASE("lyapunov phi: flat spec is identically one") {
    const LyapunovPhi phi(WeightSpec(0.0, 0.0));
    for (double x : log_grid(1e-6, 1e6, 61)) {
        const PhiValue v = phi(x);
        CHECK(v.value == 1.0);
        CHECK(v.d1 == 0.0);
        CHECK(v.d2 == 0.0);
    }
}

TEST_CASE("weight spec validation") {
    CHECK_THROWS_AS(WeightSpec(-0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec(1.0, 1.0, 1.5, 2.0, 1.0, 2.0), std::invalid_argument);  // left_lo >= 1
    CHECK_THROWS_AS(WeightSpec(1.0, 1.0, 0.5, 2.0, 0.8, 2.0), std::invalid_argument);  // right_lo < 1
    CHECK_THROWS_AS(WeightSpec(1.0, 1.0, 0.5, 3.0, 1.0, 2.0), std::invalid_argument);  // left past right
}

TEST_CASE("generator: annihilates constants") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    const WeightSpec flat(0.0, 0.0);
    for (double x : log_grid(1e-5, 1e5, 31)) CHECK(generator_apply(p, flat, x) == 0.0);
}

TEST_CASE("generator: matches the tail closed forms on pure-power regions") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    const WeightSpec w(1.5, 4.0);
    const LyapunovPhi phi(w);
    for (double x : log_grid(2.0 + 1e-9, 1e6, 41)) {
        const double expected = generator_tail_large_x(p, w.delta, x);
        CHECK(generator_apply(p, phi, x) == doctest::Approx(expected).epsilon(1e-12));
    }
    for (double x : log_grid(1e-6, 0.5, 41)) {
        const double expected = generator_tail_small_x(p, w.gamma, x);
        CHECK(generator_apply(p, phi, x) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("generator: kills the invariant measure") {
    const Parameters p(1.0, 2.0, 6.0, 10.0);
    for (const WeightSpec w : {WeightSpec(1.5, 4.0), WeightSpec(0.5, 1.0)}) {
        const LyapunovPhi phi(w);
        const double integral = oracle::integrate_positive_axis(
            [&](double x) { return generator_apply(p, phi, x) * invariant_density(p, x); });
        // scale against the positive part of the integrand
        const double scale = oracle::integrate_positive_axis([&](double x) {
            return std::abs(generator_apply(p, phi, x)) * invariant_density(p, x);
        });
        CHECK(std::abs(integral) / scale < 1e-6);
    }
}
