#pragma once

#include <array>

#include "fsdiff/parameters.hpp"

namespace fsdiff {

// Weight function family phi with phi(x) = x^(-gamma) near 0, x^delta near
// infinity, phi >= 1, C^2.  The knots bound the two transition intervals:
// the left cutoff acts on [left_lo, left_hi], the right on [right_lo, right_hi].
struct WeightSpec {
    double gamma = 0.0;
    double delta = 0.0;
    double left_lo = 0.5;
    double left_hi = 2.0;
    double right_lo = 1.0;
    double right_hi = 2.0;

    WeightSpec() = default;
    WeightSpec(double gamma_, double delta_);
    WeightSpec(double gamma_, double delta_, double left_lo_, double left_hi_, double right_lo_,
               double right_hi_);

    void validate() const;
};

struct PhiValue {
    double value;
    double d1;
    double d2;
};

// Evaluator for phi and its first two derivatives.  Internally
// phi(x) = exp(gamma * m(log x) + delta * n(log x)) + shift, where m is a
// quintic blend of -log x down to 0 over the left knots and n a quintic blend
// of 0 up to log x over the right knots, both built in log-log coordinates so
// the tail powers are exact and the blends stay nonnegative.  The shift is 0
// unless a custom knot layout lets the blend exponent dip negative; it is the
// smallest constant restoring phi >= 1.
class LyapunovPhi {
public:
    explicit LyapunovPhi(const WeightSpec& spec);

    PhiValue operator()(double x) const;
    double value(double x) const { return (*this)(x).value; }

    const WeightSpec& spec() const { return spec_; }
    double shift() const { return shift_; }

private:
    // blend exponent e(xi) and derivatives w.r.t. xi = log x
    std::array<double, 3> exponent(double xi) const;

    WeightSpec spec_;
    double xi1_, xi2_;      // log of left knots
    double eta1_, eta2_;    // log of right knots
    std::array<double, 6> left_coef_;   // quintic in s = (xi - xi1)/(xi2 - xi1)
    std::array<double, 3> right_coef_;  // s^3, s^4, s^5 in s = (xi - eta1)/(eta2 - eta1)
    double shift_ = 0.0;
};

// Generator applied to phi: A phi(x) = a(x) phi'(x) + 1/2 sigma^2(x) phi''(x).
double generator_apply(const Parameters& p, const LyapunovPhi& phi, double x);
double generator_apply(const Parameters& p, const WeightSpec& w, double x);

}  // namespace fsdiff
