#include "fsdiff/weight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fsdiff/errors.hpp"
#include "fsdiff/sde_core.hpp"

namespace fsdiff {

WeightSpec::WeightSpec(double gamma_, double delta_) : gamma(gamma_), delta(delta_) { validate(); }

WeightSpec::WeightSpec(double gamma_, double delta_, double left_lo_, double left_hi_,
                       double right_lo_, double right_hi_)
    : gamma(gamma_),
      delta(delta_),
      left_lo(left_lo_),
      left_hi(left_hi_),
      right_lo(right_lo_),
      right_hi(right_hi_) {
    validate();
}

void WeightSpec::validate() const {
    if (!(gamma >= 0.0) || !(delta >= 0.0))
        throw std::invalid_argument("WeightSpec: tail exponents must be >= 0");
    if (!(left_lo > 0.0 && left_lo < 1.0))
        throw std::invalid_argument("WeightSpec: left_lo must lie in (0,1)");
    if (!(left_lo < left_hi))
        throw std::invalid_argument("WeightSpec: left knots must increase");
    if (!(right_lo >= 1.0 && right_lo < right_hi))
        throw std::invalid_argument("WeightSpec: right knots must satisfy 1 <= right_lo < right_hi");
    if (!(left_lo <= right_lo && left_hi <= right_hi))
        throw std::invalid_argument("WeightSpec: left knots must not extend past right knots");
}

LyapunovPhi::LyapunovPhi(const WeightSpec& spec) : spec_(spec) {
    spec_.validate();
    xi1_ = std::log(spec_.left_lo);
    xi2_ = std::log(spec_.left_hi);
    eta1_ = std::log(spec_.right_lo);
    eta2_ = std::log(spec_.right_hi);

    // Left blend: value v1 = -xi1, slope -1, curvature 0 at s=0; zero data at
    // s=1.  Quintic Hermite coefficients in closed form.
    {
        const double v1 = -xi1_;
        const double h = xi2_ - xi1_;
        left_coef_ = {v1, -h, 0.0, 6.0 * h - 10.0 * v1, 15.0 * v1 - 8.0 * h, 3.0 * h - 6.0 * v1};
    }
    // Right blend: zero data at s=0; value v2 = eta2, slope +1, curvature 0 at s=1.
    {
        const double v2 = eta2_;
        const double h = eta2_ - eta1_;
        right_coef_ = {10.0 * v2 - 4.0 * h, 7.0 * h - 15.0 * v2, 6.0 * v2 - 3.0 * h};
    }

    // For the default knots both blends are nonnegative; custom knots can make
    // the exponent dip below 0, in which case a constant shift restores
    // phi >= 1 (at the cost of exact tail powers).
    double e_min = 0.0;
    const int n_scan = 4096;
    const double lo = xi1_, hi = eta2_;
    for (int i = 0; i <= n_scan; ++i) {
        const double xi = lo + (hi - lo) * static_cast<double>(i) / n_scan;
        e_min = std::min(e_min, exponent(xi)[0]);
    }
    shift_ = e_min < 0.0 ? 1.0 - std::exp(e_min) : 0.0;
}

std::array<double, 3> LyapunovPhi::exponent(double xi) const {
    double e = 0.0, e1 = 0.0, e2 = 0.0;
    if (spec_.gamma > 0.0) {
        if (xi <= xi1_) {
            e += spec_.gamma * (-xi);
            e1 += -spec_.gamma;
        } else if (xi < xi2_) {
            const double h = xi2_ - xi1_;
            const double s = (xi - xi1_) / h;
            double m = 0.0, md = 0.0, mdd = 0.0;
            for (int k = 5; k >= 0; --k) m = m * s + left_coef_[static_cast<std::size_t>(k)];
            for (int k = 5; k >= 1; --k) md = md * s + k * left_coef_[static_cast<std::size_t>(k)];
            for (int k = 5; k >= 2; --k)
                mdd = mdd * s + k * (k - 1) * left_coef_[static_cast<std::size_t>(k)];
            e += spec_.gamma * m;
            e1 += spec_.gamma * md / h;
            e2 += spec_.gamma * mdd / (h * h);
        }
    }
    if (spec_.delta > 0.0) {
        if (xi >= eta2_) {
            e += spec_.delta * xi;
            e1 += spec_.delta;
        } else if (xi > eta1_) {
            const double h = eta2_ - eta1_;
            const double s = (xi - eta1_) / h;
            const double s2 = s * s, s3 = s2 * s;
            const double n = right_coef_[0] * s3 + right_coef_[1] * s3 * s + right_coef_[2] * s3 * s2;
            const double nd =
                3.0 * right_coef_[0] * s2 + 4.0 * right_coef_[1] * s3 + 5.0 * right_coef_[2] * s2 * s2;
            const double ndd =
                6.0 * right_coef_[0] * s + 12.0 * right_coef_[1] * s2 + 20.0 * right_coef_[2] * s3;
            e += spec_.delta * n;
            e1 += spec_.delta * nd / h;
            e2 += spec_.delta * ndd / (h * h);
        }
    }
    return {e, e1, e2};
}

PhiValue LyapunovPhi::operator()(double x) const {
    if (!(x > 0.0))
        throw domain_error("lyapunov_phi: state must be > 0, got " + std::to_string(x));
    const auto [e, e1, e2] = exponent(std::log(x));
    const double grown = std::exp(e);
    PhiValue out;
    out.value = grown + shift_;
    out.d1 = grown * e1 / x;
    out.d2 = grown * (e1 * e1 + e2 - e1) / (x * x);
    return out;
}

double generator_apply(const Parameters& p, const LyapunovPhi& phi, double x) {
    const PhiValue v = phi(x);
    return drift(p, x) * v.d1 + 0.5 * sigma_squared(p, x) * v.d2;
}

double generator_apply(const Parameters& p, const WeightSpec& w, double x) {
    return generator_apply(p, LyapunovPhi(w), x);
}

}  // namespace fsdiff
