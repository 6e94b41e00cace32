#include "fsdiff/drift_condition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fsdiff/errors.hpp"
#include "fsdiff/sde_core.hpp"

namespace fsdiff {

std::vector<double> GridSpec::points() const {
    if (!(x_min > 0.0 && x_min < x_max) || n < 16)
        throw std::invalid_argument("GridSpec: need 0 < x_min < x_max and n >= 16");
    std::vector<double> xs(static_cast<std::size_t>(n));
    const double lo = std::log(x_min), hi = std::log(x_max);
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (n - 1.0));
    return xs;
}

namespace {

// Index just past the leftmost decade / just before the rightmost decade.
std::pair<std::size_t, std::size_t> decade_bounds(const GridSpec& grid) {
    const double span = std::log10(grid.x_max / grid.x_min);
    const auto per_decade = static_cast<std::size_t>(std::ceil((grid.n - 1) / span));
    const auto n = static_cast<std::size_t>(grid.n);
    return {std::min(per_decade + 1, n), n - std::min(per_decade + 1, n)};
}

}  // namespace

DriftConditionResult check_drift_condition(const Parameters& p, const WeightSpec& w,
                                           const GridSpec& grid) {
    const LyapunovPhi phi(w);
    const auto xs = grid.points();
    const std::size_t n = xs.size();

    std::vector<double> a_phi(n), phi_val(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PhiValue v = phi(xs[i]);
        phi_val[i] = v.value;
        a_phi[i] = drift(p, xs[i]) * v.d1 + 0.5 * sigma_squared(p, xs[i]) * v.d2;
    }

    const auto [left_end, right_begin] = decade_bounds(grid);
    double left_sup = -std::numeric_limits<double>::infinity();
    double right_sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < left_end; ++i) left_sup = std::max(left_sup, a_phi[i] / phi_val[i]);
    for (std::size_t i = right_begin; i < n; ++i)
        right_sup = std::max(right_sup, a_phi[i] / phi_val[i]);

    DriftConditionResult result;
    const bool left_ok = left_sup < 0.0;
    const bool right_ok = right_sup < 0.0;
    if (!left_ok || !right_ok) {
        std::ostringstream msg;
        msg << "drift condition fails in the";
        if (!left_ok) msg << " left tail (sup A phi/phi = " << left_sup << " near x -> 0)";
        if (!left_ok && !right_ok) msg << " and";
        if (!right_ok) msg << " right tail (sup A phi/phi = " << right_sup << " for large x)";
        msg << "; admissible window is gamma < alpha/2 - 1 = " << 0.5 * p.alpha - 1.0
            << ", delta < beta/2 = " << 0.5 * p.beta << " (gamma=" << w.gamma
            << ", delta=" << w.delta << ")";
        result.failure = DriftConditionFailure{left_ok, right_ok, left_sup, right_sup, msg.str()};
        return result;
    }

    const double c = 0.9 * std::min(-left_sup, -right_sup);

    // Violation hull: [u, v] spans every grid point where A phi + c phi > 0.
    std::size_t first = n, last = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (a_phi[i] + c * phi_val[i] > 0.0) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    if (first == n) {
        // No violation anywhere; keep a minimal segment around the flattest point.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (a_phi[i] / phi_val[i] > a_phi[imax] / phi_val[imax]) imax = i;
        first = imax > 0 ? imax - 1 : 0;
        last = std::min(imax + 1, n - 1);
    }
    if (first < left_end || last >= right_begin) {
        std::ostringstream msg;
        msg << "drift condition: violation region [" << xs[first] << ", " << xs[last]
            << "] reaches the grid boundary; tails not certifiable at c=" << c;
        result.failure = DriftConditionFailure{first >= left_end, last < right_begin, left_sup,
                                               right_sup, msg.str()};
        return result;
    }

    double C = 0.0;
    for (std::size_t i = first; i <= last; ++i) C = std::max(C, a_phi[i] + c * phi_val[i]);

    // slack of A phi <= -c phi outside [u, v]; inside, C absorbs the excess
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= first && i <= last) continue;
        margin = std::min(margin, -a_phi[i] - c * phi_val[i]);
    }
    result.certificate = DriftCertificate{c, C, xs[first], xs[last], grid, margin};
    return result;
}

ModifiedDriftConditionResult check_modified_drift_condition(const Parameters& p, const WeightSpec& w,
                                                            const WeightSpec& w_prime,
                                                            const GridSpec& grid,
                                                            std::optional<double> epsilon) {
    const double a2 = 0.5 * p.alpha, b2 = 0.5 * p.beta;
    if (!(w.gamma < a2) || !(w.delta < b2)) {
        std::ostringstream msg;
        msg << "modified drift condition requires gamma < alpha/2 = " << a2
            << " and delta < beta/2 = " << b2 << "; got gamma=" << w.gamma
            << ", delta=" << w.delta;
        throw window_error(msg.str());
    }
    const double g_lo = std::max(w.gamma - 1.0, 0.0);
    if (!(w_prime.gamma > g_lo && w_prime.gamma < a2 - 1.0)) {
        std::ostringstream msg;
        msg << "modified drift condition: gamma' must lie in ((gamma-1) v 0, alpha/2 - 1) = ("
            << g_lo << ", " << a2 - 1.0 << "); got gamma'=" << w_prime.gamma;
        throw window_error(msg.str());
    }
    if (!(w_prime.delta > w.delta && w_prime.delta < b2)) {
        std::ostringstream msg;
        msg << "modified drift condition: delta' must lie in (delta, beta/2) = (" << w.delta << ", "
            << b2 << "); got delta'=" << w_prime.delta;
        throw window_error(msg.str());
    }

    double eps;
    if (epsilon) {
        if (*epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
        eps = *epsilon;
    } else {
        // Largest tail-admissible exponent: phi^(1+eps) must stay below the
        // decay orders delta' (right) and gamma'+1 (left) of A psi.
        double cap = std::numeric_limits<double>::infinity();
        if (w.delta > 0.0) cap = std::min(cap, w_prime.delta / w.delta);
        if (w.gamma > 0.0) cap = std::min(cap, (w_prime.gamma + 1.0) / w.gamma);
        eps = std::isfinite(cap) ? 0.5 * (cap - 1.0) : 1.0;
    }

    const LyapunovPhi phi(w);
    const LyapunovPhi psi(w_prime);
    const auto xs = grid.points();
    const std::size_t n = xs.size();

    std::vector<double> a_psi(n), phi_pow(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PhiValue v = psi(xs[i]);
        a_psi[i] = drift(p, xs[i]) * v.d1 + 0.5 * sigma_squared(p, xs[i]) * v.d2;
        phi_pow[i] = std::pow(phi(xs[i]).value, 1.0 + eps);
    }

    const auto [left_end, right_begin] = decade_bounds(grid);
    double left_inf = std::numeric_limits<double>::infinity();
    double right_inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < left_end; ++i) left_inf = std::min(left_inf, -a_psi[i] / phi_pow[i]);
    for (std::size_t i = right_begin; i < n; ++i)
        right_inf = std::min(right_inf, -a_psi[i] / phi_pow[i]);

    ModifiedDriftConditionResult result;
    if (!(left_inf > 0.0) || !(right_inf > 0.0)) {
        std::ostringstream msg;
        msg << "modified drift condition fails in the";
        if (!(left_inf > 0.0)) msg << " left tail (inf -A psi/phi^(1+eps) = " << left_inf << ")";
        if (!(left_inf > 0.0) && !(right_inf > 0.0)) msg << " and";
        if (!(right_inf > 0.0)) msg << " right tail (inf -A psi/phi^(1+eps) = " << right_inf << ")";
        msg << " at epsilon=" << eps;
        result.failure =
            DriftConditionFailure{left_inf > 0.0, right_inf > 0.0, -left_inf, -right_inf, msg.str()};
        return result;
    }

    const double c_prime = 0.5 * std::min(left_inf, right_inf);
    double C_prime = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        C_prime = std::max(C_prime, a_psi[i] + c_prime * phi_pow[i]);
    C_prime = std::max(C_prime, 0.0);

    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < left_end; ++i) margin = std::min(margin, -a_psi[i] - c_prime * phi_pow[i]);
    for (std::size_t i = right_begin; i < n; ++i)
        margin = std::min(margin, -a_psi[i] - c_prime * phi_pow[i]);

    result.certificate = ModifiedDriftCertificate{c_prime, C_prime, eps, grid, margin};
    return result;
}

}  // namespace fsdiff
