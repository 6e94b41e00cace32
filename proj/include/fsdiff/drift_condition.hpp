#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsdiff/parameters.hpp"
#include "fsdiff/weight.hpp"

namespace fsdiff {

// Log-spaced evaluation grid on which the drift inequalities are certified.
struct GridSpec {
    double x_min = 1e-6;
    double x_max = 1e6;
    int n = 2000;

    std::vector<double> points() const;
};

// Certifies A phi(x) <= -c phi(x) + C 1_[u,v](x) at every grid point.
struct DriftCertificate {
    double c;
    double C;
    double u;
    double v;
    GridSpec grid;
    double margin;  // minimum slack of A phi <= -c phi over grid points outside [u, v]
};

struct DriftConditionFailure {
    bool left_tail_ok;
    bool right_tail_ok;
    double left_tail_sup;   // sup of A phi / phi over the leftmost grid decade
    double right_tail_sup;  // sup over the rightmost decade
    std::string message;
};

struct DriftConditionResult {
    std::optional<DriftCertificate> certificate;
    std::optional<DriftConditionFailure> failure;
    bool ok() const { return certificate.has_value(); }
};

// Searches for (c, C, u, v).  Outside the admissible window
// gamma < alpha/2 - 1, delta < beta/2 the search fails and the result names
// the broken tail.
DriftConditionResult check_drift_condition(const Parameters& p, const WeightSpec& w,
                                           const GridSpec& grid = {});

// Certifies A psi(x) <= -c' phi(x)^(1+eps) + C' with psi built from w_prime.
struct ModifiedDriftCertificate {
    double c_prime;
    double C_prime;
    double epsilon;
    GridSpec grid;
    double margin;  // minimum tail slack of -(A psi + c' phi^(1+eps))
};

struct ModifiedDriftConditionResult {
    std::optional<ModifiedDriftCertificate> certificate;
    std::optional<DriftConditionFailure> failure;
    bool ok() const { return certificate.has_value(); }
};

// Preconditions: gamma < alpha/2, delta < beta/2 for w, and
// gamma' in ((gamma-1) v 0, alpha/2 - 1), delta' in (delta, beta/2) for
// w_prime; violations throw window_error.  When epsilon is not supplied, half
// the largest tail-admissible value is used.
ModifiedDriftConditionResult check_modified_drift_condition(const Parameters& p, const WeightSpec& w,
                                                            const WeightSpec& w_prime,
                                                            const GridSpec& grid = {},
                                                            std::optional<double> epsilon = {});

}  // namespace fsdiff
