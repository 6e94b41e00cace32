#pragma once

#include <stdexcept>
#include <string>

namespace fsdiff {

// State outside (0, inf), invalid lag, etc.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Moment exponent outside (-alpha/2, beta/2), or beta <= 4 for variance-based
// quantities.
class moment_divergence_error : public domain_error {
public:
    using domain_error::domain_error;
};

// Exponent/weight outside the admissible window of the operation.  The
// message states the violated inequality.
class window_error : public domain_error {
public:
    using domain_error::domain_error;
};

// R(t)/(m2 - m1^2) outside (0, 1): lag too large or series too short.
class negative_log_argument_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A G-map denominator collapsed below 1e-12 * scale.
class degenerate_denominator_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Empirical mean <= 1 in the F-restricted estimators (the F mean is > 1).
class mean_at_most_one_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fsdiff
