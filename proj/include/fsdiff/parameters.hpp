#pragma once

#include <stdexcept>
#include <string>

namespace fsdiff {

// Parameter quadruple of the diffusion
//   dX = -theta (X - kappa) dt + sqrt(2 theta X (X/(beta/2-1) + kappa/(alpha/2))) dW
// with theta > 0, kappa > 0, alpha > 2, beta > 2.
struct Parameters {
    double theta;  // mean-reversion rate, 1/time
    double kappa;  // mean-reversion level, state units
    double alpha;  // left-tail degrees of freedom
    double beta;   // right-tail degrees of freedom

    Parameters(double theta_, double kappa_, double alpha_, double beta_)
        : theta(theta_), kappa(kappa_), alpha(alpha_), beta(beta_) {
        validate();
    }

    void validate() const {
        if (!(theta > 0.0))
            throw std::invalid_argument("Parameters: theta must be > 0, got " + std::to_string(theta));
        if (!(kappa > 0.0))
            throw std::invalid_argument("Parameters: kappa must be > 0, got " + std::to_string(kappa));
        if (!(alpha > 2.0))
            throw std::invalid_argument("Parameters: alpha must be > 2, got " + std::to_string(alpha));
        if (!(beta > 2.0))
            throw std::invalid_argument("Parameters: beta must be > 2, got " + std::to_string(beta));
    }

    // Scale of the invariant law; strictly positive under the standing
    // assumptions.  The stationary mean equals kappa with this convention.
    double rho() const { return kappa * (beta - 2.0); }
};

}  // namespace fsdiff
