#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fsdiff/observation.hpp"

namespace fsdiff {

// Empirical moment: sample mean of X^upsilon (discrete) or trapezoidal time
// average over the span (continuous).
double empirical_moment(const ObservationSet& obs, double upsilon);

// Empirical mixed moment: average of X_s^upsilon X_(s+lag)^chi over all
// admissible s.  The lag must sit on the observation grid.
double empirical_mixed_moment(const ObservationSet& obs, double upsilon, double chi, double lag);

// Empirical covariance: mixed moment (1,1,lag) minus squared mean, exactly.
double empirical_covariance(const ObservationSet& obs, double lag);

struct EstimateReport {
    double alpha_hat;
    double beta_hat;
    double kappa_hat;
    double theta_hat;
    std::array<double, 4> moments_used;  // (m-1, m1, m2, R(t))
    double lag_t;
    Eigen::Matrix4d asymptotic_cov;  // of sqrt(n or T) * (estimate - truth)
    std::array<double, 4> standard_errors;
    double sample_size_effective;  // n (discrete) or T (continuous)
    ObsMode mode;
    std::vector<std::string> warnings;
};

// Moment -> parameter map (alpha, beta, kappa, theta) from
// (m-1, m1, m2, R(t)); kappa = m1.  Throws degenerate_denominator_error or
// negative_log_argument_error on bad inputs.
std::array<double, 4> g_map(double x, double y, double z, double w, double lag_t);

// Method-of-moments fit from the general estimators.  When no lag is given,
// a first pass at one grid step fixes a provisional theta and the final lag
// is 1/theta_provisional rounded to the grid.
EstimateReport estimate_params_general(const ObservationSet& obs, std::optional<double> lag = {});

enum class FsVariant { PositiveMoments, InverseMoments };

// Moment -> parameter map under the kappa = beta/(beta-2) restriction.
std::array<double, 4> fs_map(double x, double y, double z, double w, double lag_t,
                             FsVariant variant);

// Simplified estimators under the restriction kappa = beta/(beta-2) (the
// invariant law is then the F distribution).  Requires mean > 1.
EstimateReport estimate_params_fs(const ObservationSet& obs, std::optional<double> lag,
                                  FsVariant variant);

// Bartlett-tapered long-run covariance of the vector (X^u1, ..., X^uk):
// truncated lag sum (discrete) or lag integral (continuous).  truncation_lags
// counts grid steps; lag_stride coarsens the lag grid (continuous mode only).
Eigen::MatrixXd long_run_variance(const ObservationSet& obs, const std::vector<double>& f_exponents,
                                  int truncation_lags, int lag_stride = 1);

// Delta-method covariance: Jacobian of the moment->parameter map at the given
// moment point (central differences, relative step 1e-6) applied to the
// moment covariance.
Eigen::Matrix4d asymptotic_covariance(const std::array<double, 4>& moments,
                                      const Eigen::Matrix4d& sigma_hat, double lag_t);

namespace detail {

// Bartlett long-run covariance of already-transformed, equally-spaced series
// (rows of `series`); `scale` multiplies the lag sum (dt for continuous mode).
Eigen::MatrixXd long_run_variance_series(const std::vector<std::vector<double>>& series,
                                         int truncation_lags, int lag_stride, double scale);

}  // namespace detail

}  // namespace fsdiff
