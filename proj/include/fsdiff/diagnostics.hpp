#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fsdiff/observation.hpp"
#include "fsdiff/parameters.hpp"
#include "fsdiff/simulator.hpp"
#include "fsdiff/weight.hpp"

namespace fsdiff {

struct DiagnosticsConfig {
    double dt = 0.01;
    Scheme scheme = Scheme::MilsteinRetry;
    std::uint64_t seed = 20120501;
    int n_threads = 0;
};

// Exponential-decay fit of estimated distances against lag times.
struct DecayFit {
    std::vector<double> lags;
    std::vector<double> distances;
    std::vector<bool> used_in_fit;  // lags above 3x the noise floor
    double noise_floor = 0.0;
    double rate_hat = std::numeric_limits<double>::quiet_NaN();
    double intercept_hat = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;

    bool has_fit() const { return std::isfinite(rate_hat); }
};

// Distance between the time-t ensemble marginal and the invariant law,
// estimated on invariant-quantile bins, fitted as exp(-rate * t) over the
// above-floor lag range.
DecayFit tv_decay_curve(const Parameters& p, const InitialLaw& init, const std::vector<double>& times,
                        std::size_t n_paths, int bins, const DiagnosticsConfig& cfg = {});

// Same with phi-weighted bin masses; requires gamma < alpha/2 - 1 and
// delta < beta/2 so the weighted distance is meaningful.
DecayFit weighted_tv_decay_curve(const Parameters& p, const InitialLaw& init, const WeightSpec& w,
                                 const std::vector<double>& times, std::size_t n_paths, int bins,
                                 const DiagnosticsConfig& cfg = {});

struct LlnReport {
    double upsilon;
    double target;  // theoretical moment
    std::vector<double> horizons;
    std::vector<double> median_abs_error;
    std::vector<double> iqr_low;
    std::vector<double> iqr_high;
};

// Absolute error of time averages of X^upsilon against the stationary moment
// across replicates, per horizon.
LlnReport lln_report(const Parameters& p, const InitialLaw& init, double upsilon,
                     const std::vector<double>& horizons, std::size_t n_replicates,
                     const DiagnosticsConfig& cfg = {});

struct NormalityReport {
    std::size_t n_replicates = 0;
    std::size_t n_dropped = 0;  // replicates with non-finite standardized statistic
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double ks_statistic = 0.0;
    double ks_threshold = 0.0;
    bool pass = false;
    double upsilon = 0.0;
    ObsMode mode = ObsMode::Continuous;
};

// Normalized statistic sqrt(n or T) * (empirical moment - stationary moment),
// studentized by the long-run variance estimate, across independent
// stationary replicates; composite normality gate.
NormalityReport clt_check(const Parameters& p, double upsilon, double T, std::size_t n_replicates,
                          ObsMode mode, const DiagnosticsConfig& cfg = {});

struct AcfFit {
    double theta_hat;
    double r_squared;
    std::size_t lags_used;
};

// Least-squares fit of log autocorrelation against lag time over the initial
// run of lags with correlation above 0.05; the negated slope estimates theta.
AcfFit autocorrelation_fit(const ObservationSet& obs, std::size_t max_lag);

}  // namespace fsdiff
