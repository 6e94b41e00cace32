#include "fsdiff/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "fsdiff/errors.hpp"

namespace fsdiff {

namespace {

double power(double x, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == -1.0) return 1.0 / x;
    return std::pow(x, e);
}

std::vector<double> powered(const std::vector<double>& values, double e, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = power(values[i], e);
    return out;
}

// Trapezoidal time average of a series over its (possibly non-uniform) grid.
double time_average(const std::vector<double>& times, const std::vector<double>& series,
                    std::size_t n) {
    if (n == 1) return series[0];
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        integral += 0.5 * (series[i] + series[i + 1]) * (times[i + 1] - times[i]);
    return integral / (times[n - 1] - times[0]);
}

std::size_t lag_to_steps(const ObservationSet& obs, double lag) {
    if (!(lag >= 0.0)) throw domain_error("lag must be >= 0, got " + std::to_string(lag));
    double steps_real;
    if (obs.mode == ObsMode::Discrete) {
        steps_real = lag;
    } else {
        if (!obs.uniform)
            throw domain_error("lagged statistics require a uniform observation grid");
        steps_real = lag / obs.dt;
    }
    const double rounded = std::round(steps_real);
    if (std::abs(steps_real - rounded) > 1e-9 * std::max(1.0, std::abs(steps_real)))
        throw domain_error("lag " + std::to_string(lag) + " is not representable on the observation grid");
    const auto k = static_cast<std::size_t>(rounded);
    if (k >= obs.size())
        throw domain_error("lag " + std::to_string(lag) + " is not smaller than the series span");
    return k;
}

double numeric_jacobian_entry(const std::function<double(const std::array<double, 4>&)>& f,
                              std::array<double, 4> point, std::size_t j) {
    const double h = 1e-6 * std::max(std::abs(point[j]), 1e-8);
    std::array<double, 4> hi = point, lo = point;
    hi[j] += h;
    lo[j] -= h;
    return (f(hi) - f(lo)) / (2.0 * h);
}

using ParamMap = std::function<std::array<double, 4>(const std::array<double, 4>&)>;

Eigen::Matrix4d delta_method(const ParamMap& map, const std::array<double, 4>& point,
                             const Eigen::Matrix4d& sigma) {
    Eigen::Matrix4d jac;
    for (std::size_t i = 0; i < 4; ++i) {
        auto component = [&](const std::array<double, 4>& q) { return map(q)[i]; };
        for (std::size_t j = 0; j < 4; ++j)
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                numeric_jacobian_entry(component, point, j);
    }
    return jac * sigma * jac.transpose();
}

}  // namespace

double empirical_moment(const ObservationSet& obs, double upsilon) {
    if (obs.size() == 0) throw std::invalid_argument("empirical_moment: empty observations");
    const std::size_t n = obs.size();
    if (obs.mode == ObsMode::Discrete) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += power(obs.values[i], upsilon);
        return sum / static_cast<double>(n);
    }
    const auto series = powered(obs.values, upsilon, n);
    return time_average(obs.times, series, n);
}

double empirical_mixed_moment(const ObservationSet& obs, double upsilon, double chi, double lag) {
    if (obs.size() == 0) throw std::invalid_argument("empirical_mixed_moment: empty observations");
    const std::size_t k = lag_to_steps(obs, lag);
    const std::size_t n = obs.size() - k;
    if (obs.mode == ObsMode::Discrete) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sum += power(obs.values[i], upsilon) * power(obs.values[i + k], chi);
        return sum / static_cast<double>(n);
    }
    std::vector<double> series(n);
    for (std::size_t i = 0; i < n; ++i)
        series[i] = power(obs.values[i], upsilon) * power(obs.values[i + k], chi);
    return time_average(obs.times, series, n);
}

double empirical_covariance(const ObservationSet& obs, double lag) {
    const double mean = empirical_moment(obs, 1.0);
    return empirical_mixed_moment(obs, 1.0, 1.0, lag) - mean * mean;
}

std::array<double, 4> g_map(double x, double y, double z, double w, double lag_t) {
    if (!(lag_t > 0.0)) throw domain_error("g_map: lag must be > 0");
    const double xyz = x * y * z;
    const double y2 = y * y;
    const double den_alpha = xyz - 2.0 * z + y2;
    const double den_beta = x * z - 2.0 * x * y2 + y;
    const double scale_alpha = std::max({std::abs(xyz), 2.0 * std::abs(z), y2});
    const double scale_beta = std::max({std::abs(x * z), 2.0 * std::abs(x) * y2, std::abs(y)});
    if (std::abs(den_alpha) < 1e-12 * scale_alpha)
        throw degenerate_denominator_error("g_map: alpha denominator m-1*m1*m2 - 2*m2 + m1^2 degenerate");
    if (std::abs(den_beta) < 1e-12 * scale_beta)
        throw degenerate_denominator_error("g_map: beta denominator m-1*m2 - 2*m-1*m1^2 + m1 degenerate");

    const double variance = z - y2;
    const double ratio = w / variance;
    if (!(variance > 0.0) || !(ratio > 0.0 && ratio < 1.0))
        throw negative_log_argument_error(
            "g_map: R(t)/(m2 - m1^2) = " + std::to_string(ratio) +
            " outside (0,1); lag too large or series too short");

    return {2.0 * (xyz - y2) / den_alpha, 4.0 * x * variance / den_beta, y,
            -std::log(ratio) / lag_t};
}

namespace detail {

Eigen::MatrixXd long_run_variance_series(const std::vector<std::vector<double>>& series,
                                         int truncation_lags, int lag_stride, double scale) {
    const auto k = static_cast<Eigen::Index>(series.size());
    if (k == 0) throw std::invalid_argument("long_run_variance: no series");
    const std::size_t n = series[0].size();
    for (const auto& s : series)
        if (s.size() != n) throw std::invalid_argument("long_run_variance: ragged series");
    if (truncation_lags < 1) throw std::invalid_argument("long_run_variance: truncation must be >= 1");
    if (lag_stride < 1) throw std::invalid_argument("long_run_variance: lag stride must be >= 1");
    if (static_cast<std::size_t>(truncation_lags) >= n)
        throw std::invalid_argument("long_run_variance: truncation window exceeds the series span");

    std::vector<std::vector<double>> centered(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        double mean = 0.0;
        for (double v : series[i]) mean += v;
        mean /= static_cast<double>(n);
        centered[i].resize(n);
        for (std::size_t l = 0; l < n; ++l) centered[i][l] = series[i][l] - mean;
    }

    auto gamma_at = [&](std::size_t h) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index a = 0; a < k; ++a) {
            for (Eigen::Index b = 0; b < k; ++b) {
                const auto& sa = centered[static_cast<std::size_t>(a)];
                const auto& sb = centered[static_cast<std::size_t>(b)];
                double sum = 0.0;
                for (std::size_t l = 0; l + h < n; ++l) sum += sa[l + h] * sb[l];
                g(a, b) = sum / static_cast<double>(n);
            }
        }
        return g;
    };

    const int n_coarse = std::max(1, truncation_lags / lag_stride);
    Eigen::MatrixXd sigma = gamma_at(0);
    for (int j = 1; j <= n_coarse; ++j) {
        const double weight = 1.0 - static_cast<double>(j) / (n_coarse + 1.0);
        const Eigen::MatrixXd g = gamma_at(static_cast<std::size_t>(j) * static_cast<std::size_t>(lag_stride));
        sigma += weight * (g + g.transpose());
    }
    return scale * lag_stride * sigma;
}

}  // namespace detail

Eigen::MatrixXd long_run_variance(const ObservationSet& obs, const std::vector<double>& f_exponents,
                                  int truncation_lags, int lag_stride) {
    if (obs.size() == 0) throw std::invalid_argument("long_run_variance: empty observations");
    std::vector<std::vector<double>> series;
    series.reserve(f_exponents.size());
    for (double e : f_exponents) series.push_back(powered(obs.values, e, obs.size()));
    const double scale = obs.mode == ObsMode::Continuous ? obs.dt : 1.0;
    if (obs.mode == ObsMode::Continuous && !obs.uniform)
        throw domain_error("long_run_variance requires a uniform observation grid");
    return detail::long_run_variance_series(series, truncation_lags, lag_stride, scale);
}

Eigen::Matrix4d asymptotic_covariance(const std::array<double, 4>& moments,
                                      const Eigen::Matrix4d& sigma_hat, double lag_t) {
    ParamMap map = [lag_t](const std::array<double, 4>& q) {
        return g_map(q[0], q[1], q[2], q[3], lag_t);
    };
    return delta_method(map, moments, sigma_hat);
}

namespace {

struct MomentPack {
    double x, y, z, w;      // m-1, m1, m2, R(lag)
    double v;               // m_{1,1}(lag), before subtracting y^2
    double lag;
    std::size_t lag_steps;
};

MomentPack compute_moments(const ObservationSet& obs, std::optional<double> lag) {
    MomentPack m{};
    m.x = empirical_moment(obs, -1.0);
    m.y = empirical_moment(obs, 1.0);
    m.z = empirical_moment(obs, 2.0);

    const double grid_step = obs.mode == ObsMode::Discrete ? 1.0 : obs.dt;
    double lag_t;
    if (lag) {
        lag_t = *lag;
    } else {
        // First pass at one grid step fixes a provisional theta; the final lag
        // is 1/theta rounded to the grid and kept inside the series span.
        const double w0 = empirical_covariance(obs, grid_step);
        const double var = m.z - m.y * m.y;
        const double ratio = w0 / var;
        if (!(var > 0.0) || !(ratio > 0.0 && ratio < 1.0))
            throw negative_log_argument_error(
                "lag heuristic: one-step autocovariance ratio outside (0,1)");
        const double theta_prov = -std::log(ratio) / grid_step;
        lag_t = std::round(1.0 / theta_prov / grid_step) * grid_step;
        const double max_lag = 0.25 * obs.span();
        lag_t = std::clamp(lag_t, grid_step, std::max(grid_step, std::floor(max_lag / grid_step) * grid_step));
    }
    m.lag = lag_t;
    m.v = empirical_mixed_moment(obs, 1.0, 1.0, lag_t);
    m.w = m.v - m.y * m.y;
    m.lag_steps = obs.mode == ObsMode::Discrete ? static_cast<std::size_t>(std::round(lag_t))
                                                : static_cast<std::size_t>(std::round(lag_t / obs.dt));
    return m;
}

// Long-run covariance of (m-1, m1, m2, m_{1,1}(lag)) on the common window
// [0, n - lag_steps), then the chain through w = v - y^2.
Eigen::Matrix4d moment_covariance(const ObservationSet& obs, const MomentPack& m, double theta_hint) {
    const std::size_t n = obs.size() - m.lag_steps;
    if (n < 16) throw std::invalid_argument("estimate: series too short for covariance estimation");
    std::vector<std::vector<double>> series(4, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double v = obs.values[i];
        series[0][i] = 1.0 / v;
        series[1][i] = v;
        series[2][i] = v * v;
        series[3][i] = v * obs.values[i + m.lag_steps];
    }
    const double grid_step = obs.mode == ObsMode::Discrete ? 1.0 : obs.dt;
    const double theta = std::max(theta_hint, 1e-3);
    const double window_time = std::min(10.0 / theta, 0.1 * static_cast<double>(n) * grid_step);
    const int lags = std::max(1, static_cast<int>(std::round(window_time / grid_step)));
    const int stride = obs.mode == ObsMode::Continuous ? std::max(1, lags / 128) : 1;
    const double scale = obs.mode == ObsMode::Continuous ? obs.dt : 1.0;
    const Eigen::MatrixXd sigma_v = detail::long_run_variance_series(series, lags, stride, scale);

    Eigen::Matrix4d chain = Eigen::Matrix4d::Identity();
    chain(3, 1) = -2.0 * m.y;  // w = v - y^2
    return chain * sigma_v * chain.transpose();
}

EstimateReport finalize_report(const ObservationSet& obs, const MomentPack& m,
                               const std::array<double, 4>& params, const ParamMap& map) {
    EstimateReport report;
    report.alpha_hat = params[0];
    report.beta_hat = params[1];
    report.kappa_hat = params[2];
    report.theta_hat = params[3];
    report.moments_used = {m.x, m.y, m.z, m.w};
    report.lag_t = m.lag;
    report.mode = obs.mode;
    report.sample_size_effective =
        obs.mode == ObsMode::Discrete ? static_cast<double>(obs.size()) : obs.span();

    if (obs.mode == ObsMode::Discrete && !(params[0] > 4.0))
        report.warnings.push_back("alpha_hat <= 4: discrete-time normality of the estimator is not guaranteed");
    if (!(params[1] > 8.0))
        report.warnings.push_back("beta_hat <= 8: asymptotic normality of the estimator is not guaranteed");

    try {
        const Eigen::Matrix4d sigma_m = moment_covariance(obs, m, params[3]);
        report.asymptotic_cov = delta_method(map, {m.x, m.y, m.z, m.w}, sigma_m);
        for (std::size_t i = 0; i < 4; ++i) {
            const auto idx = static_cast<Eigen::Index>(i);
            report.standard_errors[i] =
                std::sqrt(std::max(report.asymptotic_cov(idx, idx), 0.0) / report.sample_size_effective);
        }
    } catch (const std::exception& e) {
        report.asymptotic_cov.setZero();
        report.standard_errors = {0.0, 0.0, 0.0, 0.0};
        report.warnings.push_back(std::string("asymptotic covariance unavailable: ") + e.what());
    }
    return report;
}

}  // namespace

EstimateReport estimate_params_general(const ObservationSet& obs, std::optional<double> lag) {
    const MomentPack m = compute_moments(obs, lag);
    const double lag_t = m.lag;
    ParamMap map = [lag_t](const std::array<double, 4>& q) {
        return g_map(q[0], q[1], q[2], q[3], lag_t);
    };
    return finalize_report(obs, m, g_map(m.x, m.y, m.z, m.w, lag_t), map);
}

std::array<double, 4> fs_map(double x, double y, double z, double w, double lag_t,
                             FsVariant variant) {
    if (!(lag_t > 0.0)) throw domain_error("fs_map: lag must be > 0");
    if (!(y > 1.0))
        throw mean_at_most_one_error("estimate_params_fs: empirical mean " + std::to_string(y) +
                                     " <= 1 (the F mean always exceeds 1)");
    double alpha_hat;
    if (variant == FsVariant::PositiveMoments) {
        const double den = z * (2.0 - y) - y * y;
        if (std::abs(den) < 1e-12 * std::max(std::abs(z) * (2.0 + std::abs(y)), y * y))
            throw degenerate_denominator_error("estimate_params_fs: m2(2 - m1) - m1^2 degenerate");
        alpha_hat = 2.0 * y * y / den;
    } else {
        if (!(x > 1.0))
            throw mean_at_most_one_error("estimate_params_fs: empirical inverse moment " +
                                         std::to_string(x) + " <= 1 (E[1/F] exceeds 1)");
        alpha_hat = 2.0 * x / (x - 1.0);
    }
    const double beta_hat = 2.0 * y / (y - 1.0);
    const double kappa_hat = beta_hat / (beta_hat - 2.0);
    const double variance = z - y * y;
    const double ratio = w / variance;
    if (!(variance > 0.0) || !(ratio > 0.0 && ratio < 1.0))
        throw negative_log_argument_error("estimate_params_fs: R(t)/(m2 - m1^2) outside (0,1)");
    return {alpha_hat, beta_hat, kappa_hat, -std::log(ratio) / lag_t};
}

EstimateReport estimate_params_fs(const ObservationSet& obs, std::optional<double> lag,
                                  FsVariant variant) {
    const MomentPack m = compute_moments(obs, lag);
    const double lag_t = m.lag;
    ParamMap map = [variant, lag_t](const std::array<double, 4>& q) {
        return fs_map(q[0], q[1], q[2], q[3], lag_t, variant);
    };
    return finalize_report(obs, m, fs_map(m.x, m.y, m.z, m.w, lag_t, variant), map);
}

}  // namespace fsdiff
