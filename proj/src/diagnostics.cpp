#include "fsdiff/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fsdiff/errors.hpp"
#include "fsdiff/estimators.hpp"
#include "fsdiff/parallel.hpp"
#include "fsdiff/sde_core.hpp"
#include "quadrature.hpp"

namespace fsdiff {

namespace {

constexpr std::uint64_t kFloorSeedSalt = 0x9E3779B97F4A7C15ull;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct SampleMoments {
    double mean, variance, skewness, excess_kurtosis;
};

SampleMoments sample_moments(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    SampleMoments out;
    out.mean = mean;
    out.variance = m2 * n / std::max(n - 1.0, 1.0);
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return out;
}

double ks_vs_standard_normal(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = normal_cdf(xs[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

struct LinearFit {
    double slope, intercept, r_squared;
};

LinearFit least_squares(const std::vector<double>& ts, const std::vector<double>& ys) {
    const auto n = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
    }
    const double tbar = st / n, ybar = sy / n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double dt = ts[i] - tbar, dy = ys[i] - ybar;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    LinearFit fit;
    fit.slope = sty / stt;
    fit.intercept = ybar - fit.slope * tbar;
    fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
    return fit;
}

std::vector<double> quantile_bin_edges(const Parameters& p, int bins) {
    std::vector<double> edges(static_cast<std::size_t>(bins) - 1);
    for (int j = 1; j < bins; ++j)
        edges[static_cast<std::size_t>(j - 1)] =
            invariant_quantile(p, static_cast<double>(j) / bins);
    return edges;
}

std::size_t bin_index(const std::vector<double>& edges, double x) {
    return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

// Ensemble marginals at the requested times: out[time][path].
std::vector<std::vector<double>> ensemble_marginals(const Parameters& p, const InitialLaw& init,
                                                    const std::vector<double>& times,
                                                    std::size_t n_paths,
                                                    const DiagnosticsConfig& cfg) {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1])))
            throw std::invalid_argument("diagnostics: times must be nonnegative and increasing");
    std::vector<std::size_t> indices(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        indices[i] = static_cast<std::size_t>(std::llround(times[i] / cfg.dt));

    std::vector<std::vector<double>> marginals(times.size(), std::vector<double>(n_paths));
    const double T = std::max(times.back(), cfg.dt);
    parallel_for(n_paths, cfg.n_threads, [&](std::size_t i) {
        const Path path = simulate_path(p, init, cfg.dt, T, cfg.scheme, cfg.seed, i);
        for (std::size_t k = 0; k < indices.size(); ++k)
            marginals[k][i] = path.values[std::min(indices[k], path.values.size() - 1)];
    });
    return marginals;
}

// phi-weighted (or plain, phi = 1) binned distance between a sample and the
// reference bin masses.
double binned_distance(const std::vector<double>& sample, const std::vector<double>& edges,
                       const std::vector<double>& reference_mass, const LyapunovPhi* phi) {
    std::vector<double> mass(reference_mass.size(), 0.0);
    for (double x : sample) mass[bin_index(edges, x)] += phi ? phi->value(x) : 1.0;
    const auto n = static_cast<double>(sample.size());
    double dist = 0.0;
    for (std::size_t j = 0; j < mass.size(); ++j)
        dist += std::abs(mass[j] / n - reference_mass[j]);
    return 0.5 * dist;
}

// Reference bin masses of phi d(pi): closed 1/bins for phi = 1, quadrature of
// phi * density otherwise.
std::vector<double> reference_masses(const Parameters& p, const std::vector<double>& edges,
                                     const LyapunovPhi* phi, int bins) {
    std::vector<double> mass(static_cast<std::size_t>(bins), 1.0 / bins);
    if (!phi) return mass;
    const double x_lo = invariant_quantile(p, 1e-13);
    const double x_hi = invariant_quantile(p, 1.0 - 1e-13);
    for (int j = 0; j < bins; ++j) {
        const double lo = j == 0 ? x_lo : edges[static_cast<std::size_t>(j - 1)];
        const double hi = j == bins - 1 ? x_hi : edges[static_cast<std::size_t>(j)];
        auto integrand = [&](double y) {
            const double x = std::exp(y);
            return phi->value(x) * invariant_density(p, x) * x;
        };
        mass[static_cast<std::size_t>(j)] =
            detail::adaptive_simpson(integrand, std::log(lo), std::log(hi), 1e-12);
    }
    return mass;
}

DecayFit decay_curve_impl(const Parameters& p, const InitialLaw& init, const LyapunovPhi* phi,
                          const std::vector<double>& times, std::size_t n_paths, int bins,
                          const DiagnosticsConfig& cfg) {
    if (bins < 2 || n_paths < static_cast<std::size_t>(bins))
        throw std::invalid_argument("decay curve: degenerate binning (need bins >= 2, n_paths >= bins)");
    if (times.empty()) throw std::invalid_argument("decay curve: empty time list");

    const auto edges = quantile_bin_edges(p, bins);
    const auto reference = reference_masses(p, edges, phi, bins);
    const auto marginals = ensemble_marginals(p, init, times, n_paths, cfg);

    DecayFit fit;
    fit.lags = times;
    fit.distances.resize(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        fit.distances[k] = binned_distance(marginals[k], edges, reference, phi);

    // Noise floor from two independent stationary ensembles of the same size.
    double floor_sum = 0.0;
    for (std::uint64_t rep = 1; rep <= 2; ++rep) {
        std::vector<double> sample(n_paths);
        parallel_for(n_paths, cfg.n_threads, [&](std::size_t i) {
            RandomStream rng(cfg.seed ^ (kFloorSeedSalt * rep), i);
            sample[i] = sample_invariant(p, rng);
        });
        floor_sum += binned_distance(sample, edges, reference, phi);
    }
    fit.noise_floor = 0.5 * floor_sum;

    fit.used_in_fit.assign(times.size(), false);
    std::vector<double> ts, logs;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (fit.distances[k] > 3.0 * fit.noise_floor) {
            fit.used_in_fit[k] = true;
            ts.push_back(times[k]);
            logs.push_back(std::log(fit.distances[k]));
        }
    }
    if (ts.size() >= 3) {
        const LinearFit lf = least_squares(ts, logs);
        fit.rate_hat = -lf.slope;
        fit.intercept_hat = lf.intercept;
        fit.r_squared = lf.r_squared;
    } else {
        fit.warnings.push_back("fewer than 3 lags above 3x the noise floor; no decay fit reported");
    }
    return fit;
}

}  // namespace

DecayFit tv_decay_curve(const Parameters& p, const InitialLaw& init, const std::vector<double>& times,
                        std::size_t n_paths, int bins, const DiagnosticsConfig& cfg) {
    return decay_curve_impl(p, init, nullptr, times, n_paths, bins, cfg);
}

DecayFit weighted_tv_decay_curve(const Parameters& p, const InitialLaw& init, const WeightSpec& w,
                                 const std::vector<double>& times, std::size_t n_paths, int bins,
                                 const DiagnosticsConfig& cfg) {
    if (!(w.gamma < 0.5 * p.alpha - 1.0) || !(w.delta < 0.5 * p.beta)) {
        std::ostringstream msg;
        msg << "weighted TV decay requires gamma < alpha/2 - 1 = " << 0.5 * p.alpha - 1.0
            << " and delta < beta/2 = " << 0.5 * p.beta << "; got gamma=" << w.gamma
            << ", delta=" << w.delta;
        throw window_error(msg.str());
    }
    if (w.gamma == 0.0 && w.delta == 0.0)
        return decay_curve_impl(p, init, nullptr, times, n_paths, bins, cfg);
    const LyapunovPhi phi(w);
    DecayFit fit = decay_curve_impl(p, init, &phi, times, n_paths, bins, cfg);
    if (w.delta >= 0.5 * p.beta - 0.5)
        fit.warnings.push_back("delta close to beta/2: the weighted-distance estimator has heavy variance");
    return fit;
}

LlnReport lln_report(const Parameters& p, const InitialLaw& init, double upsilon,
                     const std::vector<double>& horizons, std::size_t n_replicates,
                     const DiagnosticsConfig& cfg) {
    if (!(upsilon > -0.5 * p.alpha && upsilon < 0.5 * p.beta)) {
        std::ostringstream msg;
        msg << "lln_report: upsilon must lie in (-alpha/2, beta/2) = (" << -0.5 * p.alpha << ", "
            << 0.5 * p.beta << "); got " << upsilon;
        throw window_error(msg.str());
    }
    if (horizons.empty() || n_replicates < 2)
        throw std::invalid_argument("lln_report: need horizons and at least two replicates");
    for (std::size_t i = 1; i < horizons.size(); ++i)
        if (!(horizons[i] > horizons[i - 1]))
            throw std::invalid_argument("lln_report: horizons must be increasing");

    LlnReport report;
    report.upsilon = upsilon;
    report.target = theoretical_moment(p, upsilon);
    report.horizons = horizons;

    const double t_max = horizons.back();
    std::vector<std::size_t> cut(horizons.size());
    for (std::size_t i = 0; i < horizons.size(); ++i)
        cut[i] = static_cast<std::size_t>(std::llround(horizons[i] / cfg.dt));

    // errors[h][r]; one simulation per replicate, horizons read off prefixes
    std::vector<std::vector<double>> errors(horizons.size(), std::vector<double>(n_replicates));
    parallel_for(n_replicates, cfg.n_threads, [&](std::size_t r) {
        const Path path = simulate_path(p, init, cfg.dt, t_max, cfg.scheme, cfg.seed, r);
        std::vector<double> prefix(path.values.size(), 0.0);
        double acc = 0.0;
        std::vector<double> f(path.values.size());
        for (std::size_t i = 0; i < path.values.size(); ++i) f[i] = std::pow(path.values[i], upsilon);
        for (std::size_t i = 1; i < path.values.size(); ++i) {
            acc += 0.5 * (f[i - 1] + f[i]) * cfg.dt;
            prefix[i] = acc;
        }
        for (std::size_t h = 0; h < horizons.size(); ++h) {
            const std::size_t k = std::min(cut[h], path.values.size() - 1);
            const double avg = prefix[k] / (cfg.dt * static_cast<double>(k));
            errors[h][r] = std::abs(avg - report.target);
        }
    });

    for (std::size_t h = 0; h < horizons.size(); ++h) {
        auto& e = errors[h];
        std::sort(e.begin(), e.end());
        auto at = [&](double q) { return e[static_cast<std::size_t>(q * (e.size() - 1))]; };
        report.median_abs_error.push_back(at(0.5));
        report.iqr_low.push_back(at(0.25));
        report.iqr_high.push_back(at(0.75));
    }
    return report;
}

NormalityReport clt_check(const Parameters& p, double upsilon, double T, std::size_t n_replicates,
                          ObsMode mode, const DiagnosticsConfig& cfg) {
    const double beta_cap = 0.25 * p.beta;
    if (mode == ObsMode::Discrete) {
        const double lower = -std::min(0.5 * p.alpha - 1.0, 0.25 * p.alpha);
        if (!(upsilon > lower && upsilon < beta_cap)) {
            std::ostringstream msg;
            msg << "clt_check (discrete): upsilon must lie in (-(alpha/2-1) ^ (alpha/4), beta/4) = ("
                << lower << ", " << beta_cap << "); got " << upsilon;
            throw window_error(msg.str());
        }
    } else {
        const double lower = -0.25 * p.alpha - 0.5;
        if (!(upsilon > lower && upsilon < beta_cap)) {
            std::ostringstream msg;
            msg << "clt_check (continuous): upsilon must lie in (-alpha/4 - 1/2, beta/4) = (" << lower
                << ", " << beta_cap << "); got " << upsilon;
            throw window_error(msg.str());
        }
    }
    if (n_replicates < 20) throw std::invalid_argument("clt_check: need at least 20 replicates");
    if (!(T >= 10.0 * cfg.dt)) throw std::invalid_argument("clt_check: horizon too short");

    const double target = theoretical_moment(p, upsilon);
    std::vector<double> stats(n_replicates);
    parallel_for(n_replicates, cfg.n_threads, [&](std::size_t r) {
        const Path path =
            simulate_path(p, InitialLaw::stationary(), cfg.dt, T, cfg.scheme, cfg.seed, r);
        if (mode == ObsMode::Discrete) {
            const auto stride = static_cast<std::size_t>(std::llround(1.0 / cfg.dt));
            std::vector<double> values;
            values.reserve(path.values.size() / stride + 1);
            for (std::size_t i = stride; i < path.values.size(); i += stride)
                values.push_back(path.values[i]);
            const auto obs = ObservationSet::discrete(std::move(values));
            const double mbar = empirical_moment(obs, upsilon);
            const int lags = std::max(1, std::min<int>(static_cast<int>(std::ceil(10.0 / p.theta)),
                                                       static_cast<int>(obs.size() / 4)));
            const double lrv = long_run_variance(obs, {upsilon}, lags)(0, 0);
            stats[r] = lrv > 0.0 ? std::sqrt(static_cast<double>(obs.size())) * (mbar - target) /
                                       std::sqrt(lrv)
                                 : std::numeric_limits<double>::quiet_NaN();
        } else {
            const auto obs = ObservationSet::continuous(cfg.dt, path.values);
            const double mbar = empirical_moment(obs, upsilon);
            // the covariance integral lives on the 1/theta scale, so the lag
            // grid for the long-run variance can be far coarser than dt
            const auto dec = static_cast<std::size_t>(
                std::max<long long>(1, std::llround(0.01 / cfg.dt)));
            std::vector<double> coarse;
            coarse.reserve(path.values.size() / dec + 1);
            for (std::size_t i = 0; i < path.values.size(); i += dec)
                coarse.push_back(path.values[i]);
            const auto obs_lrv = ObservationSet::continuous(cfg.dt * static_cast<double>(dec),
                                                            std::move(coarse));
            const int lags = std::max(
                1, std::min<int>(static_cast<int>(std::llround(10.0 / p.theta / obs_lrv.dt)),
                                 static_cast<int>(obs_lrv.size() / 4)));
            const int stride = std::max(1, lags / 128);
            const double lrv = long_run_variance(obs_lrv, {upsilon}, lags, stride)(0, 0);
            stats[r] = lrv > 0.0
                           ? std::sqrt(obs.span()) * (mbar - target) / std::sqrt(lrv)
                           : std::numeric_limits<double>::quiet_NaN();
        }
    });

    NormalityReport report;
    report.upsilon = upsilon;
    report.mode = mode;
    std::vector<double> clean;
    clean.reserve(stats.size());
    for (double s : stats)
        if (std::isfinite(s)) clean.push_back(s);
    report.n_replicates = clean.size();
    report.n_dropped = stats.size() - clean.size();
    if (clean.size() < 20) throw std::runtime_error("clt_check: too many replicates degenerated");

    const SampleMoments m = sample_moments(clean);
    report.mean = m.mean;
    report.variance = m.variance;
    report.skewness = m.skewness;
    report.excess_kurtosis = m.excess_kurtosis;
    report.ks_statistic = ks_vs_standard_normal(clean);
    report.ks_threshold = 1.5 * 1.36 / std::sqrt(static_cast<double>(clean.size()));
    report.pass = report.ks_statistic < report.ks_threshold &&
                  std::abs(report.excess_kurtosis) < 0.5 && report.variance > 0.7 &&
                  report.variance < 1.3;
    return report;
}

AcfFit autocorrelation_fit(const ObservationSet& obs, std::size_t max_lag) {
    if (obs.size() < 8) throw std::invalid_argument("autocorrelation_fit: series too short");
    max_lag = std::min(max_lag, obs.size() - 1);
    const std::size_t n = obs.size();
    double mean = 0.0;
    for (double v : obs.values) mean += v;
    mean /= static_cast<double>(n);

    auto gamma_at = [&](std::size_t h) {
        double sum = 0.0;
        for (std::size_t i = 0; i + h < n; ++i)
            sum += (obs.values[i] - mean) * (obs.values[i + h] - mean);
        return sum / static_cast<double>(n);
    };

    const double g0 = gamma_at(0);
    if (!(g0 > 0.0)) throw std::runtime_error("autocorrelation_fit: zero-variance series");

    const double step = obs.mode == ObsMode::Continuous ? obs.dt : 1.0;
    std::vector<double> ts, logs;
    for (std::size_t h = 1; h <= max_lag; ++h) {
        const double corr = gamma_at(h) / g0;
        if (!(corr > 0.05)) break;
        ts.push_back(step * static_cast<double>(h));
        logs.push_back(std::log(corr));
    }
    if (ts.size() < 2)
        throw std::runtime_error(
            "autocorrelation_fit: no lags with correlation above the 0.05 threshold");
    const LinearFit lf = least_squares(ts, logs);
    return AcfFit{-lf.slope, lf.r_squared, ts.size()};
}

}  // namespace fsdiff
