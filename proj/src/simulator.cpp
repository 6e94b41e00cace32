#include "fsdiff/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsdiff/errors.hpp"
#include "fsdiff/parallel.hpp"
#include "fsdiff/sde_core.hpp"

namespace fsdiff {

std::string to_string(Scheme scheme) {
    return scheme == Scheme::EulerFullTruncation ? "euler_full_truncation" : "milstein_retry";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "euler_full_truncation" || name == "euler") return Scheme::EulerFullTruncation;
    if (name == "milstein_retry" || name == "milstein") return Scheme::MilsteinRetry;
    throw std::invalid_argument("unknown scheme '" + name +
                                "' (expected euler_full_truncation or milstein_retry)");
}

InitialLaw InitialLaw::dirac(double x0) {
    if (!(x0 > 0.0)) throw std::invalid_argument("InitialLaw::dirac: x0 must be > 0");
    InitialLaw law;
    law.kind = Kind::Dirac;
    law.x0 = x0;
    return law;
}

InitialLaw InitialLaw::stationary() {
    InitialLaw law;
    law.kind = Kind::Stationary;
    return law;
}

InitialLaw InitialLaw::log_normal(double m, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("InitialLaw::log_normal: s must be >= 0");
    InitialLaw law;
    law.kind = Kind::LogNormal;
    law.log_mean = m;
    law.log_sd = s;
    return law;
}

InitialLaw InitialLaw::custom(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("InitialLaw::custom: sample list is empty");
    for (double s : samples)
        if (!(s > 0.0)) throw std::invalid_argument("InitialLaw::custom: samples must be > 0");
    InitialLaw law;
    law.kind = Kind::Custom;
    law.samples = std::move(samples);
    return law;
}

double sample_invariant(const Parameters& p, RandomStream& rng) {
    const double ga = rng.gamma(0.5 * p.alpha);
    const double gb = rng.gamma(0.5 * p.beta);
    const double f = (ga / (0.5 * p.alpha)) / (gb / (0.5 * p.beta));
    return p.rho() / p.beta * f;
}

double sample_initial(const Parameters& p, const InitialLaw& init, RandomStream& rng) {
    switch (init.kind) {
        case InitialLaw::Kind::Dirac:
            return init.x0;
        case InitialLaw::Kind::Stationary:
            return sample_invariant(p, rng);
        case InitialLaw::Kind::LogNormal:
            return std::exp(init.log_mean + init.log_sd * rng.normal());
        case InitialLaw::Kind::Custom: {
            const auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(init.samples.size()));
            return init.samples[std::min(idx, init.samples.size() - 1)];
        }
    }
    throw std::logic_error("sample_initial: unreachable");
}

Path simulate_path(const Parameters& p, const InitialLaw& init, double dt, double T, Scheme scheme,
                   std::uint64_t base_seed, std::uint64_t path_index, const SimOptions& opts) {
    if (!(dt > 0.0) || !(T >= dt))
        throw std::invalid_argument("simulate_path: need dt > 0 and T >= dt");
    if (!(dt * p.theta < 0.5))
        throw std::invalid_argument("simulate_path: stability guard dt * theta < 0.5 violated (dt*theta=" +
                                    std::to_string(dt * p.theta) + ")");

    const auto n_steps = static_cast<std::size_t>(std::floor(T / dt + 1e-9));
    Path path;
    path.dt = dt;
    path.scheme = scheme;
    path.seed = base_seed;
    path.path_index = path_index;
    path.values.resize(n_steps + 1);

    RandomStream rng(base_seed, path_index);
    const double eps = opts.floor_eps;
    const double sqrt_dt = std::sqrt(dt);
    const double scale = opts.diffusion_scale;

    double x = sample_initial(p, init, rng);
    path.values[0] = x;

    for (std::size_t k = 1; k <= n_steps; ++k) {
        if (scheme == Scheme::EulerFullTruncation) {
            const double xp = std::max(x, eps);
            const double xi = rng.normal();
            double next = x + drift(p, xp) * dt + scale * std::sqrt(sigma_squared(p, xp)) * sqrt_dt * xi;
            if (next < eps) {
                next = eps;
                ++path.clamp_events;
            }
            x = next;
        } else {
            const double a = drift(p, x) * dt;
            const double sig = scale * std::sqrt(sigma_squared(p, x));
            const double corr = 0.25 * scale * scale * sigma_squared_prime(p, x) * dt;
            double next = 0.0;
            bool accepted = false;
            for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
                const double xi = rng.normal();
                next = x + a + sig * sqrt_dt * xi + corr * (xi * xi - 1.0);
                if (next > 0.0) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                next = eps;
                ++path.retry_exhausted;
                ++path.clamp_events;
            }
            x = next;
        }
        path.values[k] = x;
    }
    return path;
}

std::vector<Path> simulate_ensemble(const Parameters& p, const InitialLaw& init, double dt, double T,
                                    Scheme scheme, std::size_t n_paths, std::uint64_t base_seed,
                                    int n_threads, const SimOptions& opts) {
    if (n_paths < 1) throw std::invalid_argument("simulate_ensemble: n_paths must be >= 1");
    std::vector<Path> out(n_paths);
    parallel_for(n_paths, n_threads, [&](std::size_t i) {
        out[i] = simulate_path(p, init, dt, T, scheme, base_seed, i, opts);
    });
    return out;
}

ObservationSet observe(const Path& path, const std::vector<double>& grid) {
    if (path.values.size() < 1) throw std::invalid_argument("observe: empty path");
    if (grid.empty()) throw std::invalid_argument("observe: empty grid");
    const double t_end = path.t0 + path.horizon();
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        if (i > 0 && !(t > grid[i - 1]))
            throw std::invalid_argument("observe: grid must be strictly increasing");
        if (t < path.t0 - 1e-12 || t > t_end + 1e-12)
            throw std::out_of_range("observe: time " + std::to_string(t) + " outside path span [" +
                                    std::to_string(path.t0) + ", " + std::to_string(t_end) + "]");
        const double offset = std::clamp((t - path.t0) / path.dt, 0.0,
                                         static_cast<double>(path.values.size() - 1));
        const auto k = static_cast<std::size_t>(offset);
        if (k + 1 >= path.values.size()) {
            values[i] = path.values.back();
        } else {
            const double frac = offset - static_cast<double>(k);
            values[i] = (1.0 - frac) * path.values[k] + frac * path.values[k + 1];
        }
    }
    auto obs = ObservationSet::from_times(ObsMode::Continuous, grid, std::move(values));
    obs.meta.source_dt = path.dt;
    obs.meta.scheme = to_string(path.scheme);
    obs.meta.seed = path.seed;
    return obs;
}

}  // namespace fsdiff
