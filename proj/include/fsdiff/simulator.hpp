#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsdiff/observation.hpp"
#include "fsdiff/parameters.hpp"
#include "fsdiff/rng.hpp"

namespace fsdiff {

enum class Scheme { EulerFullTruncation, MilsteinRetry };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

struct InitialLaw {
    enum class Kind { Dirac, Stationary, LogNormal, Custom };

    Kind kind = Kind::Stationary;
    double x0 = 1.0;        // Dirac
    double log_mean = 0.0;  // LogNormal: exp(log_mean + log_sd * Z)
    double log_sd = 1.0;
    std::vector<double> samples;  // Custom

    static InitialLaw dirac(double x0);
    static InitialLaw stationary();
    static InitialLaw log_normal(double m, double s);
    static InitialLaw custom(std::vector<double> samples);
};

struct Path {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;  // all strictly positive
    Scheme scheme = Scheme::MilsteinRetry;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    long clamp_events = 0;     // steps clamped to floor_eps
    long retry_exhausted = 0;  // Milstein redraw budget exhausted

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    double horizon() const { return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1); }
};

struct SimOptions {
    double floor_eps = 1e-12;
    int max_retries = 100;
    double diffusion_scale = 1.0;  // test hook; 0 turns the SDE into the drift ODE
};

// Exact draw from the invariant law: (rho/beta) times an F(alpha, beta)
// variate built from two gamma variates.
double sample_invariant(const Parameters& p, RandomStream& rng);

double sample_initial(const Parameters& p, const InitialLaw& init, RandomStream& rng);

// Positivity-preserving integration over [0, T] with step dt; the path has
// floor(T/dt) + 1 points.  Requires dt * theta < 0.5.
Path simulate_path(const Parameters& p, const InitialLaw& init, double dt, double T, Scheme scheme,
                   std::uint64_t base_seed, std::uint64_t path_index = 0,
                   const SimOptions& opts = {});

// Path i uses the stream derived from (base_seed, i); results are
// bit-identical for any thread count.
std::vector<Path> simulate_ensemble(const Parameters& p, const InitialLaw& init, double dt, double T,
                                    Scheme scheme, std::size_t n_paths, std::uint64_t base_seed,
                                    int n_threads = 0, const SimOptions& opts = {});

// Linear interpolation of the stored path onto a strictly increasing grid
// within its time span.
ObservationSet observe(const Path& path, const std::vector<double>& grid);

}  // namespace fsdiff
