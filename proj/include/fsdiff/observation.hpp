#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fsdiff {

enum class ObsMode { Discrete, Continuous };

std::string to_string(ObsMode mode);

// Discrete or continuous-time observations of the process, the estimator
// input.  Discrete mode is unit-spaced by convention; continuous mode carries
// the sampling step dt.
struct ObservationSet {
    ObsMode mode = ObsMode::Discrete;
    std::vector<double> times;   // strictly increasing
    std::vector<double> values;  // strictly positive
    double dt = 1.0;             // spacing when the grid is uniform
    bool uniform = true;

    struct Meta {
        double source_dt = 0.0;
        std::string scheme;
        std::uint64_t seed = 0;
    } meta;

    static ObservationSet discrete(std::vector<double> values);
    static ObservationSet continuous(double dt, std::vector<double> values, double t0 = 0.0);
    static ObservationSet from_times(ObsMode mode, std::vector<double> times,
                                     std::vector<double> values);

    std::size_t size() const { return values.size(); }
    double span() const { return times.empty() ? 0.0 : times.back() - times.front(); }

    void validate() const;
};

}  // namespace fsdiff
