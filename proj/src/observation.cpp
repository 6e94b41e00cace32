#include "fsdiff/observation.hpp"

#include <cmath>
#include <stdexcept>

#include "fsdiff/errors.hpp"

namespace fsdiff {

std::string to_string(ObsMode mode) {
    return mode == ObsMode::Discrete ? "discrete" : "continuous";
}

ObservationSet ObservationSet::discrete(std::vector<double> values) {
    ObservationSet obs;
    obs.mode = ObsMode::Discrete;
    obs.values = std::move(values);
    obs.times.resize(obs.values.size());
    for (std::size_t i = 0; i < obs.times.size(); ++i) obs.times[i] = static_cast<double>(i);
    obs.dt = 1.0;
    obs.validate();
    return obs;
}

ObservationSet ObservationSet::continuous(double dt, std::vector<double> values, double t0) {
    if (!(dt > 0.0)) throw std::invalid_argument("ObservationSet: dt must be > 0");
    ObservationSet obs;
    obs.mode = ObsMode::Continuous;
    obs.dt = dt;
    obs.values = std::move(values);
    obs.times.resize(obs.values.size());
    for (std::size_t i = 0; i < obs.times.size(); ++i) obs.times[i] = t0 + dt * static_cast<double>(i);
    obs.validate();
    return obs;
}

ObservationSet ObservationSet::from_times(ObsMode mode, std::vector<double> times,
                                          std::vector<double> values) {
    ObservationSet obs;
    obs.mode = mode;
    obs.times = std::move(times);
    obs.values = std::move(values);
    if (obs.times.size() >= 2) {
        const double step = obs.times[1] - obs.times[0];
        obs.uniform = true;
        for (std::size_t i = 1; i + 1 < obs.times.size(); ++i) {
            if (std::abs(obs.times[i + 1] - obs.times[i] - step) > 1e-9 * std::max(1.0, std::abs(step))) {
                obs.uniform = false;
                break;
            }
        }
        obs.dt = obs.uniform ? step : 0.0;
    }
    obs.validate();
    return obs;
}

void ObservationSet::validate() const {
    if (times.size() != values.size())
        throw std::invalid_argument("ObservationSet: times/values size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0))
            throw domain_error("ObservationSet: value at index " + std::to_string(i) +
                               " is not positive");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("ObservationSet: times must be strictly increasing");
    }
}

}  // namespace fsdiff
