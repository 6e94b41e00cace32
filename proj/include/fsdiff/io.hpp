#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "fsdiff/diagnostics.hpp"
#include "fsdiff/estimators.hpp"
#include "fsdiff/observation.hpp"
#include "fsdiff/parameters.hpp"
#include "fsdiff/simulator.hpp"

namespace fsdiff {

// CSV dialect: comma separated, header row "time,value", '.' decimal,
// full double precision.
void write_series_csv(const std::string& filename, const std::vector<double>& times,
                      const std::vector<double>& values);
void write_path_csv(const std::string& filename, const Path& path);
void write_observations_csv(const std::string& filename, const ObservationSet& obs);

// Reads a time,value CSV.  Parse failures and nonpositive values raise
// std::runtime_error citing the offending line number.
ObservationSet read_observations_csv(const std::string& filename, ObsMode mode);

nlohmann::json parameters_json(const Parameters& p);
Parameters parameters_from_json(const nlohmann::json& j);

nlohmann::json path_metadata_json(const Parameters& p, const Path& path);
nlohmann::json estimate_report_json(const EstimateReport& report);
nlohmann::json decay_fit_json(const DecayFit& fit);
nlohmann::json normality_report_json(const NormalityReport& report);
nlohmann::json lln_report_json(const LlnReport& report);

void write_decay_fit_csv(const std::string& filename, const DecayFit& fit);

void write_json(const std::string& filename, const nlohmann::json& j);

}  // namespace fsdiff
