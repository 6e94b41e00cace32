#include "fsdiff/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fsdiff {

namespace {

std::ofstream open_out(const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open '" + filename + "' for writing");
    return out;
}

double parse_double(const std::string& token, const std::string& filename, std::size_t line_no,
                    const char* what) {
    double value{};
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error(filename + ":" + std::to_string(line_no) + ": cannot parse " + what +
                                 " '" + token + "'");
    return value;
}

}  // namespace

void write_series_csv(const std::string& filename, const std::vector<double>& times,
                      const std::vector<double>& values) {
    auto out = open_out(filename);
    out << "time,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < values.size(); ++i) out << times[i] << ',' << values[i] << '\n';
    if (!out) throw std::runtime_error("write failure on '" + filename + "'");
}

void write_path_csv(const std::string& filename, const Path& path) {
    std::vector<double> times(path.values.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = path.time_at(i);
    write_series_csv(filename, times, path.values);
}

void write_observations_csv(const std::string& filename, const ObservationSet& obs) {
    write_series_csv(filename, obs.times, obs.values);
}

ObservationSet read_observations_csv(const std::string& filename, ObsMode mode) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open '" + filename + "' for reading");
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> times, values;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("time", 0) == 0) continue;  // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(filename + ":" + std::to_string(line_no) +
                                     ": expected 'time,value'");
        const double t = parse_double(line.substr(0, comma), filename, line_no, "time");
        const double v = parse_double(line.substr(comma + 1), filename, line_no, "value");
        if (!(v > 0.0))
            throw std::runtime_error(filename + ":" + std::to_string(line_no) +
                                     ": nonpositive value " + std::to_string(v));
        times.push_back(t);
        values.push_back(v);
    }
    if (values.empty()) throw std::runtime_error(filename + ": no data rows");
    if (mode == ObsMode::Discrete) return ObservationSet::discrete(std::move(values));
    return ObservationSet::from_times(mode, std::move(times), std::move(values));
}

nlohmann::json parameters_json(const Parameters& p) {
    return {{"theta", p.theta}, {"kappa", p.kappa}, {"alpha", p.alpha}, {"beta", p.beta}};
}

Parameters parameters_from_json(const nlohmann::json& j) {
    return Parameters(j.at("theta").get<double>(), j.at("kappa").get<double>(),
                      j.at("alpha").get<double>(), j.at("beta").get<double>());
}

nlohmann::json path_metadata_json(const Parameters& p, const Path& path) {
    return {{"parameters", parameters_json(p)},
            {"scheme", to_string(path.scheme)},
            {"seed", path.seed},
            {"path_index", path.path_index},
            {"dt", path.dt},
            {"t0", path.t0},
            {"n_points", path.values.size()},
            {"clamp_events", path.clamp_events},
            {"retry_exhausted", path.retry_exhausted}};
}

nlohmann::json estimate_report_json(const EstimateReport& report) {
    std::vector<double> cov;
    cov.reserve(16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) cov.push_back(report.asymptotic_cov(i, j));
    return {{"point_estimates",
             {{"alpha", report.alpha_hat},
              {"beta", report.beta_hat},
              {"kappa", report.kappa_hat},
              {"theta", report.theta_hat}}},
            {"standard_errors", report.standard_errors},
            {"asymptotic_cov", cov},
            {"moments_used",
             {{"m_minus1", report.moments_used[0]},
              {"m1", report.moments_used[1]},
              {"m2", report.moments_used[2]},
              {"R", report.moments_used[3]}}},
            {"lag_t", report.lag_t},
            {"mode", to_string(report.mode)},
            {"n_or_T", report.sample_size_effective},
            {"warnings", report.warnings}};
}

nlohmann::json decay_fit_json(const DecayFit& fit) {
    nlohmann::json j{{"lags", fit.lags},
                     {"distances", fit.distances},
                     {"noise_floor", fit.noise_floor},
                     {"used_in_fit", fit.used_in_fit},
                     {"warnings", fit.warnings}};
    if (fit.has_fit()) {
        j["rate_hat"] = fit.rate_hat;
        j["intercept_hat"] = fit.intercept_hat;
        j["r_squared"] = fit.r_squared;
    }
    return j;
}

nlohmann::json normality_report_json(const NormalityReport& report) {
    return {{"n_replicates", report.n_replicates},
            {"n_dropped", report.n_dropped},
            {"mean", report.mean},
            {"variance", report.variance},
            {"skewness", report.skewness},
            {"excess_kurtosis", report.excess_kurtosis},
            {"ks_statistic", report.ks_statistic},
            {"ks_threshold", report.ks_threshold},
            {"pass", report.pass},
            {"upsilon", report.upsilon},
            {"mode", to_string(report.mode)}};
}

nlohmann::json lln_report_json(const LlnReport& report) {
    return {{"upsilon", report.upsilon},
            {"target", report.target},
            {"horizons", report.horizons},
            {"median_abs_error", report.median_abs_error},
            {"iqr_low", report.iqr_low},
            {"iqr_high", report.iqr_high}};
}

void write_decay_fit_csv(const std::string& filename, const DecayFit& fit) {
    auto out = open_out(filename);
    out << "lag,distance,used_in_fit\n" << std::setprecision(17);
    for (std::size_t i = 0; i < fit.lags.size(); ++i)
        out << fit.lags[i] << ',' << fit.distances[i] << ',' << (fit.used_in_fit[i] ? 1 : 0) << '\n';
}

void write_json(const std::string& filename, const nlohmann::json& j) {
    auto out = open_out(filename);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failure on '" + filename + "'");
}

}  // namespace fsdiff
