// Command-line front end: simulate | estimate | diagnose | moments.
//
// Exit codes: 0 success, 1 I/O or parse failure, 2 domain/window validation,
// 3 numerical degeneracy.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fsdiff/diagnostics.hpp"
#include "fsdiff/errors.hpp"
#include "fsdiff/estimators.hpp"
#include "fsdiff/io.hpp"
#include "fsdiff/sde_core.hpp"
#include "fsdiff/simulator.hpp"
#include "fsdiff/version.hpp"

using nlohmann::json;

namespace {

// Applies a JSON config document underneath CLI flags: a key only takes
// effect when the matching flag was not given on the command line.  Unknown
// keys are rejected.
class ConfigBinder {
public:
    explicit ConfigBinder(CLI::App* cmd) : cmd_(cmd) {}

    template <typename T>
    void bind(const std::string& key, CLI::Option* opt, T* target) {
        appliers_[key] = [opt, target](const json& value) {
            if (opt->count() == 0) *target = value.get<T>();
        };
    }

    void apply(const json& config) const {
        for (const auto& [key, value] : config.items()) {
            const auto it = appliers_.find(key);
            if (it == appliers_.end())
                throw std::invalid_argument("config key '" + key + "' is not recognized by '" +
                                            cmd_->get_name() + "'");
            it->second(value);
        }
    }

    json resolved(const std::vector<std::pair<std::string, json>>& entries) const {
        json out = json::object();
        for (const auto& [k, v] : entries) out[k] = v;
        return out;
    }

private:
    CLI::App* cmd_;
    std::map<std::string, std::function<void(const json&)>> appliers_;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    json config;
    in >> config;
    if (!config.is_object()) throw std::runtime_error("config must be a JSON object");
    return config;
}

fsdiff::InitialLaw parse_init(const std::string& text) {
    if (text == "stationary") return fsdiff::InitialLaw::stationary();
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (kind == "dirac") {
        if (colon == std::string::npos)
            throw std::invalid_argument("init dirac requires a value, e.g. dirac:5.0");
        return fsdiff::InitialLaw::dirac(std::stod(text.substr(colon + 1)));
    }
    if (kind == "lognormal") {
        const auto second = text.find(':', colon + 1);
        if (colon == std::string::npos || second == std::string::npos)
            throw std::invalid_argument("init lognormal requires lognormal:<m>:<s>");
        return fsdiff::InitialLaw::log_normal(std::stod(text.substr(colon + 1, second - colon - 1)),
                                              std::stod(text.substr(second + 1)));
    }
    throw std::invalid_argument("unknown init '" + text +
                                "' (expected stationary, dirac:<x0>, lognormal:<m>:<s>)");
}

json provenance(const json& resolved_config, std::uint64_t seed) {
    return {{"tool", "fsdiff"}, {"version", fsdiff::kVersion}, {"config", resolved_config},
            {"seed", seed}};
}

std::string indexed_name(const std::string& prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_%03zu", i);
    return prefix + buf + ".csv";
}

// ----------------------------------------------------------------- simulate
struct SimulateArgs {
    double theta = 1.0, kappa = 2.0, alpha = 6.0, beta = 10.0;
    double dt = 0.01, T = 100.0;
    std::string scheme = "milstein_retry";
    std::string init = "stationary";
    std::uint64_t seed = 1;
    std::size_t n_paths = 1;
    int threads = 0;
    std::string out = "fsdiff_run";
    std::string config_path;
};

int run_simulate(const SimulateArgs& a, const ConfigBinder& binder) {
    const fsdiff::Parameters p(a.theta, a.kappa, a.alpha, a.beta);
    const auto scheme = fsdiff::scheme_from_string(a.scheme);
    const auto init = parse_init(a.init);

    const json resolved = binder.resolved({{"theta", a.theta},
                                           {"kappa", a.kappa},
                                           {"alpha", a.alpha},
                                           {"beta", a.beta},
                                           {"dt", a.dt},
                                           {"T", a.T},
                                           {"scheme", a.scheme},
                                           {"init", a.init},
                                           {"seed", a.seed},
                                           {"n_paths", a.n_paths},
                                           {"threads", a.threads},
                                           {"out", a.out}});

    if (a.n_paths == 1) {
        const fsdiff::Path path = fsdiff::simulate_path(p, init, a.dt, a.T, scheme, a.seed);
        fsdiff::write_path_csv(a.out + ".csv", path);
        json meta = fsdiff::path_metadata_json(p, path);
        meta["provenance"] = provenance(resolved, a.seed);
        meta["csv"] = a.out + ".csv";
        fsdiff::write_json(a.out + ".json", meta);
        std::cout << "wrote " << a.out << ".csv and " << a.out << ".json\n";
        return 0;
    }

    const auto ensemble =
        fsdiff::simulate_ensemble(p, init, a.dt, a.T, scheme, a.n_paths, a.seed, a.threads);
    json manifest;
    manifest["provenance"] = provenance(resolved, a.seed);
    manifest["paths"] = json::array();
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const std::string name = indexed_name(a.out, i);
        fsdiff::write_path_csv(name, ensemble[i]);
        json meta = fsdiff::path_metadata_json(p, ensemble[i]);
        meta["csv"] = name;
        manifest["paths"].push_back(meta);
    }
    fsdiff::write_json(a.out + "_manifest.json", manifest);
    std::cout << "wrote " << ensemble.size() << " path CSVs and " << a.out << "_manifest.json\n";
    return 0;
}

// ----------------------------------------------------------------- estimate
struct EstimateArgs {
    std::string input;
    std::string mode = "continuous";
    std::string variant = "general";
    double lag = 0.0;
    bool lag_given = false;
    std::string out;
    std::string config_path;
};

int run_estimate(const EstimateArgs& a, const ConfigBinder& binder) {
    if (a.mode != "discrete" && a.mode != "continuous")
        throw std::invalid_argument("mode must be 'discrete' or 'continuous'");
    const fsdiff::ObsMode mode =
        a.mode == "discrete" ? fsdiff::ObsMode::Discrete : fsdiff::ObsMode::Continuous;

    const auto obs = fsdiff::read_observations_csv(a.input, mode);
    std::optional<double> lag;
    if (a.lag_given) lag = a.lag;

    fsdiff::EstimateReport report;
    if (a.variant == "general") {
        report = fsdiff::estimate_params_general(obs, lag);
    } else if (a.variant == "fs-positive") {
        report = fsdiff::estimate_params_fs(obs, lag, fsdiff::FsVariant::PositiveMoments);
    } else if (a.variant == "fs-inverse") {
        report = fsdiff::estimate_params_fs(obs, lag, fsdiff::FsVariant::InverseMoments);
    } else {
        throw std::invalid_argument("variant must be general, fs-positive or fs-inverse");
    }

    json out = fsdiff::estimate_report_json(report);
    const json resolved = binder.resolved({{"input", a.input},
                                           {"mode", a.mode},
                                           {"variant", a.variant},
                                           {"lag", report.lag_t},
                                           {"out", a.out}});
    out["provenance"] = provenance(resolved, obs.meta.seed);
    if (a.out.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        fsdiff::write_json(a.out, out);
        std::cout << "wrote " << a.out << '\n';
    }
    return 0;
}

// ----------------------------------------------------------------- diagnose
struct DiagnoseArgs {
    std::string kind;
    double theta = 1.0, kappa = 2.0, alpha = 6.0, beta = 10.0;
    double dt = 0.01;
    std::string scheme = "milstein_retry";
    std::string init = "dirac:50";
    std::uint64_t seed = 1;
    int threads = 0;
    std::vector<double> times;
    std::vector<double> horizons;
    std::size_t n_paths = 20000;
    int bins = 64;
    double gamma = 0.0, delta = 0.0;
    double upsilon = 1.0;
    double T = 2000.0;
    std::size_t replicates = 500;
    std::string mode = "continuous";
    std::string input;
    std::size_t max_lag = 200;
    std::string out = "fsdiff_diag";
    std::string config_path;
};

int run_diagnose(const DiagnoseArgs& a, const ConfigBinder& binder) {
    const fsdiff::Parameters p(a.theta, a.kappa, a.alpha, a.beta);
    fsdiff::DiagnosticsConfig cfg;
    cfg.dt = a.dt;
    cfg.scheme = fsdiff::scheme_from_string(a.scheme);
    cfg.seed = a.seed;
    cfg.n_threads = a.threads;

    const json resolved = binder.resolved({{"kind", a.kind},
                                           {"theta", a.theta},
                                           {"kappa", a.kappa},
                                           {"alpha", a.alpha},
                                           {"beta", a.beta},
                                           {"dt", a.dt},
                                           {"scheme", a.scheme},
                                           {"init", a.init},
                                           {"seed", a.seed},
                                           {"threads", a.threads},
                                           {"times", a.times},
                                           {"horizons", a.horizons},
                                           {"n_paths", a.n_paths},
                                           {"bins", a.bins},
                                           {"gamma", a.gamma},
                                           {"delta", a.delta},
                                           {"upsilon", a.upsilon},
                                           {"T", a.T},
                                           {"replicates", a.replicates},
                                           {"mode", a.mode},
                                           {"input", a.input},
                                           {"max_lag", a.max_lag},
                                           {"out", a.out}});

    if (a.kind == "tv-decay" || a.kind == "weighted-tv") {
        if (a.times.empty())
            throw std::invalid_argument("diagnose: --times is required for decay curves");
        const auto init = parse_init(a.init);
        fsdiff::DecayFit fit;
        if (a.kind == "tv-decay") {
            fit = fsdiff::tv_decay_curve(p, init, a.times, a.n_paths, a.bins, cfg);
        } else {
            fit = fsdiff::weighted_tv_decay_curve(p, init, fsdiff::WeightSpec(a.gamma, a.delta),
                                                  a.times, a.n_paths, a.bins, cfg);
        }
        json out = fsdiff::decay_fit_json(fit);
        out["provenance"] = provenance(resolved, a.seed);
        fsdiff::write_json(a.out + ".json", out);
        fsdiff::write_decay_fit_csv(a.out + ".csv", fit);
        std::cout << "wrote " << a.out << ".json and " << a.out << ".csv\n";
        return 0;
    }
    if (a.kind == "lln") {
        if (a.horizons.empty())
            throw std::invalid_argument("diagnose: --horizons is required for lln");
        const auto report =
            fsdiff::lln_report(p, parse_init(a.init), a.upsilon, a.horizons, a.replicates, cfg);
        json out = fsdiff::lln_report_json(report);
        out["provenance"] = provenance(resolved, a.seed);
        fsdiff::write_json(a.out + ".json", out);
        std::cout << "wrote " << a.out << ".json\n";
        return 0;
    }
    if (a.kind == "clt") {
        const fsdiff::ObsMode mode =
            a.mode == "discrete" ? fsdiff::ObsMode::Discrete : fsdiff::ObsMode::Continuous;
        const auto report = fsdiff::clt_check(p, a.upsilon, a.T, a.replicates, mode, cfg);
        json out = fsdiff::normality_report_json(report);
        out["provenance"] = provenance(resolved, a.seed);
        fsdiff::write_json(a.out + ".json", out);
        std::ofstream csv(a.out + ".csv");
        csv << "n_replicates,mean,variance,skewness,excess_kurtosis,ks_statistic,ks_threshold,pass\n"
            << report.n_replicates << ',' << report.mean << ',' << report.variance << ','
            << report.skewness << ',' << report.excess_kurtosis << ',' << report.ks_statistic << ','
            << report.ks_threshold << ',' << (report.pass ? 1 : 0) << '\n';
        std::cout << "wrote " << a.out << ".json and " << a.out << ".csv\n";
        return 0;
    }
    if (a.kind == "acf") {
        if (a.input.empty()) throw std::invalid_argument("diagnose: --input is required for acf");
        const fsdiff::ObsMode mode =
            a.mode == "discrete" ? fsdiff::ObsMode::Discrete : fsdiff::ObsMode::Continuous;
        const auto obs = fsdiff::read_observations_csv(a.input, mode);
        const auto fit = fsdiff::autocorrelation_fit(obs, a.max_lag);
        json out{{"theta_hat", fit.theta_hat},
                 {"r_squared", fit.r_squared},
                 {"lags_used", fit.lags_used}};
        out["provenance"] = provenance(resolved, a.seed);
        fsdiff::write_json(a.out + ".json", out);
        std::cout << "wrote " << a.out << ".json\n";
        return 0;
    }
    throw std::invalid_argument("diagnose: unknown kind '" + a.kind +
                                "' (expected tv-decay, weighted-tv, lln, clt, acf)");
}

// ------------------------------------------------------------------ moments
struct MomentsArgs {
    double theta = 1.0, kappa = 2.0, alpha = 6.0, beta = 10.0;
    std::vector<double> upsilon{-1.0, 1.0, 2.0};
    std::string out;
    std::string config_path;
};

int run_moments(const MomentsArgs& a, const ConfigBinder& binder) {
    const fsdiff::Parameters p(a.theta, a.kappa, a.alpha, a.beta);
    json table = json::array();
    std::printf("%12s %22s\n", "upsilon", "moment");
    for (double u : a.upsilon) {
        const double m = fsdiff::theoretical_moment(p, u);
        std::printf("%12g %22.15g\n", u, m);
        table.push_back({{"upsilon", u}, {"moment", m}});
    }
    if (!a.out.empty()) {
        const json resolved = binder.resolved({{"theta", a.theta},
                                               {"kappa", a.kappa},
                                               {"alpha", a.alpha},
                                               {"beta", a.beta},
                                               {"upsilon", a.upsilon},
                                               {"out", a.out}});
        fsdiff::write_json(a.out, json{{"moments", table}, {"provenance", provenance(resolved, 0)}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation, estimation and diagnostics for a mean-reverting heavy-tailed diffusion"};
    app.require_subcommand(1);
    app.set_version_flag("--version", fsdiff::kVersion);

    SimulateArgs sim;
    DiagnoseArgs diag;
    EstimateArgs est;
    MomentsArgs mom;

    auto* c_sim = app.add_subcommand("simulate", "Simulate paths or ensembles to CSV + JSON");
    ConfigBinder b_sim(c_sim);
    {
        c_sim->add_option("--config", sim.config_path, "JSON config; flags override config keys");
        b_sim.bind("theta", c_sim->add_option("--theta", sim.theta), &sim.theta);
        b_sim.bind("kappa", c_sim->add_option("--kappa", sim.kappa), &sim.kappa);
        b_sim.bind("alpha", c_sim->add_option("--alpha", sim.alpha), &sim.alpha);
        b_sim.bind("beta", c_sim->add_option("--beta", sim.beta), &sim.beta);
        b_sim.bind("dt", c_sim->add_option("--dt", sim.dt), &sim.dt);
        b_sim.bind("T", c_sim->add_option("--T", sim.T), &sim.T);
        b_sim.bind("scheme", c_sim->add_option("--scheme", sim.scheme), &sim.scheme);
        b_sim.bind("init", c_sim->add_option("--init", sim.init), &sim.init);
        b_sim.bind("seed", c_sim->add_option("--seed", sim.seed), &sim.seed);
        b_sim.bind("n_paths", c_sim->add_option("--n-paths", sim.n_paths), &sim.n_paths);
        b_sim.bind("threads", c_sim->add_option("--threads", sim.threads), &sim.threads);
        b_sim.bind("out", c_sim->add_option("--out", sim.out), &sim.out);
    }

    auto* c_est = app.add_subcommand("estimate", "Method-of-moments fit from a time,value CSV");
    ConfigBinder b_est(c_est);
    CLI::Option* lag_opt = nullptr;
    {
        c_est->add_option("--config", est.config_path, "JSON config; flags override config keys");
        b_est.bind("input", c_est->add_option("--input", est.input, "input CSV"), &est.input);
        b_est.bind("mode", c_est->add_option("--mode", est.mode), &est.mode);
        b_est.bind("variant", c_est->add_option("--variant", est.variant), &est.variant);
        lag_opt = c_est->add_option("--lag", est.lag, "covariance lag (default: 1/theta heuristic)");
        b_est.bind("lag", lag_opt, &est.lag);
        b_est.bind("out", c_est->add_option("--out", est.out), &est.out);
    }

    auto* c_diag = app.add_subcommand("diagnose", "Ergodicity / LLN / CLT / ACF diagnostics");
    ConfigBinder b_diag(c_diag);
    {
        c_diag->add_option("--config", diag.config_path, "JSON config; flags override config keys");
        b_diag.bind("kind", c_diag->add_option("--kind", diag.kind), &diag.kind);
        b_diag.bind("theta", c_diag->add_option("--theta", diag.theta), &diag.theta);
        b_diag.bind("kappa", c_diag->add_option("--kappa", diag.kappa), &diag.kappa);
        b_diag.bind("alpha", c_diag->add_option("--alpha", diag.alpha), &diag.alpha);
        b_diag.bind("beta", c_diag->add_option("--beta", diag.beta), &diag.beta);
        b_diag.bind("dt", c_diag->add_option("--dt", diag.dt), &diag.dt);
        b_diag.bind("scheme", c_diag->add_option("--scheme", diag.scheme), &diag.scheme);
        b_diag.bind("init", c_diag->add_option("--init", diag.init), &diag.init);
        b_diag.bind("seed", c_diag->add_option("--seed", diag.seed), &diag.seed);
        b_diag.bind("threads", c_diag->add_option("--threads", diag.threads), &diag.threads);
        b_diag.bind("times", c_diag->add_option("--times", diag.times)->delimiter(','), &diag.times);
        b_diag.bind("horizons", c_diag->add_option("--horizons", diag.horizons)->delimiter(','),
                    &diag.horizons);
        b_diag.bind("n_paths", c_diag->add_option("--n-paths", diag.n_paths), &diag.n_paths);
        b_diag.bind("bins", c_diag->add_option("--bins", diag.bins), &diag.bins);
        b_diag.bind("gamma", c_diag->add_option("--gamma", diag.gamma), &diag.gamma);
        b_diag.bind("delta", c_diag->add_option("--delta", diag.delta), &diag.delta);
        b_diag.bind("upsilon", c_diag->add_option("--upsilon", diag.upsilon), &diag.upsilon);
        b_diag.bind("T", c_diag->add_option("--T", diag.T), &diag.T);
        b_diag.bind("replicates", c_diag->add_option("--replicates", diag.replicates),
                    &diag.replicates);
        b_diag.bind("mode", c_diag->add_option("--mode", diag.mode), &diag.mode);
        b_diag.bind("input", c_diag->add_option("--input", diag.input), &diag.input);
        b_diag.bind("max_lag", c_diag->add_option("--max-lag", diag.max_lag), &diag.max_lag);
        b_diag.bind("out", c_diag->add_option("--out", diag.out), &diag.out);
    }

    auto* c_mom = app.add_subcommand("moments", "Print stationary moments for an exponent list");
    ConfigBinder b_mom(c_mom);
    {
        c_mom->add_option("--config", mom.config_path, "JSON config; flags override config keys");
        b_mom.bind("theta", c_mom->add_option("--theta", mom.theta), &mom.theta);
        b_mom.bind("kappa", c_mom->add_option("--kappa", mom.kappa), &mom.kappa);
        b_mom.bind("alpha", c_mom->add_option("--alpha", mom.alpha), &mom.alpha);
        b_mom.bind("beta", c_mom->add_option("--beta", mom.beta), &mom.beta);
        b_mom.bind("upsilon", c_mom->add_option("--upsilon", mom.upsilon)->delimiter(','),
                   &mom.upsilon);
        b_mom.bind("out", c_mom->add_option("--out", mom.out), &mom.out);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_sim->parsed()) {
            if (!sim.config_path.empty()) b_sim.apply(load_config(sim.config_path));
            return run_simulate(sim, b_sim);
        }
        if (c_est->parsed()) {
            if (!est.config_path.empty()) b_est.apply(load_config(est.config_path));
            est.lag_given = lag_opt->count() > 0 || est.lag > 0.0;
            return run_estimate(est, b_est);
        }
        if (c_diag->parsed()) {
            if (!diag.config_path.empty()) b_diag.apply(load_config(diag.config_path));
            return run_diagnose(diag, b_diag);
        }
        if (c_mom->parsed()) {
            if (!mom.config_path.empty()) b_mom.apply(load_config(mom.config_path));
            return run_moments(mom, b_mom);
        }
    } catch (const fsdiff::negative_log_argument_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const fsdiff::degenerate_denominator_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const fsdiff::mean_at_most_one_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const fsdiff::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
