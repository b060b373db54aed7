#include "tubeband/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tubeband/bands.hpp"
#include "tubeband/error.hpp"
#include "tubeband/io.hpp"
#include "tubeband/sim.hpp"
#include "tubeband/tube.hpp"
#include "tubeband/version.hpp"

namespace tubeband::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct ModelFlags {
    int order = 4;
    double tau = 1.0;
    int j_min = 0;
    int j_max = 0;
    int grid = 512;
    std::string mode = "practical";
    double prior_mean = 0.0;
    double prior_var = 10.0;
    std::string endpoint_log = "log10";
    std::string frequentist_noise = "residual-df";
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
    app->add_option("--order", f.order, "B-spline order q (4 = cubic)")->check(CLI::Range(1, 20));
    app->add_option("--tau", f.tau, "Lepski threshold multiplier")->check(CLI::NonNegativeNumber);
    app->add_option("--j-min", f.j_min, "smallest candidate dimension (0 = rate default)");
    app->add_option("--j-max", f.j_max, "largest candidate dimension (0 = rate default)");
    app->add_option("--grid", f.grid, "evaluation grid size")->check(CLI::Range(64, 1 << 20));
    app->add_option("--threshold", f.mode, "practical or asymptotic")
        ->check(CLI::IsMember({"practical", "asymptotic"}));
    app->add_option("--endpoint-log", f.endpoint_log, "log in the default j_min/j_max: log10 or natural")
        ->check(CLI::IsMember({"log10", "natural"}));
    app->add_option("--frequentist-noise", f.frequentist_noise,
                    "noise estimate of the frequentist band: residual-df or empirical-bayes")
        ->check(CLI::IsMember({"residual-df", "empirical-bayes"}));
    app->add_option("--prior-mean", f.prior_mean, "prior mean of every coefficient");
    app->add_option("--prior-var", f.prior_var, "prior variance of every coefficient")
        ->check(CLI::PositiveNumber);
}

LepskiConfig lepski_from(const ModelFlags& f) {
    LepskiConfig cfg;
    cfg.order = f.order;
    cfg.tau = f.tau;
    cfg.j_min = f.j_min;
    cfg.j_max = f.j_max;
    cfg.grid_size = f.grid;
    cfg.mode = f.mode == "asymptotic" ? ThresholdMode::Asymptotic : ThresholdMode::Practical;
    cfg.endpoint_log = f.endpoint_log == "natural" ? EndpointLog::Natural : EndpointLog::Base10;
    return cfg;
}

NoiseEstimate frequentist_noise_from(const ModelFlags& f) {
    return f.frequentist_noise == "empirical-bayes" ? NoiseEstimate::EmpiricalBayes
                                                    : NoiseEstimate::ResidualDf;
}

PriorSpec prior_from(const ModelFlags& f) {
    PriorSpec p = PriorSpec::with_variance(f.prior_var);
    p.eta = f.prior_mean;
    return p;
}

json model_params(const ModelFlags& f) {
    return json{{"order", f.order},         {"tau", f.tau},
                {"j_min", f.j_min},         {"j_max", f.j_max},
                {"grid_size", f.grid},      {"threshold_mode", f.mode},
                {"prior_mean", f.prior_mean}, {"prior_variance", f.prior_var},
                {"endpoint_log", f.endpoint_log}, {"frequentist_noise", f.frequentist_noise}};
}

json manifest(const std::string& subcommand, json params, std::uint64_t seed, json inputs,
              json outputs) {
    return json{{"tool", "tubeband"},
                {"version", kVersion},
                {"subcommand", subcommand},
                {"parameters", std::move(params)},
                {"seed", seed},
                {"inputs", std::move(inputs)},
                {"outputs", std::move(outputs)}};
}

// Outputs are named by file name only so artifacts do not depend on the output directory.
std::string leaf(const std::string& path) { return std::filesystem::path(path).filename().string(); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open output file: " + path);
    f << text;
    if (!f) throw Error(ErrorKind::InvalidArgument, "failed writing output file: " + path);
}

// Sidecar copy of the manifest with the wall-clock duration. Kept apart so
// that the primary artifacts stay byte-identical between runs.
void write_timed_manifest(const std::string& path, json m, Clock::time_point start) {
    if (path.empty()) return;
    m["duration_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    write_text(path, m.dump(2) + "\n");
}

struct FitFlags {
    std::string input;
    std::string out = "band";
    double gamma = 0.05;
    std::string method = "bayes-lepski";
    int draws = 1000;
    std::uint64_t seed = 20240601;
    std::string manifest;
    ModelFlags model;
};

int cmd_fit(const FitFlags& f, std::ostream& out) {
    const auto start = Clock::now();
    const auto method = parse_band_method(f.method);
    if (!method) throw Error(ErrorKind::InvalidArgument, "unknown method: " + f.method);
    const Dataset data = io::read_dataset_csv_file(f.input);
    const LepskiConfig lepski = lepski_from(f.model);
    const PriorSpec prior = prior_from(f.model);

    Band band;
    switch (*method) {
        case BandMethod::BayesLepskiTube: band = credible_band(data, f.gamma, lepski, prior); break;
        case BandMethod::FrequentistTube: band = frequentist_band(data, f.gamma, lepski, frequentist_noise_from(f.model)); break;
        case BandMethod::FixedRadius: {
            CounterRng rng(f.seed, 0, 1);
            band = fixed_radius_band(data, f.gamma, lepski, prior, f.draws, rng);
            break;
        }
    }

    const std::string csv_path = f.out + ".csv";
    const std::string json_path = f.out + ".json";
    json params = model_params(f.model);
    params["gamma"] = f.gamma;
    params["method"] = to_string(*method);
    if (*method == BandMethod::FixedRadius) params["draws"] = f.draws;
    json m = manifest("fit", std::move(params), f.seed, json{{"data", f.input}},
                      json{{"band_csv", leaf(csv_path)}, {"metadata_json", leaf(json_path)}});

    std::ostringstream csv;
    io::write_band_csv(csv, band);
    write_text(csv_path, csv.str());
    json meta;
    meta["manifest"] = m;
    meta["n"] = data.size();
    meta["band"] = io::band_to_json(band);
    write_text(json_path, meta.dump(2) + "\n");
    write_timed_manifest(f.manifest, std::move(m), start);

    out << fmt::format("fit: n={} method={} J={} sigma_hat={:.6g} w={:.6g} arc={:.6g} "
                       "mean_radius={:.6g} -> {}, {}\n",
                       data.size(), to_string(*method), band.selected_j, band.sigma_hat, band.w,
                       band.arc_length, band.mean_radius(), csv_path, json_path);
    return kExitOk;
}

struct SimFlags {
    std::vector<std::size_t> ns;
    int reps = 300;
    double gamma = 0.05;
    std::uint64_t seed = 20240601;
    std::vector<std::string> methods{"bayes-lepski", "frequentist", "fixed-radius"};
    std::string out = "coverage";
    int workers = 0;
    double sigma0_sq = 0.1;
    int draws = 1000;
    bool keep_log = false;
    std::string manifest;
    ModelFlags model;
};

int cmd_simulate(const SimFlags& f, std::ostream& out) {
    const auto start = Clock::now();
    std::vector<BandMethod> methods;
    for (const auto& name : f.methods) {
        const auto m = parse_band_method(name);
        if (!m) throw Error(ErrorKind::InvalidArgument, "unknown method: " + name);
        methods.push_back(*m);
    }
    const std::vector<std::size_t> ns =
        f.ns.empty() ? std::vector<std::size_t>(std::begin(kDeskScaleSizes), std::end(kDeskScaleSizes))
                     : f.ns;

    std::vector<SimConfig> configs;
    for (const std::size_t n : ns) {
        SimConfig cfg;
        cfg.n = n;
        cfg.reps = f.reps;
        cfg.gamma = f.gamma;
        cfg.seed = f.seed;
        cfg.methods = methods;
        cfg.sigma0_sq = f.sigma0_sq;
        cfg.fixed_radius_draws = f.draws;
        cfg.workers = f.workers;
        cfg.keep_log = f.keep_log;
        cfg.lepski = lepski_from(f.model);
        cfg.prior = prior_from(f.model);
        cfg.frequentist_noise = frequentist_noise_from(f.model);
        cfg.validate();
        configs.push_back(std::move(cfg));
    }

    std::vector<SimulationReport> reports;
    for (const auto& cfg : configs) reports.push_back(run(cfg));

    const std::string json_path = f.out + ".json";
    const std::string csv_path = f.out + ".csv";
    json params = model_params(f.model);
    params["n"] = ns;
    params["reps"] = f.reps;
    params["gamma"] = f.gamma;
    params["methods"] = f.methods;
    params["sigma0_sq"] = f.sigma0_sq;
    params["draws"] = f.draws;
    json m = manifest("simulate", std::move(params), f.seed, json::object(),
                      json{{"report_json", leaf(json_path)}, {"coverage_csv", leaf(csv_path)}});

    json doc;
    doc["manifest"] = m;
    auto& arr = doc["reports"] = json::array();
    for (const auto& r : reports) arr.push_back(io::report_to_json(r));
    write_text(json_path, doc.dump(2) + "\n");
    std::ostringstream csv;
    io::write_coverage_table_csv(csv, reports);
    write_text(csv_path, csv.str());
    m["workers"] = f.workers;
    write_timed_manifest(f.manifest, std::move(m), start);

    for (const auto& r : reports) {
        for (const auto& s : r.methods) {
            out << fmt::format("simulate: n={} method={} coverage={:.4f} (se {:.4f}) "
                               "mean_radius={:.4g} mean_J={:.3g} failures={}\n",
                               r.config.n, to_string(s.method), s.coverage, s.coverage_se,
                               s.mean_radius, s.mean_selected_j, s.failures);
        }
    }
    out << "wrote " << json_path << ", " << csv_path << "\n";
    return kExitOk;
}

int cmd_quantile(double arc, double gamma, std::ostream& out) {
    const auto q = solve_quantile(arc, gamma);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", q.w);
    out << buf << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive Bayesian simultaneous credible bands", "tubeband"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    FitFlags fit;
    auto* fit_cmd = app.add_subcommand("fit", "credible band from an x,y CSV");
    fit_cmd->add_option("input", fit.input, "CSV with header x,y")->required();
    fit_cmd->add_option("-o,--out", fit.out, "output prefix: <out>.csv and <out>.json");
    fit_cmd->add_option("--gamma", fit.gamma, "1 - credibility level")
        ->check(CLI::Range(0.0, 1.0).description("in (0, 1)"));
    fit_cmd->add_option("--method", fit.method, "bayes-lepski, frequentist or fixed-radius");
    fit_cmd->add_option("--draws", fit.draws, "posterior draws for fixed-radius")
        ->check(CLI::Range(100, 100000000));
    fit_cmd->add_option("--seed", fit.seed, "seed for posterior draws");
    fit_cmd->add_option("--manifest", fit.manifest, "also write a manifest with timing here");
    add_model_flags(fit_cmd, fit.model);

    SimFlags sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo coverage study");
    sim_cmd->add_option("--n", sim.ns, "sample sizes (comma separated; default 100,500)")
        ->delimiter(',')
        ->check(CLI::Range(std::size_t{10}, std::size_t{1000000}));
    sim_cmd->add_option("--reps", sim.reps, "replicates per sample size")
        ->check(CLI::Range(1, 10000000));
    sim_cmd->add_option("--gamma", sim.gamma, "1 - credibility level")
        ->check(CLI::Range(0.0, 1.0).description("in (0, 1)"));
    sim_cmd->add_option("--seed", sim.seed, "base seed");
    sim_cmd->add_option("--methods", sim.methods, "comma separated band methods")->delimiter(',');
    sim_cmd->add_option("-o,--out", sim.out, "output prefix: <out>.json and <out>.csv");
    sim_cmd->add_option("--workers", sim.workers, "OpenMP threads (0 = default)")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--sigma0-sq", sim.sigma0_sq, "noise variance")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--draws", sim.draws, "posterior draws for fixed-radius")
        ->check(CLI::Range(100, 100000000));
    sim_cmd->add_flag("--log", sim.keep_log, "include per-replicate records");
    sim_cmd->add_option("--manifest", sim.manifest, "also write a manifest with timing here");
    add_model_flags(sim_cmd, sim.model);

    double arc = 0.0;
    double q_gamma = 0.05;
    auto* q_cmd = app.add_subcommand("quantile", "solve the tube equation for w");
    q_cmd->add_option("--arc", arc, "arc length |beta|")->required()->check(CLI::NonNegativeNumber);
    q_cmd->add_option("--gamma", q_gamma, "tail probability in (0, 1]")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        // CLI11's Range is closed; the open ends are checked here.
        if (fit_cmd->parsed() && !(fit.gamma > 0.0 && fit.gamma < 1.0)) {
            throw CLI::ValidationError("--gamma", "gamma must lie in (0, 1)");
        }
        if (sim_cmd->parsed() && !(sim.gamma > 0.0 && sim.gamma < 1.0)) {
            throw CLI::ValidationError("--gamma", "gamma must lie in (0, 1)");
        }
        if (q_cmd->parsed() && !(q_gamma > 0.0 && q_gamma <= 1.0)) {
            throw CLI::ValidationError("--gamma", "gamma must lie in (0, 1]");
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help / --version
            if (dynamic_cast<const CLI::CallForVersion*>(&e) != nullptr) {
                out << kVersion << "\n";
            } else {
                const CLI::App* target = &app;
                for (const auto* sub : app.get_subcommands()) target = sub;
                out << target->help();
            }
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) target = sub;
        err << target->help();
        return kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) return cmd_fit(fit, out);
        if (sim_cmd->parsed()) return cmd_simulate(sim, out);
        return cmd_quantile(arc, q_gamma, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return e.is_numerical() ? kExitNumerical : kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace tubeband::cli
