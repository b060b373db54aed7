#include "tubeband/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tubeband/error.hpp"
#include "tubeband/log.hpp"
#include "tubeband/rng.hpp"

namespace tubeband {

double f0_default(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::Domain, "f0 evaluated outside [0, 1]");
    }
    const double d = x - 0.5;
    return 2.0 * x - x * x * x + std::exp(-50.0 * d * d);
}

SimConfig SimConfig::desk_scale(std::size_t n) {
    SimConfig cfg;
    cfg.n = n;
    cfg.reps = 300;
    return cfg;
}

SimConfig SimConfig::full_scale(std::size_t n) {
    SimConfig cfg;
    cfg.n = n;
    cfg.reps = 1000;
    return cfg;
}

void SimConfig::validate() const {
    if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be >= 1");
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
    if (!(sigma0_sq >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma0^2 must be >= 0");
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "gamma must lie in (0, 1)");
    }
    if (methods.empty()) throw Error(ErrorKind::InvalidArgument, "no methods selected");
    if (!truth_coeffs.empty() &&
        static_cast<int>(truth_coeffs.size()) < truth_order) {
        throw Error(ErrorKind::InvalidArgument, "truth needs at least truth_order coefficients");
    }
    lepski.validate();
    prior.validate();
}

double SimConfig::truth(double x) const {
    if (truth_coeffs.empty()) return f0_default(x);
    const auto knots = make_knots(static_cast<int>(truth_coeffs.size()), truth_order);
    return eval(knots, x).dot(truth_coeffs);
}

std::vector<double> SimConfig::truth_on_grid(std::span<const double> grid) const {
    std::vector<double> out(grid.size());
    if (truth_coeffs.empty()) {
        for (std::size_t k = 0; k < grid.size(); ++k) out[k] = f0_default(grid[k]);
        return out;
    }
    const auto knots = make_knots(static_cast<int>(truth_coeffs.size()), truth_order);
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = eval(knots, grid[k]).dot(truth_coeffs);
    return out;
}

Dataset generate(const SimConfig& cfg, std::uint64_t rep_index) {
    Dataset data;
    data.xs.resize(cfg.n);
    data.ys.resize(cfg.n);
    CounterRng rng(cfg.seed, rep_index, 0);
    std::normal_distribution<double> noise(0.0, std::sqrt(cfg.sigma0_sq));
    const double n = static_cast<double>(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const double x = static_cast<double>(i + 1) / n;
        data.xs[i] = x;
        data.ys[i] = cfg.truth(x) + (cfg.sigma0_sq > 0.0 ? noise(rng) : 0.0);
    }
    return data;
}

const MethodSummary& SimulationReport::summary(BandMethod method) const {
    for (const auto& m : methods) {
        if (m.method == method) return m;
    }
    throw Error(ErrorKind::InvalidArgument, std::string("method not in report: ") + to_string(method));
}

std::vector<ReplicateRecord> run_replicate(const SimConfig& cfg, int rep) {
    const Dataset data = generate(cfg, static_cast<std::uint64_t>(rep));
    LepskiConfig lepski = cfg.lepski;
    lepski.parallel_fits = false;

    const auto grid = uniform_grid(lepski.grid_size);
    const auto truth = cfg.truth_on_grid(grid);

    std::optional<LepskiSelection> bayes;
    std::optional<std::string> bayes_error;
    auto bayes_selection = [&]() -> const LepskiSelection& {
        if (!bayes && !bayes_error) {
            try {
                bayes.emplace(select_with_fits(data, lepski, cfg.prior));
            } catch (const Error& e) {
                if (!e.is_numerical()) throw;
                bayes_error = e.what();
            }
        }
        if (bayes_error) throw Error(ErrorKind::NumericalDegeneracy, *bayes_error);
        return *bayes;
    };

    std::vector<ReplicateRecord> out;
    out.reserve(cfg.methods.size());
    for (const BandMethod method : cfg.methods) {
        ReplicateRecord rec;
        rec.rep = rep;
        rec.method = method;
        try {
            Band band;
            switch (method) {
                case BandMethod::BayesLepskiTube:
                    band = tube_band_from_selection(bayes_selection(), cfg.gamma, method);
                    break;
                case BandMethod::FrequentistTube: {
                    const auto sel = select_with_fits(
                        data, frequentist_config(lepski, cfg.frequentist_noise), frequentist_prior());
                    band = tube_band_from_selection(sel, cfg.gamma, method);
                    break;
                }
                case BandMethod::FixedRadius: {
                    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(rep), 1);
                    band = fixed_radius_from_selection(bayes_selection(), cfg.gamma,
                                                       cfg.fixed_radius_draws, rng);
                    break;
                }
            }
            rec.covered = contains(band, truth);
            rec.mean_radius = band.mean_radius();
            rec.selected_j = band.selected_j;
        } catch (const Error& e) {
            if (!e.is_numerical()) throw;
            rec.failed = true;
            logger()->info("replicate {} {}: {}", rep, to_string(method), e.what());
        }
        out.push_back(rec);
    }
    return out;
}

namespace {

double quantile_sorted(const std::vector<double>& v, double p) {
    if (v.empty()) return 0.0;
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Merge in replicate order so floating-point sums are schedule independent.
SimulationReport summarize(const SimConfig& cfg,
                           const std::vector<std::vector<ReplicateRecord>>& per_rep) {
    SimulationReport report;
    report.config = cfg;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        MethodSummary s;
        s.method = cfg.methods[m];
        s.reps = cfg.reps;
        double radius_sum = 0.0;
        double j_sum = 0.0;
        std::vector<double> radii;
        for (const auto& recs : per_rep) {
            const ReplicateRecord& r = recs[m];
            if (r.failed) {
                ++s.failures;
                continue;
            }
            s.covered += r.covered ? 1 : 0;
            radius_sum += r.mean_radius;
            j_sum += r.selected_j;
            radii.push_back(r.mean_radius);
        }
        const int ok = s.reps - s.failures;
        if (ok > 0) {
            s.coverage = static_cast<double>(s.covered) / ok;
            s.coverage_se = std::sqrt(s.coverage * (1.0 - s.coverage) / ok);
            s.mean_radius = radius_sum / ok;
            s.mean_selected_j = j_sum / ok;
            std::sort(radii.begin(), radii.end());
            s.radius_q25 = quantile_sorted(radii, 0.25);
            s.radius_median = quantile_sorted(radii, 0.5);
            s.radius_q75 = quantile_sorted(radii, 0.75);
        }
        report.methods.push_back(s);
    }
    if (cfg.keep_log) {
        for (const auto& recs : per_rep) report.log.insert(report.log.end(), recs.begin(), recs.end());
    }
    return report;
}

}  // namespace

SimulationReport run_serial(const SimConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<ReplicateRecord>> per_rep(static_cast<std::size_t>(cfg.reps));
    for (int r = 0; r < cfg.reps; ++r) per_rep[static_cast<std::size_t>(r)] = run_replicate(cfg, r);
    return summarize(cfg, per_rep);
}

SimulationReport run(const SimConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<ReplicateRecord>> per_rep(static_cast<std::size_t>(cfg.reps));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.reps));
#ifdef _OPENMP
    const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#else
    const int threads = 1;
#endif
    logger()->info("simulate: n={} reps={} workers={}", cfg.n, cfg.reps, threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int r = 0; r < cfg.reps; ++r) {
        try {
            per_rep[static_cast<std::size_t>(r)] = run_replicate(cfg, r);
        } catch (...) {
            errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return summarize(cfg, per_rep);
}

}  // namespace tubeband
