#pragma once

// Monte Carlo coverage study: Y_i = f0(i/n) + eps_i, eps_i ~ N(0, sigma0^2).
//
// Replicate r draws its noise from CounterRng(seed, r, 0) and its posterior
// draws (fixed-radius band) from CounterRng(seed, r, 1), so a report depends
// only on the configuration, never on how replicates are scheduled.
// run() distributes replicates over OpenMP threads; run_serial() is the
// single-threaded reference the parallel kernel is tested against.

#include <cstdint>
#include <span>
#include <vector>

#include "tubeband/bands.hpp"
#include "tubeband/lepski.hpp"
#include "tubeband/posterior.hpp"

namespace tubeband {

/// 2x - x^3 + exp(-50 (x - 0.5)^2). Throws Domain outside [0, 1].
[[nodiscard]] double f0_default(double x);

struct SimConfig {
    std::size_t n = 500;
    int reps = 300;
    double gamma = 0.05;
    double sigma0_sq = 0.1;
    /// Empty: f0_default. Otherwise B-spline coefficients of the truth on
    /// uniform clamped knots of order truth_order and dimension truth_coeffs.size().
    std::vector<double> truth_coeffs;
    int truth_order = 4;
    std::vector<BandMethod> methods{BandMethod::BayesLepskiTube, BandMethod::FrequentistTube,
                                    BandMethod::FixedRadius};
    std::uint64_t seed = 20240601;
    LepskiConfig lepski;
    PriorSpec prior;  // eta = 0, Omega = 10 I
    int fixed_radius_draws = 1000;
    NoiseEstimate frequentist_noise = NoiseEstimate::ResidualDf;
    int workers = 0;  // 0: OpenMP default
    bool keep_log = false;

    /// reps = 300 at the given n.
    static SimConfig desk_scale(std::size_t n);
    /// reps = 1000 at the given n.
    static SimConfig full_scale(std::size_t n);

    void validate() const;
    [[nodiscard]] double truth(double x) const;
    [[nodiscard]] std::vector<double> truth_on_grid(std::span<const double> grid) const;
};

/// Sample sizes of the full coverage table.
inline constexpr std::size_t kFullScaleSizes[] = {50, 100, 300, 500, 1000, 2000};
inline constexpr std::size_t kDeskScaleSizes[] = {100, 500};

[[nodiscard]] Dataset generate(const SimConfig& cfg, std::uint64_t rep_index);

struct MethodSummary {
    BandMethod method = BandMethod::BayesLepskiTube;
    int reps = 0;
    int covered = 0;
    int failures = 0;
    double coverage = 0.0;  // covered / (reps - failures)
    double coverage_se = 0.0;
    double mean_radius = 0.0;  // grid average, then replicate average
    double mean_selected_j = 0.0;
    /// Per-replicate mean radius quartiles (box-plot summary).
    double radius_q25 = 0.0;
    double radius_median = 0.0;
    double radius_q75 = 0.0;
};

struct ReplicateRecord {
    int rep = 0;
    BandMethod method = BandMethod::BayesLepskiTube;
    bool failed = false;
    bool covered = false;
    double mean_radius = 0.0;
    int selected_j = 0;
};

struct SimulationReport {
    SimConfig config;
    std::vector<MethodSummary> methods;  // in config.methods order
    std::vector<ReplicateRecord> log;    // filled when config.keep_log

    [[nodiscard]] const MethodSummary& summary(BandMethod method) const;
};

/// Outcome of every enabled method on one replicate.
[[nodiscard]] std::vector<ReplicateRecord> run_replicate(const SimConfig& cfg, int rep);

[[nodiscard]] SimulationReport run(const SimConfig& cfg);
[[nodiscard]] SimulationReport run_serial(const SimConfig& cfg);

}  // namespace tubeband
