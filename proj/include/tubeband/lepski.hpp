#pragma once

// Bayes Lepski selection of the basis dimension.
//
// Candidates J = j_min..j_max are fitted once each. Scanning j downward from
// j_max - 1, the rule compares ||E_j - E_i||_inf against a threshold at i for
// every i in (j, j_max]; the first j with any exceedance selects j + 1.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tubeband/posterior.hpp"

namespace tubeband {

enum class ThresholdMode {
    Asymptotic,  // tau * sigma_i * sqrt(i log i / n)
    Practical,   // tau * sigma_i * sqrt(min_x b_i(x)^T M_i b_i(x)) * sqrt(log i)
};

/// Logarithm in the default candidate endpoints.
enum class EndpointLog { Natural, Base10 };

enum class StopReason { Triggered, ExhaustedAtJmin, DefaultedJmax };

const char* to_string(ThresholdMode mode) noexcept;
const char* to_string(StopReason reason) noexcept;
const char* to_string(EndpointLog base) noexcept;

struct LepskiConfig {
    int order = 4;
    double tau = 1.0;
    int j_min = 0;  // 0: max(order, ceil((n / log n)^{1/(2q+1)}))
    int j_max = 0;  // 0: max(j_min, floor(n / log^2 n))
    EndpointLog endpoint_log = EndpointLog::Base10;
    int grid_size = 512;
    ThresholdMode mode = ThresholdMode::Practical;
    bool parallel_fits = true;
    NoiseEstimate noise = NoiseEstimate::EmpiricalBayes;

    struct Range {
        int j_min;
        int j_max;
    };
    /// Candidate endpoints for a sample of size n. Throws InvalidArgument if
    /// the configuration cannot produce q <= j_min <= j_max.
    [[nodiscard]] Range resolve(std::size_t n) const;
    void validate() const;
};

/// Uniform grid k / (size - 1), k = 0..size-1.
[[nodiscard]] std::vector<double> uniform_grid(int size);

/// Posterior mean evaluated on a grid.
[[nodiscard]] std::vector<double> mean_on_grid(const PosteriorState& s,
                                               std::span<const double> grid);

/// max_k |mean_a(x_k) - mean_b(x_k)| over the uniform grid of `grid_size` points.
[[nodiscard]] double sup_diff(const PosteriorState& a, const PosteriorState& b, int grid_size);

[[nodiscard]] double threshold_asymptotic(int dimension, double sigma_hat, std::size_t n,
                                          double tau);

[[nodiscard]] double threshold_practical(const PosteriorState& s, int grid_size);

struct CandidateRecord {
    int dimension;
    double sigma_hat;
    double threshold;  // already multiplied by tau
};

struct Comparison {
    int j;
    int i;
    double sup_diff;
    double threshold;
    bool violated;
};

struct LepskiTrace {
    int j_min = 0;
    int j_max = 0;
    ThresholdMode mode = ThresholdMode::Practical;
    double tau = 1.0;
    int grid_size = 0;
    EndpointLog endpoint_log = EndpointLog::Base10;
    NoiseEstimate noise = NoiseEstimate::EmpiricalBayes;
    /// Which dimension's log enters the practical threshold ("i": the larger
    /// candidate being compared against).
    std::string log_index = "i";
    std::vector<CandidateRecord> candidates;  // ascending J
    std::vector<Comparison> comparisons;      // in scan order
    int selected = 0;
    StopReason reason = StopReason::ExhaustedAtJmin;

    [[nodiscard]] const CandidateRecord& candidate(int dimension) const;
};

struct LepskiSelection {
    LepskiTrace trace;
    std::vector<PosteriorState> fits;  // ascending J, fits[J - j_min]

    [[nodiscard]] const PosteriorState& fit_for(int dimension) const;
    [[nodiscard]] const PosteriorState& selected_fit() const {
        return fit_for(trace.selected);
    }
};

/// Runs the scan and keeps every candidate fit.
[[nodiscard]] LepskiSelection select_with_fits(const Dataset& data, const LepskiConfig& cfg,
                                               const PriorSpec& prior);

[[nodiscard]] LepskiTrace select(const Dataset& data, const LepskiConfig& cfg,
                                 const PriorSpec& prior);

}  // namespace tubeband
