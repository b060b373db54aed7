#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tubeband/lepski.hpp"
#include "tubeband/posterior.hpp"
#include "tubeband/rng.hpp"

namespace tubeband {

enum class BandMethod {
    BayesLepskiTube,  // posterior mean +- w * posterior sd, w from the tube equation
    FrequentistTube,  // same construction with a vanishing prior precision
    FixedRadius,      // sup-norm ball, radius from posterior draws
};

/// "bayes-lepski", "frequentist", "fixed-radius".
const char* to_string(BandMethod method) noexcept;
/// Also accepts the long tags "bayes-lepski-tube" and "frequentist-tube".
std::optional<BandMethod> parse_band_method(std::string_view name);

/// Prior precision standing in for "no prior" in the frequentist comparator.
inline constexpr double kFrequentistPrecision = 1e-10;

struct Band {
    BandMethod method = BandMethod::BayesLepskiTube;
    double gamma = 0.05;
    std::vector<double> grid;
    std::vector<double> center;
    std::vector<double> radius;
    double w = 0.0;           // tube quantile; 0 for the fixed-radius band
    double arc_length = 0.0;  // 0 for the fixed-radius band
    int selected_j = 0;
    double sigma_hat = 0.0;
    NoiseEstimate noise = NoiseEstimate::EmpiricalBayes;
    int draws = 0;  // posterior draws behind the fixed radius
    LepskiTrace trace;

    [[nodiscard]] double lower(std::size_t k) const { return center[k] - radius[k]; }
    [[nodiscard]] double upper(std::size_t k) const { return center[k] + radius[k]; }
    [[nodiscard]] double mean_radius() const;
};

struct BandWithState {
    Band band;
    PosteriorState state;  // fit at the selected dimension
};

/// Variable-width band: Lepski selection, then w from the posterior arc
/// length, radius(x) = w * sqrt(var(x)) on the Lepski grid.
[[nodiscard]] BandWithState credible_band_with_state(const Dataset& data, double gamma,
                                                     const LepskiConfig& cfg,
                                                     const PriorSpec& prior);
[[nodiscard]] Band credible_band(const Dataset& data, double gamma, const LepskiConfig& cfg,
                                 const PriorSpec& prior);

/// credible_band with prior precision kFrequentistPrecision and eta = 0; the
/// noise scale uses `noise` (cfg.noise is overridden).
[[nodiscard]] BandWithState frequentist_band_with_state(
    const Dataset& data, double gamma, const LepskiConfig& cfg,
    NoiseEstimate noise = NoiseEstimate::ResidualDf);
[[nodiscard]] Band frequentist_band(const Dataset& data, double gamma, const LepskiConfig& cfg,
                                    NoiseEstimate noise = NoiseEstimate::ResidualDf);

/// Settings the frequentist comparator runs the Lepski scan with.
[[nodiscard]] LepskiConfig frequentist_config(const LepskiConfig& cfg, NoiseEstimate noise);
[[nodiscard]] PriorSpec frequentist_prior();

/// Constant-radius band around the posterior mean at the Lepski dimension.
/// The radius is the empirical (1 - gamma) quantile of sup_x |b(x)^T (theta - theta_hat)|
/// over `draws` posterior draws theta ~ N(theta_hat, sigma^2 M).
[[nodiscard]] BandWithState fixed_radius_band_with_state(const Dataset& data, double gamma,
                                                         const LepskiConfig& cfg,
                                                         const PriorSpec& prior, int draws,
                                                         CounterRng& rng);
[[nodiscard]] Band fixed_radius_band(const Dataset& data, double gamma, const LepskiConfig& cfg,
                                     const PriorSpec& prior, int draws, CounterRng& rng);

/// Band pieces from an existing selection; used when several methods share
/// one Lepski scan.
[[nodiscard]] Band tube_band_from_selection(const LepskiSelection& selection, double gamma,
                                            BandMethod method);
[[nodiscard]] Band fixed_radius_from_selection(const LepskiSelection& selection, double gamma,
                                               int draws, CounterRng& rng);

/// sup over `grid` of |b(x)^T delta| for `draws` draws delta ~ N(0, sigma^2 M).
[[nodiscard]] std::vector<double> posterior_sup_draws(const PosteriorState& state,
                                                      std::span<const double> grid, int draws,
                                                      CounterRng& rng);

/// Inclusive membership on the band grid: |f_k - center_k| <= radius_k for all k.
[[nodiscard]] bool contains(const Band& band, std::span<const double> f_on_grid);

/// Fraction of fresh posterior draws b(x)^T theta that lie inside the band.
[[nodiscard]] double posterior_credibility(const Band& band, const PosteriorState& state,
                                           int draws, CounterRng& rng);

}  // namespace tubeband
