#include "tubeband/bands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tubeband/error.hpp"
#include "tubeband/tube.hpp"

namespace tubeband {

const char* to_string(BandMethod method) noexcept {
    switch (method) {
        case BandMethod::BayesLepskiTube: return "bayes-lepski";
        case BandMethod::FrequentistTube: return "frequentist";
        case BandMethod::FixedRadius: return "fixed-radius";
    }
    return "unknown";
}

std::optional<BandMethod> parse_band_method(std::string_view name) {
    if (name == "bayes-lepski" || name == "bayes-lepski-tube") return BandMethod::BayesLepskiTube;
    if (name == "frequentist" || name == "frequentist-tube") return BandMethod::FrequentistTube;
    if (name == "fixed-radius") return BandMethod::FixedRadius;
    return std::nullopt;
}

double Band::mean_radius() const {
    if (radius.empty()) return 0.0;
    return std::accumulate(radius.begin(), radius.end(), 0.0) / static_cast<double>(radius.size());
}

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "gamma must lie in (0, 1)");
    }
}

Band skeleton(const LepskiSelection& selection, double gamma, BandMethod method) {
    const PosteriorState& s = selection.selected_fit();
    Band band;
    band.method = method;
    band.gamma = gamma;
    band.grid = uniform_grid(selection.trace.grid_size);
    band.center = mean_on_grid(s, band.grid);
    band.selected_j = selection.trace.selected;
    band.sigma_hat = s.sigma_hat();
    band.noise = selection.trace.noise;
    band.trace = selection.trace;
    return band;
}

std::vector<BasisVector> basis_on_grid(const KnotVector& knots, std::span<const double> grid) {
    std::vector<BasisVector> out;
    out.reserve(grid.size());
    for (const double x : grid) out.push_back(eval(knots, x));
    return out;
}

// theta - theta_hat = sigma L^{-T} z has covariance sigma^2 M.
void draw_deviation(const PosteriorState& state, std::normal_distribution<double>& normal,
                    CounterRng& rng, std::vector<double>& delta) {
    delta.resize(static_cast<std::size_t>(state.dimension()));
    for (auto& z : delta) z = normal(rng);
    state.factor().backward(delta);
    for (auto& d : delta) d *= state.sigma_hat();
}

}  // namespace

Band tube_band_from_selection(const LepskiSelection& selection, double gamma, BandMethod method) {
    check_gamma(gamma);
    if (method == BandMethod::FixedRadius) {
        throw Error(ErrorKind::InvalidArgument, "fixed-radius band needs posterior draws");
    }
    const PosteriorState& s = selection.selected_fit();
    Band band = skeleton(selection, gamma, method);
    band.arc_length = arc_length(s).value;
    band.w = solve_quantile(band.arc_length, gamma).w;
    band.radius.resize(band.grid.size());
    for (std::size_t k = 0; k < band.grid.size(); ++k) {
        band.radius[k] = band.w * std::sqrt(s.var_at(band.grid[k]));
    }
    return band;
}

std::vector<double> posterior_sup_draws(const PosteriorState& state, std::span<const double> grid,
                                        int draws, CounterRng& rng) {
    const auto basis = basis_on_grid(state.knots(), grid);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> sups(static_cast<std::size_t>(std::max(draws, 0)));
    std::vector<double> delta;
    for (auto& sup : sups) {
        draw_deviation(state, normal, rng, delta);
        double m = 0.0;
        for (const auto& b : basis) m = std::max(m, std::abs(b.dot(delta)));
        sup = m;
    }
    return sups;
}

Band fixed_radius_from_selection(const LepskiSelection& selection, double gamma, int draws,
                                 CounterRng& rng) {
    check_gamma(gamma);
    if (draws < 100) throw Error(ErrorKind::InvalidArgument, "fixed-radius band needs >= 100 draws");
    const PosteriorState& s = selection.selected_fit();
    Band band = skeleton(selection, gamma, BandMethod::FixedRadius);
    band.draws = draws;
    auto sups = posterior_sup_draws(s, band.grid, draws, rng);
    // Smallest r with at least (1 - gamma) * draws of the sups <= r.
    const auto need = static_cast<std::size_t>(std::ceil((1.0 - gamma) * draws - 1e-9));
    const std::size_t idx = std::clamp<std::size_t>(need, 1, sups.size()) - 1;
    std::nth_element(sups.begin(), sups.begin() + static_cast<std::ptrdiff_t>(idx), sups.end());
    band.radius.assign(band.grid.size(), sups[idx]);
    return band;
}

BandWithState credible_band_with_state(const Dataset& data, double gamma, const LepskiConfig& cfg,
                                       const PriorSpec& prior) {
    check_gamma(gamma);
    auto selection = select_with_fits(data, cfg, prior);
    Band band = tube_band_from_selection(selection, gamma, BandMethod::BayesLepskiTube);
    return {std::move(band), selection.selected_fit()};
}

Band credible_band(const Dataset& data, double gamma, const LepskiConfig& cfg,
                   const PriorSpec& prior) {
    return credible_band_with_state(data, gamma, cfg, prior).band;
}

LepskiConfig frequentist_config(const LepskiConfig& cfg, NoiseEstimate noise) {
    LepskiConfig out = cfg;
    out.noise = noise;
    return out;
}

PriorSpec frequentist_prior() {
    PriorSpec flat;
    flat.eta = 0.0;
    flat.omega_inv = kFrequentistPrecision;
    return flat;
}

BandWithState frequentist_band_with_state(const Dataset& data, double gamma,
                                          const LepskiConfig& cfg, NoiseEstimate noise) {
    check_gamma(gamma);
    auto selection = select_with_fits(data, frequentist_config(cfg, noise), frequentist_prior());
    Band band = tube_band_from_selection(selection, gamma, BandMethod::FrequentistTube);
    return {std::move(band), selection.selected_fit()};
}

Band frequentist_band(const Dataset& data, double gamma, const LepskiConfig& cfg,
                      NoiseEstimate noise) {
    return frequentist_band_with_state(data, gamma, cfg, noise).band;
}

BandWithState fixed_radius_band_with_state(const Dataset& data, double gamma,
                                           const LepskiConfig& cfg, const PriorSpec& prior,
                                           int draws, CounterRng& rng) {
    check_gamma(gamma);
    auto selection = select_with_fits(data, cfg, prior);
    Band band = fixed_radius_from_selection(selection, gamma, draws, rng);
    return {std::move(band), selection.selected_fit()};
}

Band fixed_radius_band(const Dataset& data, double gamma, const LepskiConfig& cfg,
                       const PriorSpec& prior, int draws, CounterRng& rng) {
    return fixed_radius_band_with_state(data, gamma, cfg, prior, draws, rng).band;
}

bool contains(const Band& band, std::span<const double> f_on_grid) {
    if (f_on_grid.size() != band.grid.size()) {
        throw Error(ErrorKind::InvalidArgument, "contains: function length does not match grid");
    }
    for (std::size_t k = 0; k < f_on_grid.size(); ++k) {
        if (std::abs(f_on_grid[k] - band.center[k]) > band.radius[k]) return false;
    }
    return true;
}

double posterior_credibility(const Band& band, const PosteriorState& state, int draws,
                             CounterRng& rng) {
    if (draws < 1) throw Error(ErrorKind::InvalidArgument, "draws must be >= 1");
    const auto basis = basis_on_grid(state.knots(), band.grid);
    const auto theta_hat = state.theta_hat();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> delta;
    std::vector<double> f(band.grid.size());
    int inside = 0;
    for (int d = 0; d < draws; ++d) {
        draw_deviation(state, normal, rng, delta);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            f[k] = basis[k].dot(theta_hat) + basis[k].dot(delta);
        }
        inside += contains(band, f) ? 1 : 0;
    }
    return static_cast<double>(inside) / draws;
}

}  // namespace tubeband
