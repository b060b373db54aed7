#include "tubeband/lepski.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <string>

#include "tubeband/error.hpp"
#include "tubeband/log.hpp"

namespace tubeband {

const char* to_string(ThresholdMode mode) noexcept {
    switch (mode) {
        case ThresholdMode::Asymptotic: return "asymptotic";
        case ThresholdMode::Practical: return "practical";
    }
    return "unknown";
}

const char* to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::Triggered: return "triggered";
        case StopReason::ExhaustedAtJmin: return "exhausted-at-jmin";
        case StopReason::DefaultedJmax: return "defaulted-jmax";
    }
    return "unknown";
}

const char* to_string(EndpointLog base) noexcept {
    switch (base) {
        case EndpointLog::Natural: return "natural";
        case EndpointLog::Base10: return "log10";
    }
    return "unknown";
}

void LepskiConfig::validate() const {
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "order must be >= 1");
    if (grid_size < 64) throw Error(ErrorKind::InvalidArgument, "grid_size must be >= 64");
    if (!(tau >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tau must be >= 0");
    if (j_min < 0 || j_max < 0) {
        throw Error(ErrorKind::InvalidArgument, "candidate endpoints must be non-negative");
    }
}

LepskiConfig::Range LepskiConfig::resolve(std::size_t n) const {
    validate();
    if (n < 2) throw Error(ErrorKind::EmptyDesign, "Lepski scan needs at least two observations");
    const double nn = static_cast<double>(n);
    const double log_n = endpoint_log == EndpointLog::Base10 ? std::log10(nn) : std::log(nn);
    int lo = j_min;
    if (lo == 0) {
        lo = static_cast<int>(std::ceil(std::pow(nn / log_n, 1.0 / (2.0 * order + 1.0))));
        lo = std::max({lo, order, 2});
    }
    int hi = j_max;
    if (hi == 0) {
        hi = static_cast<int>(std::floor(nn / (log_n * log_n)));
        hi = std::max(hi, lo);
    }
    if (lo < order || lo < 2 || hi < lo) {
        throw Error(ErrorKind::InvalidArgument,
                    "invalid candidate range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "] for order " + std::to_string(order));
    }
    return {lo, hi};
}

std::vector<double> uniform_grid(int size) {
    if (size < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least two points");
    std::vector<double> g(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) g[static_cast<std::size_t>(k)] = static_cast<double>(k) / (size - 1);
    g.back() = 1.0;
    return g;
}

std::vector<double> mean_on_grid(const PosteriorState& s, std::span<const double> grid) {
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = s.mean_at(grid[k]);
    return out;
}

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double min_unscaled_var(const PosteriorState& s, std::span<const double> grid) {
    double m = std::numeric_limits<double>::infinity();
    for (const double x : grid) m = std::min(m, s.unscaled_var_at(x));
    return m;
}

void require_log_positive(int dimension) {
    if (dimension < 2) {
        throw Error(ErrorKind::InvalidArgument, "threshold requires dimension >= 2");
    }
}

}  // namespace

double sup_diff(const PosteriorState& a, const PosteriorState& b, int grid_size) {
    const auto grid = uniform_grid(grid_size);
    return max_abs_diff(mean_on_grid(a, grid), mean_on_grid(b, grid));
}

double threshold_asymptotic(int dimension, double sigma_hat, std::size_t n, double tau) {
    require_log_positive(dimension);
    const double j = dimension;
    return tau * sigma_hat * std::sqrt(j * std::log(j) / static_cast<double>(n));
}

double threshold_practical(const PosteriorState& s, int grid_size) {
    require_log_positive(s.dimension());
    const auto grid = uniform_grid(grid_size);
    return s.sigma_hat() * std::sqrt(min_unscaled_var(s, grid)) *
           std::sqrt(std::log(static_cast<double>(s.dimension())));
}

const CandidateRecord& LepskiTrace::candidate(int dimension) const {
    if (dimension < j_min || dimension > j_max) {
        throw Error(ErrorKind::InvalidArgument, "dimension outside candidate range");
    }
    return candidates[static_cast<std::size_t>(dimension - j_min)];
}

const PosteriorState& LepskiSelection::fit_for(int dimension) const {
    if (dimension < trace.j_min || dimension > trace.j_max) {
        throw Error(ErrorKind::InvalidArgument, "dimension outside candidate range");
    }
    return fits[static_cast<std::size_t>(dimension - trace.j_min)];
}

LepskiSelection select_with_fits(const Dataset& data, const LepskiConfig& cfg,
                                 const PriorSpec& prior) {
    data.validate();
    const auto range = cfg.resolve(data.size());
    const int count = range.j_max - range.j_min + 1;
    const auto grid = uniform_grid(cfg.grid_size);

    // Fits, cached grid means and thresholds: one per candidate, independent.
    std::vector<std::optional<PosteriorState>> fits(static_cast<std::size_t>(count));
    std::vector<std::vector<double>> means(static_cast<std::size_t>(count));
    std::vector<double> thresholds(static_cast<std::size_t>(count), 0.0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));

#pragma omp parallel for schedule(dynamic) if (cfg.parallel_fits)
    for (int c = 0; c < count; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        try {
            const int dim = range.j_min + c;
            fits[uc].emplace(fit(data, dim, cfg.order, prior, cfg.noise));
            const PosteriorState& s = *fits[uc];
            means[uc] = mean_on_grid(s, grid);
            thresholds[uc] =
                cfg.mode == ThresholdMode::Asymptotic
                    ? threshold_asymptotic(dim, s.sigma_hat(), data.size(), cfg.tau)
                    : cfg.tau * s.sigma_hat() * std::sqrt(min_unscaled_var(s, grid)) *
                          std::sqrt(std::log(static_cast<double>(dim)));
        } catch (...) {
            errors[uc] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    LepskiSelection out;
    LepskiTrace& trace = out.trace;
    trace.j_min = range.j_min;
    trace.j_max = range.j_max;
    trace.mode = cfg.mode;
    trace.tau = cfg.tau;
    trace.grid_size = cfg.grid_size;
    trace.endpoint_log = cfg.endpoint_log;
    trace.noise = cfg.noise;
    out.fits.reserve(static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        trace.candidates.push_back({range.j_min + c, fits[uc]->sigma_hat(), thresholds[uc]});
        out.fits.push_back(std::move(*fits[uc]));
    }

    trace.selected = range.j_min;
    trace.reason = StopReason::ExhaustedAtJmin;
    for (int j = range.j_max - 1; j >= range.j_min; --j) {
        const auto uj = static_cast<std::size_t>(j - range.j_min);
        int rule = 0;
        for (int i = j + 1; i <= range.j_max; ++i) {
            const auto ui = static_cast<std::size_t>(i - range.j_min);
            const double d = max_abs_diff(means[uj], means[ui]);
            const bool violated = d > thresholds[ui];
            rule += violated ? 1 : 0;
            trace.comparisons.push_back({j, i, d, thresholds[ui], violated});
        }
        if (rule > 0) {
            trace.selected = j + 1;
            trace.reason = (j + 1 == range.j_max) ? StopReason::DefaultedJmax : StopReason::Triggered;
            break;
        }
    }
    logger()->debug("lepski: n={} candidates=[{}, {}] selected={} ({})", data.size(),
                    range.j_min, range.j_max, trace.selected, to_string(trace.reason));
    return out;
}

LepskiTrace select(const Dataset& data, const LepskiConfig& cfg, const PriorSpec& prior) {
    return select_with_fits(data, cfg, prior).trace;
}

}  // namespace tubeband
