#include "tubeband/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tubeband/error.hpp"

namespace tubeband {

namespace {

std::vector<double> broadcast(double scalar, const std::vector<double>& coeffs, int dimension,
                              const char* name) {
    if (coeffs.empty()) return std::vector<double>(static_cast<std::size_t>(dimension), scalar);
    if (coeffs.size() != static_cast<std::size_t>(dimension)) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string("prior ") + name + " has " + std::to_string(coeffs.size()) +
                        " entries, basis dimension is " + std::to_string(dimension));
    }
    return coeffs;
}

}  // namespace

std::vector<double> PriorSpec::eta_for(int dimension) const {
    return broadcast(eta, eta_coeffs, dimension, "mean");
}

std::vector<double> PriorSpec::omega_inv_for(int dimension) const {
    return broadcast(omega_inv, omega_inv_diag, dimension, "precision");
}

void PriorSpec::validate() const {
    auto bad = [](double v) { return !(v > 0.0) || !std::isfinite(v); };
    if (bad(omega_inv) || std::any_of(omega_inv_diag.begin(), omega_inv_diag.end(), bad)) {
        throw Error(ErrorKind::InvalidArgument, "prior precision entries must be positive");
    }
}

void Dataset::validate() const {
    if (xs.empty()) throw Error(ErrorKind::EmptyDesign, "dataset is empty");
    if (xs.size() != ys.size()) {
        throw Error(ErrorKind::InvalidArgument, "dataset xs/ys length mismatch");
    }
    for (const double x : xs) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw Error(ErrorKind::Domain, "design point " + std::to_string(x) + " outside [0, 1]");
        }
    }
    for (const double y : ys) {
        if (!std::isfinite(y)) throw Error(ErrorKind::InvalidArgument, "non-finite response");
    }
}

PosteriorState::PosteriorState(KnotVector knots, BandedSymMatrix gram, BandedCholesky factor,
                               std::vector<double> theta_hat, double sigma_hat,
                               std::vector<double> bty, std::size_t n)
    : knots_(std::move(knots)),
      gram_(std::move(gram)),
      factor_(std::move(factor)),
      theta_(std::move(theta_hat)),
      sigma_(sigma_hat),
      bty_(std::move(bty)),
      n_(n) {}

double PosteriorState::mean_at(double x) const { return eval(knots_, x).dot(theta_); }

double PosteriorState::unscaled_var_at(double x) const {
    return factor_.quad_form(eval(knots_, x));
}

double PosteriorState::var_at(double x) const { return sigma_ * sigma_ * unscaled_var_at(x); }

const char* to_string(NoiseEstimate e) noexcept {
    switch (e) {
        case NoiseEstimate::EmpiricalBayes: return "empirical-bayes";
        case NoiseEstimate::ResidualDf: return "residual-df";
    }
    return "unknown";
}

PosteriorState fit(const Dataset& data, const KnotVector& knots, const PriorSpec& prior,
                   NoiseEstimate noise) {
    data.validate();
    prior.validate();
    const int dim = knots.dimension();
    const auto eta = prior.eta_for(dim);
    const auto omega_inv = prior.omega_inv_for(dim);

    BandedSymMatrix g = gram(knots, data.xs);
    BandedCholesky factor(add_diagonal(g, omega_inv));

    // r = Y - B eta accumulated alongside z = B^T r and B^T Y.
    const auto n = data.size();
    std::vector<double> bty(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> z(static_cast<std::size_t>(dim), 0.0);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const BasisVector b = eval(knots, data.xs[i]);
        const double r = data.ys[i] - b.dot(eta);
        rss += r * r;
        for (std::size_t k = 0; k < b.values.size(); ++k) {
            const auto j = static_cast<std::size_t>(b.offset) + k;
            bty[j] += b.values[k] * data.ys[i];
            z[j] += b.values[k] * r;
        }
    }

    std::vector<double> rhs(bty);
    for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] += omega_inv[j] * eta[j];
    auto theta = factor.solve(rhs);

    const double shrink = factor.quad_form(z);
    double denom = static_cast<double>(n);
    if (noise == NoiseEstimate::ResidualDf) {
        if (n <= static_cast<std::size_t>(dim)) {
            throw Error(ErrorKind::NumericalDegeneracy,
                        "residual degrees of freedom n - J must be positive");
        }
        denom -= dim;
    }
    const double sigma_sq = std::max(0.0, (rss - shrink) / denom);

    return PosteriorState(knots, std::move(g), std::move(factor), std::move(theta),
                          std::sqrt(sigma_sq), std::move(bty), n);
}

PosteriorState fit(const Dataset& data, int dimension, int order, const PriorSpec& prior,
                   NoiseEstimate noise) {
    return fit(data, make_knots(dimension, order), prior, noise);
}

}  // namespace tubeband
