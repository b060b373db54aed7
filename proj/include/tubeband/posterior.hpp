#pragma once

#include <span>
#include <vector>

#include "tubeband/basis.hpp"
#include "tubeband/linalg.hpp"

namespace tubeband {

/// Gaussian prior theta | sigma ~ N(eta, sigma^2 Omega) with diagonal Omega.
///
/// Scalars broadcast to every coordinate, which is what a dimension scan
/// needs; the per-coordinate vectors, when non-empty, must match J.
struct PriorSpec {
    double eta = 0.0;
    double omega_inv = 0.1;  // Omega = 10 I
    std::vector<double> eta_coeffs;
    std::vector<double> omega_inv_diag;

    [[nodiscard]] std::vector<double> eta_for(int dimension) const;
    [[nodiscard]] std::vector<double> omega_inv_for(int dimension) const;
    /// Throws InvalidArgument if any precision entry is not strictly positive.
    void validate() const;

    static PriorSpec with_variance(double prior_variance) {
        PriorSpec p;
        p.omega_inv = 1.0 / prior_variance;
        return p;
    }
};

struct Dataset {
    std::vector<double> xs;
    std::vector<double> ys;

    [[nodiscard]] std::size_t size() const noexcept { return xs.size(); }
    /// Throws EmptyDesign / InvalidArgument / Domain.
    void validate() const;
};

/// Noise scale estimator. EmpiricalBayes is the marginal-likelihood plug-in
/// below; ResidualDf divides the same quadratic form by n - J instead of n
/// (the classical least-squares estimate when the prior is flat).
enum class NoiseEstimate { EmpiricalBayes, ResidualDf };

const char* to_string(NoiseEstimate e) noexcept;

/// Conjugate posterior at a fixed basis dimension. Immutable once built.
class PosteriorState {
public:
    PosteriorState(KnotVector knots, BandedSymMatrix gram, BandedCholesky factor,
                   std::vector<double> theta_hat, double sigma_hat, std::vector<double> bty,
                   std::size_t n);

    [[nodiscard]] int dimension() const noexcept { return knots_.dimension(); }
    [[nodiscard]] const KnotVector& knots() const noexcept { return knots_; }
    /// B^T B.
    [[nodiscard]] const BandedSymMatrix& gram() const noexcept { return gram_; }
    /// Factor of B^T B + Omega^{-1}; M is its inverse.
    [[nodiscard]] const BandedCholesky& factor() const noexcept { return factor_; }
    [[nodiscard]] std::span<const double> theta_hat() const noexcept { return theta_; }
    [[nodiscard]] double sigma_hat() const noexcept { return sigma_; }
    [[nodiscard]] std::span<const double> bty() const noexcept { return bty_; }
    [[nodiscard]] std::size_t sample_size() const noexcept { return n_; }

    [[nodiscard]] double mean_at(double x) const;
    /// sigma_hat^2 b(x)^T M b(x).
    [[nodiscard]] double var_at(double x) const;
    /// b(x)^T M b(x).
    [[nodiscard]] double unscaled_var_at(double x) const;

private:
    KnotVector knots_;
    BandedSymMatrix gram_;
    BandedCholesky factor_;
    std::vector<double> theta_;
    double sigma_;
    std::vector<double> bty_;
    std::size_t n_;
};

/// Posterior mean M (B^T Y + Omega^{-1} eta) and the empirical-Bayes noise
/// scale, computed as
///   sigma^2 = [ r^T r - z^T M z ] / n,   r = Y - B eta,  z = B^T r,
/// which equals r^T (B Omega B^T + I)^{-1} r / n without any n x n matrix.
/// ResidualDf throws NumericalDegeneracy when n <= J.
[[nodiscard]] PosteriorState fit(const Dataset& data, const KnotVector& knots,
                                 const PriorSpec& prior,
                                 NoiseEstimate noise = NoiseEstimate::EmpiricalBayes);

/// Uniform clamped knots of dimension J and order q.
[[nodiscard]] PosteriorState fit(const Dataset& data, int dimension, int order,
                                 const PriorSpec& prior,
                                 NoiseEstimate noise = NoiseEstimate::EmpiricalBayes);

[[nodiscard]] inline double mean_at(const PosteriorState& s, double x) { return s.mean_at(x); }
[[nodiscard]] inline double var_at(const PosteriorState& s, double x) { return s.var_at(x); }
[[nodiscard]] inline double sigma_hat(const PosteriorState& s) { return s.sigma_hat(); }

}  // namespace tubeband
