#pragma once

// Volume-of-tube geometry for standardized Gaussian series processes.
//
// For a covariance Sigma and basis b(x), the curve
//     beta(x) = Sigma^{1/2} b(x) / ||Sigma^{1/2} b(x)||
// lives on the unit sphere. Its length |beta| controls the tail of the
// supremum of the standardized process through
//     P(sup_x Z(x) > w) <= |beta| / (2 pi) exp(-w^2/2) + 1 - Phi(w),
// and the two-sided band quantile w solves
//     gamma = |beta| / pi exp(-w^2/2) + 2 (1 - Phi(w)).

#include <vector>

#include "tubeband/basis.hpp"
#include "tubeband/linalg.hpp"
#include "tubeband/posterior.hpp"

namespace tubeband {

[[nodiscard]] double normal_cdf(double w) noexcept;
/// 1 - Phi(w), without cancellation for large w.
[[nodiscard]] double normal_upper_tail(double w) noexcept;

struct QuadratureRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
[[nodiscard]] QuadratureRule gauss_legendre(int n);

struct ArcLength {
    double value = 0.0;
    int dimension = 0;
    int intervals = 0;
    int nodes_per_interval = 0;
    /// |I(n) - I(n/2)| for the composite rule with n and n/2 nodes per interval.
    double error_estimate = 0.0;
};

inline constexpr int kDefaultArcNodes = 16;

/// Length of the curve for Sigma = (L L^T)^{-1}, where `precision` holds L.
/// Composite Gauss-Legendre over the knot intervals; the speed at x is
///     ||r - (p.r / p.p) p|| / ||p||,   p = L^{-1} b(x),  r = L^{-1} b'(x),
/// which equals sqrt(g2 h - g1^2) / g2 with g2 = b'Sb, g1 = b'S db, h = db'S db.
[[nodiscard]] ArcLength arc_length(const KnotVector& knots, const BandedCholesky& precision,
                                   int nodes_per_interval = kDefaultArcNodes);

/// Posterior curve: Sigma proportional to M = (B^T B + Omega^{-1})^{-1}.
[[nodiscard]] ArcLength arc_length(const PosteriorState& state,
                                   int nodes_per_interval = kDefaultArcNodes);

/// Sampling-distribution curve: Sigma proportional to M0 = M (B^T B) M.
[[nodiscard]] ArcLength arc_length_frequentist(const PosteriorState& state,
                                               int nodes_per_interval = kDefaultArcNodes);

struct TubeQuantile {
    double gamma = 0.0;
    double arc_length = 0.0;
    double w = 0.0;
    /// tube_equation(arc_length, w) - gamma.
    double residual = 0.0;
};

/// |beta| / pi exp(-w^2/2) + 2 (1 - Phi(w)).
[[nodiscard]] double tube_equation(double arc, double w) noexcept;

/// Root of tube_equation(arc, w) = gamma on [0, inf) by bisection to 1e-12.
/// gamma must lie in (0, 1]; gamma = 1 with arc = 0 gives w = 0.
[[nodiscard]] TubeQuantile solve_quantile(double arc, double gamma);

/// One-sided bound |beta| / (2 pi) exp(-w^2/2) + 1 - Phi(w), w >= 0.
[[nodiscard]] double tube_tail_bound(double arc, double w);

}  // namespace tubeband
