#include "tubeband/tube.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tubeband/error.hpp"

namespace tubeband {

double normal_cdf(double w) noexcept { return 0.5 * std::erfc(-w / std::numbers::sqrt2); }

double normal_upper_tail(double w) noexcept { return 0.5 * std::erfc(w / std::numbers::sqrt2); }

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least one node");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 1; i <= half; ++i) {
        double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double pp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z_prev = z;
            z = z_prev - p1 / pp;
            if (std::abs(z - z_prev) <= 1e-15) break;
        }
        const auto lo = static_cast<std::size_t>(i - 1);
        const auto hi = static_cast<std::size_t>(n - i);
        rule.nodes[lo] = -z;
        rule.nodes[hi] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    return rule;
}

namespace {

// Composite rule over the knot intervals; `speed` maps x to ||beta'(x)||.
template <typename Speed>
double integrate_over_knots(const KnotVector& knots, const QuadratureRule& rule, Speed&& speed) {
    const auto u = knots.breakpoints();
    double total = 0.0;
    for (std::size_t k = 1; k < u.size(); ++k) {
        const double half = 0.5 * (u[k] - u[k - 1]);
        const double mid = 0.5 * (u[k] + u[k - 1]);
        double piece = 0.0;
        for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
            piece += rule.weights[m] * speed(mid + half * rule.nodes[m]);
        }
        total += half * piece;
    }
    return total;
}

template <typename Speed>
ArcLength composite_arc(const KnotVector& knots, int nodes_per_interval, Speed&& speed) {
    if (nodes_per_interval < 4) {
        throw Error(ErrorKind::InvalidArgument, "arc length needs >= 4 nodes per interval");
    }
    ArcLength arc;
    arc.dimension = knots.dimension();
    arc.intervals = knots.interior_count() + 1;
    arc.nodes_per_interval = nodes_per_interval;
    arc.value = integrate_over_knots(knots, gauss_legendre(nodes_per_interval), speed);
    const double coarse =
        integrate_over_knots(knots, gauss_legendre(nodes_per_interval / 2), speed);
    arc.error_estimate = std::abs(arc.value - coarse);
    if (!std::isfinite(arc.value)) {
        throw Error(ErrorKind::NumericalDegeneracy, "arc length is not finite");
    }
    return arc;
}

void check_speed_inputs(double g2, double x) {
    if (!(g2 > 0.0) || !std::isfinite(g2)) {
        throw Error(ErrorKind::NumericalDegeneracy,
                    "degenerate variance on the tube curve at x = " + std::to_string(x));
    }
}

}  // namespace

ArcLength arc_length(const KnotVector& knots, const BandedCholesky& precision,
                     int nodes_per_interval) {
    if (precision.dimension() != knots.dimension()) {
        throw Error(ErrorKind::InvalidArgument, "arc_length: dimension mismatch");
    }
    return composite_arc(knots, nodes_per_interval, [&](double x) {
        const BasisPair bp = eval_with_deriv(knots, x);
        const auto p = precision.half_solve(bp.value);
        auto r = precision.half_solve(bp.deriv);
        const double g2 = dot(p, p);
        check_speed_inputs(g2, x);
        const double c = dot(p, r) / g2;
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c * p[k];
        return std::sqrt(dot(r, r) / g2);
    });
}

ArcLength arc_length(const PosteriorState& state, int nodes_per_interval) {
    return arc_length(state.knots(), state.factor(), nodes_per_interval);
}

ArcLength arc_length_frequentist(const PosteriorState& state, int nodes_per_interval) {
    const KnotVector& knots = state.knots();
    const BandedCholesky& factor = state.factor();
    const BandedSymMatrix& g = state.gram();
    return composite_arc(knots, nodes_per_interval, [&](double x) {
        const BasisPair bp = eval_with_deriv(knots, x);
        const auto u = factor.solve(bp.value.dense());
        auto v = factor.solve(bp.deriv.dense());
        const auto gu = g.multiply(u);
        const double g2 = dot(u, gu);
        check_speed_inputs(g2, x);
        const double c = dot(v, gu) / g2;
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * u[k];
        const double h = g.bilinear(v, v);
        return std::sqrt(std::max(0.0, h) / g2);
    });
}

double tube_equation(double arc, double w) noexcept {
    return arc / std::numbers::pi * std::exp(-0.5 * w * w) + 2.0 * normal_upper_tail(w);
}

TubeQuantile solve_quantile(double arc, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "gamma must lie in (0, 1)");
    }
    if (!(arc >= 0.0) || !std::isfinite(arc)) {
        throw Error(ErrorKind::InvalidArgument, "arc length must be finite and >= 0");
    }
    TubeQuantile out{gamma, arc, 0.0, 0.0};
    if (tube_equation(arc, 0.0) <= gamma) {
        out.residual = tube_equation(arc, 0.0) - gamma;
        return out;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (tube_equation(arc, hi) > gamma) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (tube_equation(arc, mid) > gamma) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.w = 0.5 * (lo + hi);
    out.residual = tube_equation(arc, out.w) - gamma;
    return out;
}

double tube_tail_bound(double arc, double w) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tail bound needs w >= 0");
    return arc / (2.0 * std::numbers::pi) * std::exp(-0.5 * w * w) + normal_upper_tail(w);
}

}  // namespace tubeband
