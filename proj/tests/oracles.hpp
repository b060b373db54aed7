#pragma once

// Independent reference computations for the test suite. Everything here is
// dense, direct and slow on purpose and shares no code with the library
// beyond plain data types.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// q zeros, k / (N + 1) for k = 1..N, q ones; N = J - q.
inline std::vector<double> clamped_knots(int J, int q) {
    std::vector<double> t;
    const int N = J - q;
    for (int i = 0; i < q; ++i) t.push_back(0.0);
    for (int k = 1; k <= N; ++k) t.push_back(static_cast<double>(k) / (N + 1));
    for (int i = 0; i < q; ++i) t.push_back(1.0);
    return t;
}

/// Textbook Cox-de Boor recursion, B_{i,k} with k the order. Right-continuous
/// except at x = 1, where the last non-degenerate interval is closed.
inline double cox_de_boor(const std::vector<double>& t, int i, int k, double x) {
    if (k == 1) {
        const double a = t[static_cast<std::size_t>(i)];
        const double b = t[static_cast<std::size_t>(i + 1)];
        if (x == t.back()) return (a < b && b == t.back()) ? 1.0 : 0.0;
        return (a <= x && x < b) ? 1.0 : 0.0;
    }
    double out = 0.0;
    const double d1 = t[static_cast<std::size_t>(i + k - 1)] - t[static_cast<std::size_t>(i)];
    const double d2 = t[static_cast<std::size_t>(i + k)] - t[static_cast<std::size_t>(i + 1)];
    if (d1 > 0) out += (x - t[static_cast<std::size_t>(i)]) / d1 * cox_de_boor(t, i, k - 1, x);
    if (d2 > 0) out += (t[static_cast<std::size_t>(i + k)] - x) / d2 * cox_de_boor(t, i + 1, k - 1, x);
    return out;
}

inline Vec basis(int J, int q, double x) {
    const auto t = clamped_knots(J, q);
    Vec b(J);
    for (int j = 0; j < J; ++j) b(j) = cox_de_boor(t, j, q, x);
    return b;
}

/// n x J design matrix built entry by entry.
inline Mat design(int J, int q, const std::vector<double>& xs) {
    Mat B(static_cast<Eigen::Index>(xs.size()), J);
    for (std::size_t i = 0; i < xs.size(); ++i) B.row(static_cast<Eigen::Index>(i)) = basis(J, q, xs[i]).transpose();
    return B;
}

inline Vec to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct DensePosterior {
    Mat M;       // (B^T B + Omega^{-1})^{-1}
    Vec theta;   // M (B^T Y + Omega^{-1} eta)
    double sigma_sq;
};

/// Posterior quantities straight from the formulas, with the noise scale from
/// the n x n form (Y - B eta)^T (B Omega B^T + I)^{-1} (Y - B eta) / n.
inline DensePosterior posterior(int J, int q, const std::vector<double>& xs,
                                const std::vector<double>& ys, double eta, double omega_inv) {
    const Mat B = design(J, q, xs);
    const Vec Y = to_vec(ys);
    const Vec e = Vec::Constant(J, eta);
    const Mat Oinv = Mat::Identity(J, J) * omega_inv;
    DensePosterior p;
    p.M = (B.transpose() * B + Oinv).inverse();
    p.theta = p.M * (B.transpose() * Y + Oinv * e);
    const Eigen::Index n = B.rows();
    const Mat S = B * (Mat::Identity(J, J) / omega_inv) * B.transpose() + Mat::Identity(n, n);
    const Vec r = Y - B * e;
    p.sigma_sq = r.dot(S.inverse() * r) / static_cast<double>(n);
    return p;
}

/// Symmetric positive semidefinite square root.
inline Mat sqrtm(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

/// Polyline length of x -> S^{1/2} b(x) / ||S^{1/2} b(x)|| on a uniform grid.
inline double chord_arc_length(const Mat& S, int J, int q, int points) {
    const Mat R = sqrtm(S);
    double len = 0.0;
    Vec prev;
    for (int k = 0; k < points; ++k) {
        const double x = static_cast<double>(k) / (points - 1);
        Vec u = R * basis(J, q, x);
        u /= u.norm();
        if (k > 0) len += (u - prev).norm();
        prev = u;
    }
    return len;
}

inline double upper_tail(double w) { return 0.5 * std::erfc(w / std::numbers::sqrt2); }

/// Smallest grid point w in [0, hi] with arc/pi e^{-w^2/2} + 2Q(w) <= gamma.
inline double grid_scan_root(double arc, double gamma, double hi, int steps) {
    for (int k = 0; k <= steps; ++k) {
        const double w = hi * k / steps;
        const double f = arc / std::numbers::pi * std::exp(-0.5 * w * w) + 2.0 * upper_tail(w);
        if (f <= gamma) return w;
    }
    return hi;
}

/// Random SPD banded matrix as dense.
inline Mat random_spd_band(int dim, int bw, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat A = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j <= std::min(dim - 1, i + bw); ++j) {
            A(i, j) = A(j, i) = u(gen);
        }
    }
    for (int i = 0; i < dim; ++i) {
        A(i, i) = 2.0 * bw + 1.0 + std::abs(u(gen));
    }
    return A;
}

}  // namespace oracle
