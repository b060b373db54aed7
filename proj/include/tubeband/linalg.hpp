#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tubeband/basis.hpp"

namespace tubeband {

/// Symmetric matrix with A(i, j) = 0 for |i - j| > bandwidth. Only the upper
/// band is stored: row i holds A(i, i), A(i, i+1), ..., A(i, i+w).
class BandedSymMatrix {
public:
    BandedSymMatrix(int dimension, int bandwidth);

    static BandedSymMatrix identity(int dimension);
    static BandedSymMatrix diagonal(std::span<const double> diag);

    [[nodiscard]] int dimension() const noexcept { return dim_; }
    [[nodiscard]] int bandwidth() const noexcept { return width_; }

    /// Entry (i, j) for any i, j; zero outside the band.
    [[nodiscard]] double operator()(int i, int j) const noexcept;

    /// Mutable access for |i - j| <= bandwidth (either triangle).
    double& at(int i, int j);

    /// y = A x.
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// x^T A y.
    [[nodiscard]] double bilinear(std::span<const double> x, std::span<const double> y) const;

    [[nodiscard]] std::vector<std::vector<double>> to_dense() const;

private:
    int dim_;
    int width_;
    std::vector<double> band_;  // dim_ * (width_ + 1), row-major
};

/// Entrywise sum; bandwidth of the result is the larger of the two.
[[nodiscard]] BandedSymMatrix add_banded(const BandedSymMatrix& a, const BandedSymMatrix& b);

/// a + alpha * I.
[[nodiscard]] BandedSymMatrix add_scaled_identity(const BandedSymMatrix& a, double alpha);

/// a + diag(d).
[[nodiscard]] BandedSymMatrix add_diagonal(const BandedSymMatrix& a, std::span<const double> d);

/// B^T B for B(i, j) = B_j(xs[i]); bandwidth q - 1.
[[nodiscard]] BandedSymMatrix gram(const KnotVector& kv, std::span<const double> xs);

/// B^T y.
[[nodiscard]] std::vector<double> design_transpose_times(const KnotVector& kv,
                                                         std::span<const double> xs,
                                                         std::span<const double> ys);

/// L L^T factorisation of a banded SPD matrix; L is lower triangular with the
/// same bandwidth. Throws NotPositiveDefinite on a non-positive pivot.
class BandedCholesky {
public:
    explicit BandedCholesky(const BandedSymMatrix& m);

    [[nodiscard]] int dimension() const noexcept { return dim_; }
    [[nodiscard]] int bandwidth() const noexcept { return width_; }

    /// L(i, j) for j <= i.
    [[nodiscard]] double lower(int i, int j) const noexcept;

    /// x with (L L^T) x = rhs.
    [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;

    /// y with L y = rhs (in place). Entries before `first_nonzero` are
    /// assumed to be zero in rhs and stay zero.
    void forward(std::span<double> y, int first_nonzero = 0) const;

    /// x with L^T x = rhs (in place).
    void backward(std::span<double> x) const;

    /// v^T (L L^T)^{-1} v through a single forward substitution.
    [[nodiscard]] double quad_form(std::span<const double> v) const;
    [[nodiscard]] double quad_form(const BasisVector& v) const;

    /// L^{-1} v as a dense vector, exploiting the leading zeros of v.
    [[nodiscard]] std::vector<double> half_solve(const BasisVector& v) const;

    /// sum_i log L(i, i)^2 = log det(L L^T).
    [[nodiscard]] double log_det() const noexcept;

private:
    int dim_;
    int width_;
    std::vector<double> band_;  // row i: L(i, i-w) .. L(i, i), dim_ * (width_ + 1)
};

[[nodiscard]] BandedCholesky cholesky(const BandedSymMatrix& m);

[[nodiscard]] inline std::vector<double> solve(const BandedCholesky& f,
                                               std::span<const double> rhs) {
    return f.solve(rhs);
}

[[nodiscard]] inline double quad_form(const BandedCholesky& f, std::span<const double> v) {
    return f.quad_form(v);
}

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

}  // namespace tubeband
