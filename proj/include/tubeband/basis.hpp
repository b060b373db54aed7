#pragma once

// B-spline bases of order q on [0, 1] with clamped boundary knots.
//
// Basis functions are indexed 0..J-1 over the extended knot sequence
// t[0..N+2q-1], where t[0..q-1] = 0, t[q..q+N-1] are the interior knots and
// t[N+q..N+2q-1] = 1. Function j is supported on [t[j], t[j+q]].

#include <cstddef>
#include <span>
#include <vector>

namespace tubeband {

enum class KnotScheme { Uniform };

class KnotVector {
public:
    /// Throws InvalidArgument unless order >= 1 and interior knots are
    /// strictly increasing inside (0, 1).
    KnotVector(int order, std::vector<double> interior_knots);

    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] int dimension() const noexcept { return dim_; }
    [[nodiscard]] int interior_count() const noexcept { return dim_ - order_; }
    [[nodiscard]] std::span<const double> interior() const noexcept;
    [[nodiscard]] std::span<const double> extended() const noexcept { return knots_; }
    [[nodiscard]] double knot(int i) const { return knots_[static_cast<std::size_t>(i)]; }

    /// Distinct breakpoints 0 = u_0 < ... < u_{N+1} = 1.
    [[nodiscard]] std::vector<double> breakpoints() const;

    /// max / min breakpoint increment.
    [[nodiscard]] double mesh_ratio() const;

    /// Index k with t[k] <= x < t[k+1], q-1 <= k <= J-1; x = 1 maps to the
    /// last non-degenerate interval (left limit).
    [[nodiscard]] int span(double x) const;

private:
    int order_;
    int dim_;
    std::vector<double> knots_;
};

[[nodiscard]] KnotVector make_knots(int n_basis, int order,
                                    KnotScheme scheme = KnotScheme::Uniform);

/// Sparse basis vector: entries offset..offset+values.size()-1 of a length-J
/// vector; everything else is zero.
struct BasisVector {
    int dimension = 0;
    int offset = 0;
    std::vector<double> values;

    [[nodiscard]] double operator[](int j) const noexcept {
        const int k = j - offset;
        return (k >= 0 && k < static_cast<int>(values.size()))
                   ? values[static_cast<std::size_t>(k)]
                   : 0.0;
    }
    [[nodiscard]] std::vector<double> dense() const;
    [[nodiscard]] double dot(std::span<const double> v) const noexcept;
    [[nodiscard]] double sum() const noexcept;
    [[nodiscard]] double norm_sq() const noexcept;
};

/// b_{J,q}(x). Throws Domain for x outside [0, 1].
[[nodiscard]] BasisVector eval(const KnotVector& kv, double x);

/// b_{J-1,q-1}(x): the order q-1 basis on the same knot sequence with one
/// boundary repetition dropped at each end (dimension J-1).
[[nodiscard]] BasisVector eval_lower(const KnotVector& kv, double x);

/// d b_{J,q}(x)/dx. Zero vector for q = 1.
[[nodiscard]] BasisVector eval_deriv(const KnotVector& kv, double x);

/// Values and first derivatives in one pass; both share the same offset.
struct BasisPair {
    BasisVector value;
    BasisVector deriv;
};
[[nodiscard]] BasisPair eval_with_deriv(const KnotVector& kv, double x);

/// J x (J-1) bidiagonal matrix W with d b_{J,q}/dx = W b_{J-1,q-1}.
/// Column c holds -(q-1)/(t[c+q]-t[c+1]) in row c and the negation in row c+1.
class DerivativeMatrix {
public:
    explicit DerivativeMatrix(const KnotVector& kv);

    [[nodiscard]] int rows() const noexcept { return static_cast<int>(scale_.size()) + 1; }
    [[nodiscard]] int cols() const noexcept { return static_cast<int>(scale_.size()); }
    [[nodiscard]] double operator()(int row, int col) const;

    /// W * lower, where `lower` is a (J-1)-dimensional basis vector.
    [[nodiscard]] BasisVector apply(const BasisVector& lower) const;

private:
    std::vector<double> scale_;  // (q-1)/(t[c+q]-t[c+1]) per column
};

/// Throws InvalidArgument for q = 1.
[[nodiscard]] DerivativeMatrix derivative_matrix(const KnotVector& kv);

}  // namespace tubeband
