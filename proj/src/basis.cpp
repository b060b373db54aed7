#include "tubeband/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tubeband/error.hpp"

namespace tubeband {

namespace {

void check_unit_interval(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::Domain,
                    "evaluation point " + std::to_string(x) + " outside [0, 1]");
    }
}

// de Boor's triangular scheme. On return `value` holds the q order-q values
// for t-indices k-q+1..k and `lower` the q-1 order-(q-1) values for t-indices
// k-q+2..k.
void basis_triangle(const KnotVector& kv, int k, double x, std::vector<double>& value,
                    std::vector<double>& lower) {
    const int q = kv.order();
    const auto t = kv.extended();
    value.assign(static_cast<std::size_t>(q), 0.0);
    std::vector<double> left(static_cast<std::size_t>(q), 0.0);
    std::vector<double> right(static_cast<std::size_t>(q), 0.0);
    value[0] = 1.0;
    if (q == 1) {
        lower.clear();
        return;
    }
    for (int j = 1; j < q; ++j) {
        if (j == q - 1) lower.assign(value.begin(), value.begin() + j);
        left[static_cast<std::size_t>(j)] = x - t[static_cast<std::size_t>(k + 1 - j)];
        right[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(k + j)] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double denom = right[static_cast<std::size_t>(r + 1)] +
                                 left[static_cast<std::size_t>(j - r)];
            const double temp = value[static_cast<std::size_t>(r)] / denom;
            value[static_cast<std::size_t>(r)] =
                saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(j - r)] * temp;
        }
        value[static_cast<std::size_t>(j)] = saved;
    }
}

BasisVector deriv_from_lower(const KnotVector& kv, int offset, const std::vector<double>& lower) {
    const int q = kv.order();
    BasisVector d{kv.dimension(), offset, std::vector<double>(static_cast<std::size_t>(q), 0.0)};
    if (q == 1) return d;
    const auto t = kv.extended();
    for (int m = 0; m < q - 1; ++m) {
        const int c = offset + m;  // reduced (order q-1) index
        const double s = (q - 1) / (t[static_cast<std::size_t>(c + q)] -
                                    t[static_cast<std::size_t>(c + 1)]);
        const double contrib = s * lower[static_cast<std::size_t>(m)];
        d.values[static_cast<std::size_t>(m)] -= contrib;
        d.values[static_cast<std::size_t>(m + 1)] += contrib;
    }
    return d;
}

}  // namespace

KnotVector::KnotVector(int order, std::vector<double> interior_knots) : order_(order) {
    if (order < 1) {
        throw Error(ErrorKind::InvalidArgument, "B-spline order must be >= 1");
    }
    for (std::size_t i = 0; i < interior_knots.size(); ++i) {
        const double u = interior_knots[i];
        if (!(u > 0.0 && u < 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "interior knots must lie in (0, 1)");
        }
        if (i > 0 && !(u > interior_knots[i - 1])) {
            throw Error(ErrorKind::InvalidArgument, "interior knots must be strictly increasing");
        }
    }
    const auto n_interior = static_cast<int>(interior_knots.size());
    dim_ = n_interior + order;
    knots_.reserve(static_cast<std::size_t>(n_interior + 2 * order));
    knots_.insert(knots_.end(), static_cast<std::size_t>(order), 0.0);
    knots_.insert(knots_.end(), interior_knots.begin(), interior_knots.end());
    knots_.insert(knots_.end(), static_cast<std::size_t>(order), 1.0);
}

std::span<const double> KnotVector::interior() const noexcept {
    return std::span<const double>(knots_).subspan(static_cast<std::size_t>(order_),
                                                   static_cast<std::size_t>(dim_ - order_));
}

std::vector<double> KnotVector::breakpoints() const {
    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(interior_count() + 2));
    u.push_back(0.0);
    const auto in = interior();
    u.insert(u.end(), in.begin(), in.end());
    u.push_back(1.0);
    return u;
}

double KnotVector::mesh_ratio() const {
    const auto u = breakpoints();
    double lo = 1.0;
    double hi = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i) {
        lo = std::min(lo, u[i] - u[i - 1]);
        hi = std::max(hi, u[i] - u[i - 1]);
    }
    return hi / lo;
}

int KnotVector::span(double x) const {
    check_unit_interval(x);
    if (x >= 1.0) return dim_ - 1;
    const auto first = knots_.begin() + order_;
    const auto last = knots_.begin() + dim_;
    return static_cast<int>(std::upper_bound(first, last, x) - knots_.begin()) - 1;
}

KnotVector make_knots(int n_basis, int order, KnotScheme scheme) {
    if (order < 1) {
        throw Error(ErrorKind::InvalidArgument, "B-spline order must be >= 1");
    }
    if (n_basis < order) {
        throw Error(ErrorKind::InvalidArgument,
                    "basis dimension " + std::to_string(n_basis) + " is smaller than order " +
                        std::to_string(order));
    }
    std::vector<double> interior;
    switch (scheme) {
        case KnotScheme::Uniform: {
            const int n_interior = n_basis - order;
            interior.reserve(static_cast<std::size_t>(n_interior));
            for (int k = 1; k <= n_interior; ++k) {
                interior.push_back(static_cast<double>(k) / (n_interior + 1));
            }
            break;
        }
    }
    return KnotVector(order, std::move(interior));
}

std::vector<double> BasisVector::dense() const {
    std::vector<double> out(static_cast<std::size_t>(dimension), 0.0);
    for (std::size_t k = 0; k < values.size(); ++k) {
        out[static_cast<std::size_t>(offset) + k] = values[k];
    }
    return out;
}

double BasisVector::dot(std::span<const double> v) const noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        s += values[k] * v[static_cast<std::size_t>(offset) + k];
    }
    return s;
}

double BasisVector::sum() const noexcept {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

double BasisVector::norm_sq() const noexcept {
    return std::inner_product(values.begin(), values.end(), values.begin(), 0.0);
}

BasisVector eval(const KnotVector& kv, double x) {
    const int k = kv.span(x);
    std::vector<double> value;
    std::vector<double> lower;
    basis_triangle(kv, k, x, value, lower);
    return {kv.dimension(), k - kv.order() + 1, std::move(value)};
}

BasisVector eval_lower(const KnotVector& kv, double x) {
    if (kv.order() < 2) {
        throw Error(ErrorKind::InvalidArgument, "lower-order basis requires order >= 2");
    }
    const int k = kv.span(x);
    std::vector<double> value;
    std::vector<double> lower;
    basis_triangle(kv, k, x, value, lower);
    return {kv.dimension() - 1, k - kv.order() + 1, std::move(lower)};
}

BasisVector eval_deriv(const KnotVector& kv, double x) {
    return eval_with_deriv(kv, x).deriv;
}

BasisPair eval_with_deriv(const KnotVector& kv, double x) {
    const int k = kv.span(x);
    const int offset = k - kv.order() + 1;
    std::vector<double> value;
    std::vector<double> lower;
    basis_triangle(kv, k, x, value, lower);
    BasisVector d = deriv_from_lower(kv, offset, lower);
    return {BasisVector{kv.dimension(), offset, std::move(value)}, std::move(d)};
}

DerivativeMatrix::DerivativeMatrix(const KnotVector& kv) {
    const int q = kv.order();
    if (q < 2) {
        throw Error(ErrorKind::InvalidArgument, "derivative matrix requires order >= 2");
    }
    const int cols = kv.dimension() - 1;
    scale_.resize(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) {
        scale_[static_cast<std::size_t>(c)] = (q - 1) / (kv.knot(c + q) - kv.knot(c + 1));
    }
}

double DerivativeMatrix::operator()(int row, int col) const {
    if (col < 0 || col >= cols() || row < 0 || row >= rows()) {
        throw Error(ErrorKind::InvalidArgument, "derivative matrix index out of range");
    }
    if (row == col) return -scale_[static_cast<std::size_t>(col)];
    if (row == col + 1) return scale_[static_cast<std::size_t>(col)];
    return 0.0;
}

BasisVector DerivativeMatrix::apply(const BasisVector& lower) const {
    if (lower.dimension != cols()) {
        throw Error(ErrorKind::InvalidArgument, "derivative matrix dimension mismatch");
    }
    BasisVector d{rows(), lower.offset,
                  std::vector<double>(lower.values.size() + 1, 0.0)};
    for (std::size_t m = 0; m < lower.values.size(); ++m) {
        const double contrib =
            scale_[static_cast<std::size_t>(lower.offset) + m] * lower.values[m];
        d.values[m] -= contrib;
        d.values[m + 1] += contrib;
    }
    return d;
}

DerivativeMatrix derivative_matrix(const KnotVector& kv) { return DerivativeMatrix(kv); }

}  // namespace tubeband
