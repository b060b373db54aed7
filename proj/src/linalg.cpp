#include "tubeband/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tubeband/error.hpp"

namespace tubeband {

namespace {

void require_same_dimension(std::size_t got, int want, const char* what) {
    if (got != static_cast<std::size_t>(want)) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(what) + ": dimension mismatch (" + std::to_string(got) +
                        " vs " + std::to_string(want) + ")");
    }
}

}  // namespace

BandedSymMatrix::BandedSymMatrix(int dimension, int bandwidth)
    : dim_(dimension), width_(bandwidth) {
    if (dimension < 1) {
        throw Error(ErrorKind::InvalidArgument, "banded matrix dimension must be >= 1");
    }
    if (bandwidth < 0) {
        throw Error(ErrorKind::InvalidArgument, "banded matrix bandwidth must be >= 0");
    }
    width_ = std::min(bandwidth, dimension - 1);
    band_.assign(static_cast<std::size_t>(dim_) * static_cast<std::size_t>(width_ + 1), 0.0);
}

BandedSymMatrix BandedSymMatrix::identity(int dimension) {
    BandedSymMatrix m(dimension, 0);
    for (int i = 0; i < dimension; ++i) m.at(i, i) = 1.0;
    return m;
}

BandedSymMatrix BandedSymMatrix::diagonal(std::span<const double> diag) {
    BandedSymMatrix m(static_cast<int>(diag.size()), 0);
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m.at(static_cast<int>(i), static_cast<int>(i)) = diag[i];
    }
    return m;
}

double BandedSymMatrix::operator()(int i, int j) const noexcept {
    if (i > j) std::swap(i, j);
    const int d = j - i;
    if (i < 0 || j >= dim_ || d > width_) return 0.0;
    return band_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_ + 1) +
                 static_cast<std::size_t>(d)];
}

double& BandedSymMatrix::at(int i, int j) {
    if (i > j) std::swap(i, j);
    const int d = j - i;
    if (i < 0 || j >= dim_ || d > width_) {
        throw Error(ErrorKind::InvalidArgument, "banded matrix index outside the band");
    }
    return band_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_ + 1) +
                 static_cast<std::size_t>(d)];
}

std::vector<double> BandedSymMatrix::multiply(std::span<const double> x) const {
    require_same_dimension(x.size(), dim_, "banded multiply");
    std::vector<double> y(static_cast<std::size_t>(dim_), 0.0);
    for (int i = 0; i < dim_; ++i) {
        const double* row = &band_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_ + 1)];
        const auto ui = static_cast<std::size_t>(i);
        y[ui] += row[0] * x[ui];
        const int last = std::min(dim_ - 1, i + width_);
        for (int j = i + 1; j <= last; ++j) {
            const double a = row[j - i];
            const auto uj = static_cast<std::size_t>(j);
            y[ui] += a * x[uj];
            y[uj] += a * x[ui];
        }
    }
    return y;
}

double BandedSymMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
    const auto ay = multiply(y);
    return dot(x, ay);
}

std::vector<std::vector<double>> BandedSymMatrix::to_dense() const {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(dim_),
                                         std::vector<double>(static_cast<std::size_t>(dim_), 0.0));
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (*this)(i, j);
        }
    }
    return out;
}

BandedSymMatrix add_banded(const BandedSymMatrix& a, const BandedSymMatrix& b) {
    if (a.dimension() != b.dimension()) {
        throw Error(ErrorKind::InvalidArgument, "add_banded: dimension mismatch");
    }
    const int w = std::max(a.bandwidth(), b.bandwidth());
    BandedSymMatrix out(a.dimension(), w);
    for (int i = 0; i < a.dimension(); ++i) {
        const int last = std::min(a.dimension() - 1, i + w);
        for (int j = i; j <= last; ++j) out.at(i, j) = a(i, j) + b(i, j);
    }
    return out;
}

BandedSymMatrix add_scaled_identity(const BandedSymMatrix& a, double alpha) {
    BandedSymMatrix out = a;
    for (int i = 0; i < a.dimension(); ++i) out.at(i, i) += alpha;
    return out;
}

BandedSymMatrix add_diagonal(const BandedSymMatrix& a, std::span<const double> d) {
    require_same_dimension(d.size(), a.dimension(), "add_diagonal");
    BandedSymMatrix out = a;
    for (int i = 0; i < a.dimension(); ++i) out.at(i, i) += d[static_cast<std::size_t>(i)];
    return out;
}

BandedSymMatrix gram(const KnotVector& kv, std::span<const double> xs) {
    if (xs.empty()) {
        throw Error(ErrorKind::EmptyDesign, "gram: no design points");
    }
    const int q = kv.order();
    BandedSymMatrix g(kv.dimension(), q - 1);
    for (const double x : xs) {
        const BasisVector b = eval(kv, x);
        const int n = static_cast<int>(b.values.size());
        for (int u = 0; u < n; ++u) {
            const double bu = b.values[static_cast<std::size_t>(u)];
            if (bu == 0.0) continue;
            for (int v = u; v < n; ++v) {
                g.at(b.offset + u, b.offset + v) += bu * b.values[static_cast<std::size_t>(v)];
            }
        }
    }
    return g;
}

std::vector<double> design_transpose_times(const KnotVector& kv, std::span<const double> xs,
                                           std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorKind::InvalidArgument, "design_transpose_times: xs/ys length mismatch");
    }
    std::vector<double> out(static_cast<std::size_t>(kv.dimension()), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const BasisVector b = eval(kv, xs[i]);
        for (std::size_t k = 0; k < b.values.size(); ++k) {
            out[static_cast<std::size_t>(b.offset) + k] += b.values[k] * ys[i];
        }
    }
    return out;
}

BandedCholesky::BandedCholesky(const BandedSymMatrix& m)
    : dim_(m.dimension()), width_(m.bandwidth()) {
    const auto stride = static_cast<std::size_t>(width_ + 1);
    band_.assign(static_cast<std::size_t>(dim_) * stride, 0.0);
    auto l = [&](int i, int j) -> double& {
        return band_[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j - i + width_)];
    };
    for (int i = 0; i < dim_; ++i) {
        const int first = std::max(0, i - width_);
        for (int j = first; j <= i; ++j) {
            double s = m(i, j);
            for (int k = first; k < j; ++k) s -= l(i, k) * l(j, k);
            if (j == i) {
                if (!(s > 0.0) || !std::isfinite(s)) {
                    throw Error(ErrorKind::NotPositiveDefinite,
                                "cholesky: non-positive pivot at row " + std::to_string(i));
                }
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
}

double BandedCholesky::lower(int i, int j) const noexcept {
    if (j > i || i - j > width_ || i < 0 || i >= dim_ || j < 0) return 0.0;
    return band_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_ + 1) +
                 static_cast<std::size_t>(j - i + width_)];
}

void BandedCholesky::forward(std::span<double> y, int first_nonzero) const {
    const auto stride = static_cast<std::size_t>(width_ + 1);
    for (int i = std::max(0, first_nonzero); i < dim_; ++i) {
        const double* row = &band_[static_cast<std::size_t>(i) * stride];
        double s = y[static_cast<std::size_t>(i)];
        for (int k = std::max(first_nonzero, i - width_); k < i; ++k) {
            s -= row[k - i + width_] * y[static_cast<std::size_t>(k)];
        }
        y[static_cast<std::size_t>(i)] = s / row[width_];
    }
}

void BandedCholesky::backward(std::span<double> x) const {
    const auto stride = static_cast<std::size_t>(width_ + 1);
    for (int i = dim_ - 1; i >= 0; --i) {
        double s = x[static_cast<std::size_t>(i)];
        const int last = std::min(dim_ - 1, i + width_);
        for (int k = i + 1; k <= last; ++k) {
            s -= band_[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(i - k + width_)] *
                 x[static_cast<std::size_t>(k)];
        }
        x[static_cast<std::size_t>(i)] =
            s / band_[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(width_)];
    }
}

std::vector<double> BandedCholesky::solve(std::span<const double> rhs) const {
    require_same_dimension(rhs.size(), dim_, "cholesky solve");
    std::vector<double> x(rhs.begin(), rhs.end());
    forward(x);
    backward(x);
    return x;
}

double BandedCholesky::quad_form(std::span<const double> v) const {
    require_same_dimension(v.size(), dim_, "quad_form");
    std::vector<double> y(v.begin(), v.end());
    forward(y);
    return dot(y, y);
}

std::vector<double> BandedCholesky::half_solve(const BasisVector& v) const {
    require_same_dimension(static_cast<std::size_t>(v.dimension), dim_, "half_solve");
    std::vector<double> y(static_cast<std::size_t>(dim_), 0.0);
    for (std::size_t k = 0; k < v.values.size(); ++k) {
        y[static_cast<std::size_t>(v.offset) + k] = v.values[k];
    }
    forward(y, v.offset);
    return y;
}

double BandedCholesky::quad_form(const BasisVector& v) const {
    const auto y = half_solve(v);
    return dot(y, y);
}

double BandedCholesky::log_det() const noexcept {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
        s += 2.0 * std::log(band_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_ + 1) +
                                  static_cast<std::size_t>(width_)]);
    }
    return s;
}

BandedCholesky cholesky(const BandedSymMatrix& m) { return BandedCholesky(m); }

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace tubeband
