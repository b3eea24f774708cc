#include "tvgl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tvgl/simd/kernels.hpp"

namespace tvgl {

namespace {

void require_dim(int dim) {
    if (dim <= 0) throw DimensionMismatch("matrix dimension must be positive");
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(int dim) : dim_(dim) {
    require_dim(dim);
    e_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
}

SymmetricMatrix SymmetricMatrix::identity(int dim) {
    SymmetricMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> diag) {
    SymmetricMatrix m(static_cast<int>(diag.size()));
    for (int i = 0; i < m.dim(); ++i) m.set(i, i, diag[i]);
    if (!m.all_finite()) throw Error("diagonal entries must be finite");
    return m;
}

SymmetricMatrix SymmetricMatrix::from_row_major(
    int dim, std::span<const double> entries) {
    require_dim(dim);
    if (entries.size() != static_cast<std::size_t>(dim) * dim)
        throw DimensionMismatch("entry count does not match dimension");
    SymmetricMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = 0.5 * (entries[static_cast<std::size_t>(i) * dim + j] +
                                    entries[static_cast<std::size_t>(j) * dim + i]);
            m.set(i, j, v);
        }
    if (!m.all_finite()) throw Error("matrix entries must be finite");
    return m;
}

double SymmetricMatrix::max_abs() const {
    double v = 0.0;
    for (double x : e_) v = std::max(v, std::abs(x));
    return v;
}

double SymmetricMatrix::max_abs_diag() const {
    double v = 0.0;
    for (int i = 0; i < dim_; ++i) v = std::max(v, std::abs((*this)(i, i)));
    return v;
}

double SymmetricMatrix::max_abs_off_diagonal() const {
    double v = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j)
            v = std::max(v, std::abs((*this)(i, j)));
    return v;
}

double SymmetricMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : e_) s += x * x;
    return std::sqrt(s);
}

bool SymmetricMatrix::all_finite() const {
    return std::all_of(e_.begin(), e_.end(),
                       [](double x) { return std::isfinite(x); });
}

double max_abs_diff(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("max_abs_diff: dimensions differ");
    double v = 0.0;
    const std::size_t n = a.entries().size();
    for (std::size_t i = 0; i < n; ++i)
        v = std::max(v, std::abs(a.entries()[i] - b.entries()[i]));
    return v;
}

double CholeskyFactor::log_det() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += std::log((*this)(i, i));
    return 2.0 * s;
}

void CholeskyFactor::solve_in_place(std::span<double> b) const {
    const int p = dim_;
    // L y = b
    for (int i = 0; i < p; ++i) {
        const double s = simd::dot(row(i), b.data(), static_cast<std::size_t>(i));
        b[i] = (b[i] - s) / (*this)(i, i);
    }
    // L^T x = y
    for (int i = p - 1; i >= 0; --i) {
        double s = 0.0;
        for (int k = i + 1; k < p; ++k) s += (*this)(k, i) * b[k];
        b[i] = (b[i] - s) / (*this)(i, i);
    }
}

std::optional<CholeskyFactor> try_cholesky(const SymmetricMatrix& m) {
    const int p = m.dim();
    std::vector<double> lower(static_cast<std::size_t>(p) * p, 0.0);
    auto at = [&](int i, int j) -> double& {
        return lower[static_cast<std::size_t>(i) * p + j];
    };
    for (int j = 0; j < p; ++j) {
        const double* row_j = lower.data() + static_cast<std::size_t>(j) * p;
        double d = m(j, j) - simd::dot(row_j, row_j, static_cast<std::size_t>(j));
        if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
        const double ljj = std::sqrt(d);
        at(j, j) = ljj;
        for (int i = j + 1; i < p; ++i) {
            const double* row_i = lower.data() + static_cast<std::size_t>(i) * p;
            const double s =
                simd::dot(row_i, row_j, static_cast<std::size_t>(j));
            at(i, j) = (m(i, j) - s) / ljj;
        }
    }
    return CholeskyFactor(p, std::move(lower));
}

CholeskyFactor cholesky(const SymmetricMatrix& m) {
    auto f = try_cholesky(m);
    if (!f) throw NotPositiveDefinite("cholesky: matrix is not positive definite");
    return std::move(*f);
}

double log_det(const SymmetricMatrix& m) { return cholesky(m).log_det(); }

SymmetricMatrix spd_inverse(const SymmetricMatrix& m) {
    const int p = m.dim();
    const CholeskyFactor f = cholesky(m);
    std::vector<double> inv(static_cast<std::size_t>(p) * p, 0.0);
    std::vector<double> col(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[static_cast<std::size_t>(j)] = 1.0;
        f.solve_in_place(col);
        for (int i = 0; i < p; ++i)
            inv[static_cast<std::size_t>(i) * p + j] = col[static_cast<std::size_t>(i)];
    }
    // Symmetrize: the two triangles differ only by solve roundoff.
    return SymmetricMatrix::from_row_major(p, inv);
}

std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& m) {
    if (!m.all_finite())
        throw Error("symmetric_eigenvalues: entries must be finite");
    const int p = m.dim();
    std::vector<double> a(m.entries());
    auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * p + j];
    };

    // Cyclic Jacobi sweeps; for desk-scale p this is robust and accurate
    // to near machine precision.
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) off += at(i, j) * at(i, j);
        double scale = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) scale += at(i, j) * at(i, j);
        if (off <= 1e-30 * std::max(scale, 1e-300)) break;

        for (int i = 0; i < p - 1; ++i) {
            for (int j = i + 1; j < p; ++j) {
                const double apq = at(i, j);
                if (apq == 0.0) continue;
                const double app = at(i, i);
                const double aqq = at(j, j);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < p; ++k) {
                    const double aki = at(k, i);
                    const double akj = at(k, j);
                    at(k, i) = c * aki - s * akj;
                    at(k, j) = s * aki + c * akj;
                }
                for (int k = 0; k < p; ++k) {
                    const double aik = at(i, k);
                    const double ajk = at(j, k);
                    at(i, k) = c * aik - s * ajk;
                    at(j, k) = s * aik + c * ajk;
                }
            }
        }
    }

    std::vector<double> eig(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

std::pair<double, double> eigen_extremes(const SymmetricMatrix& m) {
    const std::vector<double> eig = symmetric_eigenvalues(m);
    return {eig.front(), eig.back()};
}

double CovarianceMatrix::psd_tolerance(const SymmetricMatrix& m) {
    return 1e-10 * m.max_abs_diag();
}

CovarianceMatrix::CovarianceMatrix(SymmetricMatrix m) : m_(std::move(m)) {
    if (!m_.all_finite())
        throw Error("covariance entries must be finite");
    const double tol = psd_tolerance(m_);
    // Fast path: Cholesky of m + tol*I certifies lambda_min >= -tol.
    SymmetricMatrix shifted = m_;
    for (int i = 0; i < shifted.dim(); ++i)
        shifted.add(i, i, tol);
    if (try_cholesky(shifted)) return;
    const double lambda_min = eigen_extremes(m_).first;
    if (lambda_min < -tol)
        throw NotPositiveDefinite("covariance matrix is not PSD within tolerance");
}

PrecisionMatrix::PrecisionMatrix(SymmetricMatrix m) : m_(std::move(m)) {
    if (!try_cholesky(m_))
        throw NotPositiveDefinite("precision matrix is not positive definite");
}

CovarianceMatrix spd_inverse(const PrecisionMatrix& m) {
    return CovarianceMatrix(spd_inverse(m.matrix()));
}

}  // namespace tvgl
