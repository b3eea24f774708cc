#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tvgl/errors.hpp"

namespace tvgl {

// Dense symmetric p x p matrix with full row-major storage. Symmetry is an
// invariant of construction: every mutation writes both triangles, and the
// bulk constructor averages (a + a^T)/2 so downstream factorizations see
// exact symmetry. All entries must be finite.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(int dim);

    static SymmetricMatrix identity(int dim);
    static SymmetricMatrix diagonal(std::span<const double> diag);
    /// Builds from arbitrary row-major entries, symmetrizing via (a + a^T)/2.
    static SymmetricMatrix from_row_major(int dim,
                                          std::span<const double> entries);

    int dim() const { return dim_; }

    double operator()(int i, int j) const {
        return e_[static_cast<std::size_t>(i) * dim_ + j];
    }

    /// Writes both (i,j) and (j,i).
    void set(int i, int j, double v) {
        e_[static_cast<std::size_t>(i) * dim_ + j] = v;
        e_[static_cast<std::size_t>(j) * dim_ + i] = v;
    }

    /// Adds v to the (i,j) pair; off-diagonal entries update both triangles.
    void add(int i, int j, double v) {
        e_[static_cast<std::size_t>(i) * dim_ + j] += v;
        if (i != j) e_[static_cast<std::size_t>(j) * dim_ + i] += v;
    }

    const double* data() const { return e_.data(); }
    const double* row(int i) const {
        return e_.data() + static_cast<std::size_t>(i) * dim_;
    }
    const std::vector<double>& entries() const { return e_; }

    double max_abs() const;
    double max_abs_diag() const;
    double max_abs_off_diagonal() const;
    double frobenius_norm() const;
    bool all_finite() const;

    bool operator==(const SymmetricMatrix& other) const = default;

private:
    int dim_ = 0;
    std::vector<double> e_;
};

/// Max-entry distance between two matrices of equal dimension.
double max_abs_diff(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// Lower-triangular Cholesky factor L with A = L * L^T.
class CholeskyFactor {
public:
    CholeskyFactor(int dim, std::vector<double> lower)
        : dim_(dim), lower_(std::move(lower)) {}

    int dim() const { return dim_; }
    double operator()(int i, int j) const {
        return lower_[static_cast<std::size_t>(i) * dim_ + j];
    }
    const double* row(int i) const {
        return lower_.data() + static_cast<std::size_t>(i) * dim_;
    }

    /// log det A = 2 * sum_i log L_ii
    double log_det() const;

    /// Solves A x = b in place (forward then backward substitution).
    void solve_in_place(std::span<double> b) const;

private:
    int dim_ = 0;
    std::vector<double> lower_;  // row-major, strictly upper part zero
};

/// Cholesky factorization; empty when the matrix is not positive definite
/// (any pivot <= 0, the factual PD boundary at working precision).
std::optional<CholeskyFactor> try_cholesky(const SymmetricMatrix& m);

/// Throwing variant of try_cholesky.
CholeskyFactor cholesky(const SymmetricMatrix& m);

/// log|m| via the Cholesky factor; throws NotPositiveDefinite.
double log_det(const SymmetricMatrix& m);

/// Inverse of a positive definite matrix, symmetrized after the solve.
SymmetricMatrix spd_inverse(const SymmetricMatrix& m);

/// All eigenvalues in ascending order (cyclic Jacobi; small dense p).
std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& m);

/// (lambda_min, lambda_max).
std::pair<double, double> eigen_extremes(const SymmetricMatrix& m);

// Symmetric PSD matrix within a scale-aware tolerance: the smallest
// eigenvalue may be as low as -1e-10 * max diagonal entry, which accepts
// smoothed covariances sitting at rank deficiency.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(SymmetricMatrix m);

    static double psd_tolerance(const SymmetricMatrix& m);

    const SymmetricMatrix& matrix() const { return m_; }
    int dim() const { return m_.dim(); }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    SymmetricMatrix m_;
};

// Strictly positive definite matrix: construction requires a successful
// Cholesky factorization.
class PrecisionMatrix {
public:
    explicit PrecisionMatrix(SymmetricMatrix m);

    const SymmetricMatrix& matrix() const { return m_; }
    int dim() const { return m_.dim(); }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    SymmetricMatrix m_;
};

inline double log_det(const PrecisionMatrix& m) { return log_det(m.matrix()); }

/// Theta^{-1} as a validated covariance matrix.
CovarianceMatrix spd_inverse(const PrecisionMatrix& m);

}  // namespace tvgl
