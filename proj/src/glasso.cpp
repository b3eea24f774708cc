#include "tvgl/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "tvgl/simd/kernels.hpp"

namespace tvgl {

namespace {

constexpr double kZeroEntry = 1e-12;  // |theta_ij| below this counts as zero

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

}  // namespace

void PenaltySpec::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ConfigError("penalty lambda must be a nonnegative real");
}

void GlassoOptions::validate() const {
    if (!(tol > 0.0)) throw ConfigError("glasso tol must be positive");
    if (max_iter < 1) throw ConfigError("glasso max_iter must be >= 1");
    if (diag_jitter < 0.0) throw ConfigError("diag_jitter must be >= 0");
}

double kkt_residual(const CovarianceMatrix& s, const PrecisionMatrix& theta,
                    const PenaltySpec& penalty) {
    if (s.dim() != theta.dim())
        throw DimensionMismatch("kkt_residual: dimension mismatch");
    const SymmetricMatrix sigma = spd_inverse(theta.matrix());
    const double lambda = penalty.lambda;
    double res = 0.0;
    for (int i = 0; i < s.dim(); ++i) {
        for (int j = i; j < s.dim(); ++j) {
            const double g = s(i, j) - sigma(i, j);
            const bool penalized = (i != j) || penalty.penalize_diagonal;
            double r;
            if (!penalized) {
                r = std::abs(g);
            } else if (std::abs(theta(i, j)) < kZeroEntry) {
                r = std::max(0.0, std::abs(g) - lambda);
            } else {
                r = std::abs(g + lambda * (theta(i, j) > 0.0 ? 1.0 : -1.0));
            }
            res = std::max(res, r);
        }
    }
    return res;
}

double penalized_l1(const SymmetricMatrix& theta, const PenaltySpec& penalty) {
    double s = 0.0;
    for (int i = 0; i < theta.dim(); ++i) {
        if (penalty.penalize_diagonal) s += std::abs(theta(i, i));
        for (int j = i + 1; j < theta.dim(); ++j)
            s += 2.0 * std::abs(theta(i, j));
    }
    return s;
}

double objective_value(const CovarianceMatrix& s, const SymmetricMatrix& theta,
                       const PenaltySpec& penalty) {
    if (s.dim() != theta.dim())
        throw DimensionMismatch("objective_value: dimension mismatch");
    double tr = 0.0;
    for (int i = 0; i < s.dim(); ++i)
        tr += simd::dot(s.matrix().row(i), theta.row(i),
                        static_cast<std::size_t>(s.dim()));
    return tr - log_det(theta) + penalty.lambda * penalized_l1(theta, penalty);
}

double lambda_max(const CovarianceMatrix& s) {
    return s.matrix().max_abs_off_diagonal();
}

namespace {

// Block coordinate descent over columns of the working covariance W
// (the classic GLASSO scheme). Each column solves a lasso subproblem
//   min_beta  1/2 beta^T W11 beta - s12^T beta + lambda |beta|_1
// by coordinate descent, then w12 <- W11 beta. The working diagonal is
// pinned at s_ii (+ lambda when the diagonal is penalized), which encodes
// the stationarity condition for the diagonal entries.
class GlassoSolver {
public:
    GlassoSolver(const SymmetricMatrix& s, const PenaltySpec& penalty,
                 const GlassoOptions& options)
        : s_(s), penalty_(penalty), options_(options), p_(s.dim()),
          w_(s), beta_(static_cast<std::size_t>(p_) * p_, 0.0) {}

    void init_cold() {
        const double diag_shift =
            penalty_.penalize_diagonal ? penalty_.lambda : 0.0;
        w_ = s_;
        for (int i = 0; i < p_; ++i) w_.set(i, i, s_(i, i) + diag_shift);
        std::fill(beta_.begin(), beta_.end(), 0.0);
    }

    void init_warm(const SymmetricMatrix& theta0) {
        const double diag_shift =
            penalty_.penalize_diagonal ? penalty_.lambda : 0.0;
        w_ = spd_inverse(theta0);
        for (int i = 0; i < p_; ++i) w_.set(i, i, s_(i, i) + diag_shift);
        for (int j = 0; j < p_; ++j) {
            const double tjj = theta0(j, j);
            for (int i = 0; i < p_; ++i)
                beta_at(j, i) = (i == j || tjj <= 0.0) ? 0.0 : -theta0(i, j) / tjj;
        }
    }

    // One full sweep over columns; returns the recovered symmetric theta.
    SymmetricMatrix sweep() {
        for (int j = 0; j < p_; ++j) update_column(j);
        return recover_theta();
    }

private:
    double& beta_at(int column, int row) {
        return beta_[static_cast<std::size_t>(column) * p_ + row];
    }

    void update_column(int j) {
        const double lambda = penalty_.lambda;
        // Gather W11 (rows/cols != j) and s12 into scratch.
        w11_.assign(static_cast<std::size_t>(p_ - 1) * (p_ - 1), 0.0);
        s12_.assign(static_cast<std::size_t>(p_ - 1), 0.0);
        b_.assign(static_cast<std::size_t>(p_ - 1), 0.0);
        int r = 0;
        for (int i = 0; i < p_; ++i) {
            if (i == j) continue;
            s12_[static_cast<std::size_t>(r)] = s_(i, j);
            b_[static_cast<std::size_t>(r)] = beta_at(j, i);
            int c = 0;
            for (int k = 0; k < p_; ++k) {
                if (k == j) continue;
                w11_[static_cast<std::size_t>(r) * (p_ - 1) + c] = w_(i, k);
                ++c;
            }
            ++r;
        }

        // Lasso coordinate descent, stopped on the subproblem KKT residual
        // (same absolute scale as the outer residual).
        const int m = p_ - 1;
        const double sub_tol = 0.1 * options_.tol;
        const int max_inner = 1000;
        for (int it = 0; it < max_inner; ++it) {
            double max_delta = 0.0;
            for (int k = 0; k < m; ++k) {
                const double* row =
                    w11_.data() + static_cast<std::size_t>(k) * m;
                const double wkk = row[k];
                const double grad =
                    simd::dot(row, b_.data(), static_cast<std::size_t>(m)) -
                    wkk * b_[static_cast<std::size_t>(k)];
                const double old = b_[static_cast<std::size_t>(k)];
                const double next =
                    soft_threshold(s12_[static_cast<std::size_t>(k)] - grad,
                                   lambda) / wkk;
                if (next != old) {
                    b_[static_cast<std::size_t>(k)] = next;
                    max_delta = std::max(max_delta, std::abs(next - old));
                }
            }
            if (max_delta <= sub_tol || subproblem_kkt(m, lambda) <= sub_tol)
                break;
        }

        // w12 <- W11 beta
        int rr = 0;
        for (int i = 0; i < p_; ++i) {
            if (i == j) continue;
            const double* row = w11_.data() + static_cast<std::size_t>(rr) * m;
            const double v = simd::dot(row, b_.data(), static_cast<std::size_t>(m));
            w_.set(i, j, v);
            beta_at(j, i) = b_[static_cast<std::size_t>(rr)];
            ++rr;
        }
    }

    double subproblem_kkt(int m, double lambda) const {
        double res = 0.0;
        for (int k = 0; k < m; ++k) {
            const double* row = w11_.data() + static_cast<std::size_t>(k) * m;
            const double g =
                simd::dot(row, b_.data(), static_cast<std::size_t>(m)) -
                s12_[static_cast<std::size_t>(k)];
            const double bk = b_[static_cast<std::size_t>(k)];
            double r;
            if (std::abs(bk) < kZeroEntry)
                r = std::max(0.0, std::abs(g) - lambda);
            else
                r = std::abs(g + lambda * (bk > 0.0 ? 1.0 : -1.0));
            res = std::max(res, r);
        }
        return res;
    }

    SymmetricMatrix recover_theta() const {
        std::vector<double> raw(static_cast<std::size_t>(p_) * p_, 0.0);
        for (int j = 0; j < p_; ++j) {
            double quad = 0.0;
            for (int i = 0; i < p_; ++i)
                if (i != j)
                    quad += w_(i, j) *
                            beta_[static_cast<std::size_t>(j) * p_ + i];
            // The Schur complement of a positive definite W is positive;
            // clamp transient roundoff violations. The exit test is the
            // exact KKT residual against S, so this cannot change the
            // problem being solved.
            const double floor = 1e-12 * std::max(1.0, w_(j, j));
            const double tjj = 1.0 / std::max(w_(j, j) - quad, floor);
            raw[static_cast<std::size_t>(j) * p_ + j] = tjj;
            for (int i = 0; i < p_; ++i)
                if (i != j)
                    raw[static_cast<std::size_t>(i) * p_ + j] =
                        -beta_[static_cast<std::size_t>(j) * p_ + i] * tjj;
        }
        // The two triangles disagree only by unconverged roundoff.
        return SymmetricMatrix::from_row_major(p_, raw);
    }

    const SymmetricMatrix& s_;
    const PenaltySpec& penalty_;
    const GlassoOptions& options_;
    int p_;
    SymmetricMatrix w_;
    std::vector<double> beta_;  // column-major coefficient vectors
    std::vector<double> w11_, s12_, b_;
};

GlassoFit make_fit(const CovarianceMatrix& s, SymmetricMatrix theta_raw,
                   const PenaltySpec& penalty, int iterations, bool converged) {
    PrecisionMatrix theta(std::move(theta_raw));
    CovarianceMatrix sigma = spd_inverse(theta);
    const double res = kkt_residual(s, theta, penalty);
    const double obj = objective_value(s, theta.matrix(), penalty);
    return GlassoFit{std::move(theta), std::move(sigma), penalty,
                     iterations, res, obj, converged};
}

}  // namespace

GlassoFit fit(const CovarianceMatrix& s, const PenaltySpec& penalty,
              const GlassoOptions& options, const SymmetricMatrix* warm_start) {
    penalty.validate();
    options.validate();
    const int p = s.dim();

    SymmetricMatrix s_work = s.matrix();
    if (options.diag_jitter > 0.0)
        for (int i = 0; i < p; ++i) s_work.add(i, i, options.diag_jitter);
    const CovarianceMatrix s_eff =
        options.diag_jitter > 0.0 ? CovarianceMatrix(s_work) : s;

    if (penalty.lambda == 0.0) {
        // Unpenalized MLE: Theta = S^{-1}, exact via Cholesky.
        if (!try_cholesky(s_work))
            throw SingularInput(
                "lambda = 0 requires a strictly positive definite input");
        return make_fit(s_eff, spd_inverse(s_work), penalty, 0, true);
    }
    if (!penalty.penalize_diagonal) {
        for (int i = 0; i < p; ++i)
            if (!(s_work(i, i) > 0.0))
                throw ZeroDiagonal(
                    "off-diagonal penalty requires strictly positive "
                    "diagonal entries");
    }

    if (p == 1) {
        const double shift = penalty.penalize_diagonal ? penalty.lambda : 0.0;
        SymmetricMatrix theta(1);
        theta.set(0, 0, 1.0 / (s_work(0, 0) + shift));
        return make_fit(s_eff, std::move(theta), penalty, 0, true);
    }

    GlassoSolver solver(s_work, penalty, options);
    if (warm_start != nullptr && warm_start->dim() == p &&
        try_cholesky(*warm_start)) {
        solver.init_warm(*warm_start);
    } else {
        solver.init_cold();
    }

    SymmetricMatrix best_theta(p);
    double best_res = std::numeric_limits<double>::infinity();
    int best_sweep = 0;
    for (int sweep = 1; sweep <= options.max_iter; ++sweep) {
        SymmetricMatrix theta = solver.sweep();
        if (!try_cholesky(theta)) continue;  // keep sweeping until PD
        const double res =
            kkt_residual(s_eff, PrecisionMatrix(theta), penalty);
        if (res < best_res) {
            best_res = res;
            best_theta = theta;
            best_sweep = sweep;
        }
        if (res <= options.tol)
            return make_fit(s_eff, std::move(theta), penalty, sweep, true);
    }
    if (!std::isfinite(best_res))
        throw Error("glasso failed to produce a positive definite iterate");
    return make_fit(s_eff, std::move(best_theta), penalty, best_sweep, false);
}

GlassoFit fit(const CovarianceMatrix& s, const PenaltySpec& penalty,
              double tol, int max_iter) {
    GlassoOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    return fit(s, penalty, options);
}

std::vector<GlassoFit> regularization_path(const CovarianceMatrix& s,
                                           std::span<const double> lambdas,
                                           bool penalize_diagonal,
                                           const GlassoOptions& options) {
    if (lambdas.empty()) return {};
    for (std::size_t k = 1; k < lambdas.size(); ++k)
        if (!(lambdas[k] < lambdas[k - 1]))
            throw ConfigError("regularization path requires strictly "
                              "decreasing lambdas");
    std::vector<GlassoFit> fits;
    fits.reserve(lambdas.size());
    const SymmetricMatrix* warm = nullptr;
    for (double lambda : lambdas) {
        PenaltySpec penalty{lambda, penalize_diagonal};
        fits.push_back(fit(s, penalty, options, warm));
        warm = &fits.back().theta.matrix();
    }
    return fits;
}

EdgeSet edges_of(const PrecisionMatrix& theta, double zero_tol) {
    if (zero_tol < 0.0) throw ConfigError("zero_tol must be >= 0");
    EdgeSet edges(theta.dim());
    for (int i = 0; i < theta.dim(); ++i)
        for (int j = i + 1; j < theta.dim(); ++j)
            if (std::abs(theta(i, j)) > zero_tol) edges.insert(i, j);
    return edges;
}

double default_zero_tol(const PrecisionMatrix& theta) {
    return 1e-6 * theta.matrix().max_abs();
}

}  // namespace tvgl
