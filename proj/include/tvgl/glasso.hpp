#pragma once

#include <span>
#include <vector>

#include "tvgl/edge_set.hpp"
#include "tvgl/matrix.hpp"

namespace tvgl {

// L1 penalty on the precision matrix. With penalize_diagonal = false only
// off-diagonal entries are penalized, which is the usual choice for graph
// recovery; the full |Theta|_1 mode is also supported.
struct PenaltySpec {
    double lambda = 0.0;
    bool penalize_diagonal = false;

    void validate() const;
};

struct GlassoOptions {
    double tol = 1e-6;       // convergence target for the KKT residual
    int max_iter = 500;      // outer sweeps over all columns
    double diag_jitter = 0.0;  // diagnostic ridge added to S; off by default

    void validate() const;
};

// Solution of  argmin_{Theta > 0}  tr(Theta S) - log|Theta| + lambda pen(Theta).
struct GlassoFit {
    PrecisionMatrix theta;
    CovarianceMatrix sigma;  // theta^{-1}
    PenaltySpec penalty;
    int iterations = 0;
    double kkt_residual = 0.0;
    double objective = 0.0;
    bool converged = true;
};

/// First-order optimality violation at theta. With G = S - theta^{-1}:
/// penalized entries contribute |G_ij + lambda sign(theta_ij)| when
/// theta_ij != 0 (|theta_ij| < 1e-12 counts as zero) and
/// max(0, |G_ij| - lambda) otherwise; unpenalized entries contribute |G_ij|.
/// Returns the max over entries.
double kkt_residual(const CovarianceMatrix& s, const PrecisionMatrix& theta,
                    const PenaltySpec& penalty);

/// tr(Theta S) - log|Theta| + lambda * pen(Theta); throws NotPositiveDefinite.
double objective_value(const CovarianceMatrix& s, const SymmetricMatrix& theta,
                       const PenaltySpec& penalty);

/// l1 norm of the penalized entries of theta (vectorized: off-diagonal
/// entries count twice, matching |Theta|_1 on the full matrix).
double penalized_l1(const SymmetricMatrix& theta, const PenaltySpec& penalty);

/// Smallest lambda that forces a diagonal solution under the off-diagonal
/// penalty: max_{i != j} |s_ij|.
double lambda_max(const CovarianceMatrix& s);

GlassoFit fit(const CovarianceMatrix& s, const PenaltySpec& penalty,
              const GlassoOptions& options = {},
              const SymmetricMatrix* warm_start = nullptr);

/// Convenience overload mirroring the (S, penalty, tol, max_iter) call shape.
GlassoFit fit(const CovarianceMatrix& s, const PenaltySpec& penalty,
              double tol, int max_iter);

/// Fits along a strictly decreasing lambda sequence, warm-starting each fit
/// from the previous solution.
std::vector<GlassoFit> regularization_path(const CovarianceMatrix& s,
                                           std::span<const double> lambdas,
                                           bool penalize_diagonal,
                                           const GlassoOptions& options = {});

/// Edges whose precision entry exceeds zero_tol in absolute value.
EdgeSet edges_of(const PrecisionMatrix& theta, double zero_tol);

/// Default edge threshold: 1e-6 scaled by the largest |theta_ij|.
double default_zero_tol(const PrecisionMatrix& theta);

}  // namespace tvgl
