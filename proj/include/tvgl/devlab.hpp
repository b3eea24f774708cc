#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tvgl/calculus.hpp"
#include "tvgl/kernel.hpp"
#include "tvgl/matrix.hpp"

namespace tvgl {

/// Closed-form moment generating function E[exp(t Z_i Z_j)] for a centered
/// bivariate normal pair with standard deviations sigma_i, sigma_j and
/// correlation rho:
///   [ (1 - t(s_i s_j + s_ij)) (1 + t(s_i s_j - s_ij)) ]^{-1/2},
/// s_ij = rho s_i s_j. Throws OutOfDomain at or beyond the singularity
/// (either factor nonpositive).
double mgf_product_normals(double t, double sigma_i, double sigma_j,
                           double rho);

/// Curve that is constant in t; all derivatives vanish.
MatrixCurve constant_curve(const SymmetricMatrix& m);

/// 1x1 curve c0 + c1 (t - t_ref) + c2 (t - t_ref)^2 with exact derivatives.
MatrixCurve polynomial_entry_curve(double c0, double c1, double c2,
                                   double t_ref);

struct BiasPoint {
    double h = 0.0;
    double abs_bias = 0.0;
};

/// Deterministic smoother bias |sum_k w_k sigma_ij(t_k) - sigma_ij(t0)| for
/// each bandwidth. The expectation of the smoothed estimator is exact given
/// the curve, so no sampling is involved.
std::vector<BiasPoint> bias_curve(const MatrixCurve& sigma_curve, int entry_i,
                                  int entry_j, double t0, KernelFamily family,
                                  std::span<const double> h_values, int n);

// Monte-Carlo tail experiment for one smoothed covariance entry: draws
// independent non-identically distributed pairs along the covariance curve,
// smooths at t0 = 1 and counts deviations of the weighted second moment
// from its exact expectation.
struct TailExperimentConfig {
    int n = 1000;
    double h = 0.2;
    double epsilon = 0.25;
    int replicates = 10000;
    MatrixCurve curve;  // covariance curve Sigma(t)
    int entry_i = 0;
    int entry_j = 0;
    KernelFamily family = KernelFamily::boxcar;
    double t0 = 1.0;
    std::uint64_t seed = 0;
    double bound_c = 0.1;  // reporting constant for exp(-c n h eps^2)

    void validate() const;
};

struct TailResult {
    double empirical_tail = 0.0;
    double bound_value = 0.0;
    double expected_value = 0.0;
    long exceed_count = 0;
};

TailResult tail_probability(const TailExperimentConfig& config);

struct TailGridPoint {
    int n = 0;
    double h = 0.0;
    double nh_eps2 = 0.0;
    double empirical_tail = 0.0;
    double bound_value = 0.0;
};

struct TailGridResult {
    std::vector<TailGridPoint> points;
    double slope = 0.0;        // regression of log tail on n h eps^2
    double fitted_rate = 0.0;  // -slope
    int decreasing_adjacent = 0;
    int total_adjacent = 0;
};

/// Runs tail_probability over an n grid with h = h_const * n^{-1/3} and a
/// fixed epsilon, then fits the exponential envelope on the points with a
/// nonzero tail.
TailGridResult tail_grid(std::span<const int> n_values, double h_const,
                         const TailExperimentConfig& base);

// Frobenius-rate experiment: how fast the penalized estimator approaches
// the true precision matrix at t0 = 1 as n grows, with h ~ n^{-1/3} and
// lambda_n = lambda_const * sqrt(log n / n^{2/3}). Churn timing scales with
// n so the trajectory lives on the same time scale for every n.
struct RateTrajectoryShape {
    int p = 20;
    double base_diag = 0.25;
    int initial_edges = 20;
    int churn_count = 2;
    double churn_period_frac = 0.2;
    double weight_min = 0.1;
    double weight_max = 0.3;
};

struct RateExperimentConfig {
    std::vector<int> n_values{200, 400, 800, 1600};
    double lambda_const = 0.5;
    double h_const = 5.848;
    int replicates = 10;
    RateTrajectoryShape shape;
    KernelFamily family = KernelFamily::truncated_gaussian;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    int max_iter = 500;

    void validate() const;
};

struct RatePoint {
    int n = 0;
    double h = 0.0;
    double lambda = 0.0;
    double mean_error = 0.0;  // mean Frobenius distance to the truth
    double std_error = 0.0;
};

struct RateResult {
    std::vector<RatePoint> points;
    double loglog_slope = 0.0;  // regression of log mean error on log n
};

RateResult frobenius_rate(const RateExperimentConfig& config);

}  // namespace tvgl
