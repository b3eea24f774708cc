#pragma once

#include <functional>
#include <span>
#include <string>

#include "tvgl/matrix.hpp"
#include "tvgl/simgen.hpp"

namespace tvgl {

// A matrix-valued curve on [0, 1] with optional analytic derivatives.
// Used as a precision curve Theta(t); the evaluator must return positive
// definite matrices wherever it is sampled in that role.
struct MatrixCurve {
    std::function<SymmetricMatrix(double)> value;
    std::function<SymmetricMatrix(double)> first_derivative;   // may be empty
    std::function<SymmetricMatrix(double)> second_derivative;  // may be empty
};

/// d/dt Sigma(t) = -Sigma Theta' Sigma for Sigma = Theta^{-1}.
SymmetricMatrix sigma_dot(const CovarianceMatrix& sigma,
                          const SymmetricMatrix& theta_dot);

/// d2/dt2 Sigma(t) = Sigma D Sigma with D = 2 Theta' Sigma Theta' - Theta''.
SymmetricMatrix sigma_ddot(const CovarianceMatrix& sigma,
                           const SymmetricMatrix& theta_dot,
                           const SymmetricMatrix& theta_ddot);

// Grid suprema of the covariance-smoothness quantities implied by a smooth
// precision curve, plus the bounds they are required to satisfy:
//   sup |sigma'_ij|  <= S0^2 sqrt(S1)
//   sup |sigma''_ij| <= 2 S0^3 S1 + S0^2 S2
// where S0 bounds the marginal standard deviations, S1 the quadruple sum
// of |theta' theta'| and S2 the double sum of |theta''|. A finite grid can
// only certify grid suprema, which is what the report states.
struct SmoothnessReport {
    double s0 = 0.0;
    double s1_quad = 0.0;   // sup of the quadruple sum
    double s1_proxy = 0.0;  // sup of (sum |theta'_kl|)^2; equals s1_quad
    double s2 = 0.0;        // only when a second derivative is supplied
    double sup_sigma_dot = 0.0;
    double sup_sigma_ddot = 0.0;
    double bound_first = 0.0;
    double bound_second = 0.0;
    bool has_second_order = false;
    bool first_bound_holds = false;
    bool second_bound_holds = false;
    std::size_t grid_size = 0;
};

SmoothnessReport smoothness_budget(const MatrixCurve& theta_curve,
                                   std::span<const double> grid);

std::string to_json_string(const SmoothnessReport& report);

/// Piecewise-linear precision curve through the trajectory steps; the first
/// derivative is the slope of the interval containing t (right-continuous),
/// exact away from churn boundaries.
MatrixCurve trajectory_curve(const GraphTrajectory& trajectory);

}  // namespace tvgl
