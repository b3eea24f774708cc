#pragma once

// Test-side oracles. These stay independent of the library code paths they
// are used to check: determinants, inverses and positive-definiteness for
// p <= 3 are computed from closed forms right here.

#include <array>
#include <cstddef>
#include <vector>

#include "tvgl/matrix.hpp"
#include "tvgl/rng.hpp"

namespace tvgl::oracle {

/// Random well-conditioned PD matrix: A A^T / p + ridge I with A uniform
/// in [-1, 1].
SymmetricMatrix random_pd(Rng& rng, int p, double ridge = 0.5);

/// Closed-form determinant, p <= 3.
double small_det(const SymmetricMatrix& m);

/// Leading-principal-minor PD test, p <= 3.
bool small_pd(const SymmetricMatrix& m);

/// Adjugate inverse, p <= 3.
SymmetricMatrix small_inverse(const SymmetricMatrix& m);

/// tr(Theta S) - log det Theta + lambda * pen(Theta) with the penalty over
/// the vectorized penalized entries; +inf when Theta is not PD.
double glasso_objective(const SymmetricMatrix& s, const SymmetricMatrix& theta,
                        double lambda, bool penalize_diagonal);

// Brute-force minimizer of the penalized log-determinant objective over the
// p(p+1)/2 free entries of a symmetric PD matrix, by nested grid refinement
// (recenter on the grid argmin, shrink, repeat). p <= 3.
struct BruteForceResult {
    SymmetricMatrix theta;
    double objective = 0.0;
};

BruteForceResult brute_force_glasso(const SymmetricMatrix& s, double lambda,
                                    bool penalize_diagonal,
                                    double entry_bound = 8.0,
                                    int grid_points = 9, int rounds = 22);

}  // namespace tvgl::oracle
