#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tvgl/devlab.hpp"
#include "tvgl/rng.hpp"

using namespace tvgl;

TEST_CASE("mgf at t = 0 is one") {
    CHECK(mgf_product_normals(0.0, 1.0, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(mgf_product_normals(0.0, 0.3, 2.5, -0.7) == doctest::Approx(1.0));
}

TEST_CASE("mgf closed form at rho = 0") {
    CHECK(mgf_product_normals(0.5, 1.0, 1.0, 0.0) ==
          doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("mgf is symmetric under (t, rho) -> (-t, -rho)") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const double si = rng.uniform(0.3, 1.5);
        const double sj = rng.uniform(0.3, 1.5);
        const double rho = rng.uniform(-0.9, 0.9);
        const double t = rng.uniform(-0.3, 0.3) / (si * sj);
        CHECK(mgf_product_normals(t, si, sj, rho) ==
              doctest::Approx(mgf_product_normals(-t, si, sj, -rho))
                  .epsilon(1e-12));
    }
}

TEST_CASE("mgf dominates exp(t sigma_ij), Jensen's inequality") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const double si = rng.uniform(0.3, 1.5);
        const double sj = rng.uniform(0.3, 1.5);
        const double rho = rng.uniform(-0.9, 0.9);
        const double t = rng.uniform(-0.4, 0.4) / (si * sj);
        CHECK(mgf_product_normals(t, si, sj, rho) >=
              std::exp(t * rho * si * sj) - 1e-12);
    }
}

TEST_CASE("mgf domain boundary raises") {
    // t (1 + rho) si sj = 1 is the singularity.
    CHECK_THROWS_AS(mgf_product_normals(1.0, 1.0, 1.0, 0.0), OutOfDomain);
    CHECK_THROWS_AS(mgf_product_normals(2.0, 1.0, 1.0, 0.5), OutOfDomain);
    CHECK_THROWS_AS(mgf_product_normals(-1.5, 1.0, 1.0, 0.0), OutOfDomain);
    CHECK_NOTHROW(mgf_product_normals(0.99, 1.0, 1.0, 0.0));
}

TEST_CASE("mgf matches a Monte-Carlo mean") {
    Rng rng(7);
    const double si = 1.0, sj = 1.0, rho = 0.5, t = 0.4;
    const double closed = mgf_product_normals(t, si, sj, rho);
    const long draws = 400000;
    double sum = 0.0, sumsq = 0.0;
    const double b = rho * sj;
    const double c = sj * std::sqrt(1.0 - rho * rho);
    for (long k = 0; k < draws; ++k) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        const double v = std::exp(t * (si * g1) * (b * g1 + c * g2));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / draws;
    const double se =
        std::sqrt((sumsq / draws - mean * mean) / static_cast<double>(draws));
    CHECK(std::abs(closed - mean) <= 3.0 * se);
}

TEST_CASE("bias of a constant curve vanishes") {
    const MatrixCurve curve = polynomial_entry_curve(2.5, 0.0, 0.0, 1.0);
    const std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
    for (const BiasPoint& pt :
         bias_curve(curve, 0, 0, 1.0, KernelFamily::boxcar, hs, 1000))
        CHECK(pt.abs_bias <= 1e-10);
}

TEST_CASE("bias of a linear curve is h/2 for a one-sided boxcar window") {
    const MatrixCurve curve = polynomial_entry_curve(1.0, 1.0, 0.0, 1.0);
    const std::vector<double> hs{0.4, 0.2, 0.1};
    const auto points =
        bias_curve(curve, 0, 0, 1.0, KernelFamily::boxcar, hs, 4000);
    for (const BiasPoint& pt : points)
        CHECK(pt.abs_bias == doctest::Approx(pt.h / 2.0).epsilon(0.01));
}

TEST_CASE("bias halves when h halves on a quadratic curve") {
    const MatrixCurve curve = polynomial_entry_curve(1.0, 0.5, 0.25, 1.0);
    const std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
    const auto points =
        bias_curve(curve, 0, 0, 1.0, KernelFamily::boxcar, hs, 2000);
    REQUIRE(points.size() == 4);
    for (std::size_t k = 1; k < points.size(); ++k) {
        const double ratio = points[k].abs_bias / points[k - 1].abs_bias;
        CHECK(ratio >= 0.4);
        CHECK(ratio <= 0.6);
    }
}

TEST_CASE("bias equals the exact window average for low-degree curves") {
    // Deterministic cross-check: for a boxcar window the smoother mean is
    // the plain average of the curve over the covered grid points.
    const double c0 = 0.8, c1 = -0.6;
    const MatrixCurve curve = polynomial_entry_curve(c0, c1, 0.0, 1.0);
    const int n = 500;
    const std::vector<double> hs{0.3, 0.12};
    const auto points =
        bias_curve(curve, 0, 0, 1.0, KernelFamily::boxcar, hs, n);
    for (std::size_t idx = 0; idx < hs.size(); ++idx) {
        double sum = 0.0;
        int count = 0;
        for (int k = 0; k < n; ++k) {
            const double t = static_cast<double>(k) / (n - 1);
            if (std::abs(t - 1.0) <= hs[idx]) {
                sum += c0 + c1 * (t - 1.0);
                ++count;
            }
        }
        const double expected = std::abs(sum / count - c0);
        CHECK(std::abs(points[idx].abs_bias - expected) <= 1e-10);
    }
}

TEST_CASE("bias propagates the empty window error") {
    const MatrixCurve curve = polynomial_entry_curve(1.0, 0.0, 0.0, 1.0);
    const std::vector<double> hs{1e-9};
    CHECK_THROWS_AS(
        bias_curve(curve, 0, 0, 0.25, KernelFamily::boxcar, hs, 3),
        EmptyWindow);
}

TEST_CASE("a huge epsilon gives an empty tail") {
    TailExperimentConfig config;
    config.n = 200;
    config.h = 0.4;
    config.epsilon = 50.0;
    config.replicates = 1000;
    config.curve = constant_curve(SymmetricMatrix::identity(1));
    config.seed = 1;
    const TailResult r = tail_probability(config);
    CHECK(r.exceed_count == 0);
    CHECK(r.empirical_tail == 0.0);
    CHECK(r.expected_value == doctest::Approx(1.0));
}

TEST_CASE("iid boxcar tails shrink with n and fit a negative envelope") {
    TailExperimentConfig base;
    base.epsilon = 0.25;
    base.replicates = 4000;
    base.curve = constant_curve(SymmetricMatrix::identity(1));
    base.entry_i = 0;
    base.entry_j = 0;
    base.family = KernelFamily::boxcar;
    base.seed = 3;
    const std::vector<int> ns{250, 1000, 2000};
    const TailGridResult grid = tail_grid(ns, 2.0, base);
    REQUIRE(grid.points.size() == 3);
    CHECK(grid.points.front().empirical_tail >
          grid.points.back().empirical_tail);
    CHECK(grid.slope < 0.0);
    CHECK(grid.fitted_rate > 0.0);
    CHECK(grid.decreasing_adjacent == grid.total_adjacent);
}

TEST_CASE("off-diagonal tail entries use the correlated pair") {
    SymmetricMatrix sigma(2);
    sigma.set(0, 0, 1.0);
    sigma.set(1, 1, 1.0);
    sigma.set(0, 1, 0.5);
    TailExperimentConfig config;
    config.n = 500;
    config.h = 0.5;
    config.epsilon = 0.2;
    config.replicates = 3000;
    config.curve = constant_curve(sigma);
    config.entry_i = 0;
    config.entry_j = 1;
    config.family = KernelFamily::boxcar;
    config.seed = 9;
    const TailResult r = tail_probability(config);
    CHECK(r.expected_value == doctest::Approx(0.5));
    CHECK(r.empirical_tail < 0.5);
}

TEST_CASE("rate experiment: consistency in the easy constant case") {
    RateExperimentConfig config;
    config.n_values = {250, 2000};
    config.lambda_const = 0.05;
    config.h_const = 2.0;
    config.replicates = 3;
    config.shape.p = 5;
    config.shape.initial_edges = 4;
    config.shape.churn_count = 0;  // constant trajectory
    config.seed = 2;
    const RateResult r = frobenius_rate(config);
    REQUIRE(r.points.size() == 2);
    CHECK(r.points[1].mean_error < r.points[0].mean_error);
    CHECK(r.points[1].mean_error < 0.6);
}

TEST_CASE("rate experiment validates its configuration") {
    RateExperimentConfig config;
    config.n_values = {400, 200};
    CHECK_THROWS_AS(frobenius_rate(config), ConfigError);
    config.n_values = {200};
    CHECK_THROWS_AS(frobenius_rate(config), ConfigError);
}
