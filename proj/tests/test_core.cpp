#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "tvgl/matrix.hpp"
#include "tvgl/rng.hpp"
#include "tvgl/simgen.hpp"

using namespace tvgl;

namespace {

SymmetricMatrix mat2(double a, double b, double c) {
    SymmetricMatrix m(2);
    m.set(0, 0, a);
    m.set(0, 1, b);
    m.set(1, 1, c);
    return m;
}

}  // namespace

TEST_CASE("symmetric matrix construction symmetrizes and validates") {
    const std::vector<double> raw{1.0, 2.0, 4.0, 3.0};
    const SymmetricMatrix m = SymmetricMatrix::from_row_major(2, raw);
    CHECK(m(0, 1) == doctest::Approx(3.0));
    CHECK(m(0, 1) == m(1, 0));

    const std::vector<double> bad{1.0, std::nan(""), 0.0, 1.0};
    CHECK_THROWS_AS(SymmetricMatrix::from_row_major(2, bad), Error);
    CHECK_THROWS_AS(SymmetricMatrix::from_row_major(3, raw),
                    DimensionMismatch);
}

TEST_CASE("cholesky of the identity is the identity") {
    const auto f = cholesky(SymmetricMatrix::identity(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(f(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("cholesky of a hand-checkable 2x2") {
    const auto f = cholesky(mat2(4.0, 2.0, 3.0));
    CHECK(f(0, 0) == doctest::Approx(2.0));
    CHECK(f(1, 0) == doctest::Approx(1.0));
    CHECK(f(1, 1) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("cholesky rejects an indefinite matrix") {
    CHECK(!try_cholesky(mat2(1.0, 2.0, 1.0)).has_value());  // eigenvalues 3, -1
    CHECK_THROWS_AS(cholesky(mat2(1.0, 2.0, 1.0)), NotPositiveDefinite);
}

TEST_CASE("cholesky reconstructs the input") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const SymmetricMatrix m = oracle::random_pd(rng, 6);
        const auto f = cholesky(m);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (int k = 0; k < 6; ++k) s += f(i, k) * f(j, k);
                CHECK(s == doctest::Approx(m(i, j)).epsilon(1e-12));
            }
    }
}

TEST_CASE("log_det examples") {
    CHECK(log_det(SymmetricMatrix::identity(5)) == doctest::Approx(0.0));
    const std::vector<double> d{2.0, 2.0};
    CHECK(log_det(SymmetricMatrix::diagonal(d)) ==
          doctest::Approx(2.0 * std::log(2.0)));
    CHECK(log_det(mat2(4.0, 2.0, 3.0)) == doctest::Approx(std::log(8.0)));
}

TEST_CASE("log_det equals the sum of log eigenvalues") {
    Rng rng(11);
    for (int p : {2, 5, 10}) {
        const SymmetricMatrix m = oracle::random_pd(rng, p);
        double s = 0.0;
        for (double ev : symmetric_eigenvalues(m)) s += std::log(ev);
        CHECK(log_det(m) == doctest::Approx(s).epsilon(1e-8));
    }
}

TEST_CASE("spd_inverse examples and residual") {
    const SymmetricMatrix id4 = SymmetricMatrix::identity(4);
    CHECK(max_abs_diff(spd_inverse(id4), id4) < 1e-14);

    const std::vector<double> d{2.0, 4.0};
    const SymmetricMatrix inv = spd_inverse(SymmetricMatrix::diagonal(d));
    CHECK(inv(0, 0) == doctest::Approx(0.5));
    CHECK(inv(1, 1) == doctest::Approx(0.25));

    Rng rng(3);
    const SymmetricMatrix m = oracle::random_pd(rng, 5);
    const SymmetricMatrix minv = spd_inverse(m);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            double s = 0.0;
            for (int k = 0; k < 5; ++k) s += m(i, k) * minv(k, j);
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
}

TEST_CASE("spd_inverse is an involution") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const SymmetricMatrix m = oracle::random_pd(rng, 8);
        CHECK(max_abs_diff(spd_inverse(spd_inverse(m)), m) <= 1e-8);
    }
}

TEST_CASE("eigen_extremes examples") {
    const std::vector<double> d{1.0, 3.0, 2.0};
    const auto [lo, hi] = eigen_extremes(SymmetricMatrix::diagonal(d));
    CHECK(lo == doctest::Approx(1.0));
    CHECK(hi == doctest::Approx(3.0));

    const auto [lo2, hi2] = eigen_extremes(mat2(0.0, 1.0, 0.0));
    CHECK(lo2 == doctest::Approx(-1.0));
    CHECK(hi2 == doctest::Approx(1.0));
}

TEST_CASE("eigen_extremes on a generated precision trajectory") {
    EvolutionConfig config;
    config.p = 50;
    config.steps = 3;
    config.initial_edges = 50;
    config.churn_count = 0;
    config.seed = 5;
    const GraphTrajectory trajectory = generate_trajectory(config);
    const auto [lo, hi] = eigen_extremes(trajectory.theta(0));
    CHECK(lo >= 0.25 - 1e-12);
    CHECK(hi > lo);
}

TEST_CASE("cholesky fails exactly when the smallest eigenvalue is negative") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        SymmetricMatrix m(4);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                m.set(i, j, rng.uniform(-1.0, 1.0) + (i == j ? 0.5 : 0.0));
        const double lambda_min = eigen_extremes(m).first;
        if (std::abs(lambda_min) < 1e-6) continue;  // stay off the boundary
        CHECK(try_cholesky(m).has_value() == (lambda_min > 0.0));
    }
}

TEST_CASE("covariance wrapper accepts PSD matrices near rank deficiency") {
    // Rank-1 outer product: PSD with zero eigenvalues.
    SymmetricMatrix m(3);
    const std::vector<double> z{1.0, -2.0, 0.5};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            m.set(i, j, z[static_cast<std::size_t>(i)] *
                            z[static_cast<std::size_t>(j)]);
    CHECK_NOTHROW(CovarianceMatrix{m});

    SymmetricMatrix neg = SymmetricMatrix::identity(2);
    neg.set(1, 1, -0.5);
    CHECK_THROWS_AS(CovarianceMatrix{neg}, NotPositiveDefinite);
}

TEST_CASE("precision wrapper requires strict positive definiteness") {
    CHECK_NOTHROW(PrecisionMatrix{SymmetricMatrix::identity(3)});
    SymmetricMatrix psd(2);
    psd.set(0, 0, 1.0);  // second eigenvalue is exactly zero
    CHECK_THROWS_AS(PrecisionMatrix{psd}, NotPositiveDefinite);
}

TEST_CASE("edge set invariants") {
    EdgeSet e(4);
    e.insert(2, 0);
    CHECK(e.contains(0, 2));
    e.insert(0, 2);
    CHECK(e.size() == 1);
    CHECK_THROWS_AS(e.insert(1, 1), Error);
    CHECK_THROWS_AS(e.insert(0, 7), DimensionMismatch);
    CHECK_THROWS_AS((EdgeSet{3, {{0, 1}, {1, 0}}}), Error);  // duplicate
}

TEST_CASE("time series validates its grid") {
    CHECK_THROWS_AS(TimeSeriesData(2, 1, {0.0, 1.0}, {0.5, 0.5}), Error);
    CHECK_THROWS_AS(TimeSeriesData(2, 1, {0.0, 1.0}, {0.0, 1.5}), Error);
    const std::vector<double> grid = TimeSeriesData::default_grid(5);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
    CHECK(TimeSeriesData::default_grid(1) == std::vector<double>{0.0});
}
