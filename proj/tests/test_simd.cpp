#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tvgl/kernel.hpp"
#include "tvgl/rng.hpp"
#include "tvgl/simd/kernels.hpp"
#include "tvgl/timeseries.hpp"

using namespace tvgl;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-2.0, 2.0);
    return v;
}

struct BackendGuard {
    simd::Backend saved = simd::active_backend();
    ~BackendGuard() { simd::set_backend(saved); }
};

}  // namespace

TEST_CASE("scalar kernels match straightforward loops") {
    Rng rng(1);
    const auto x = random_vec(rng, 137);
    const auto y = random_vec(rng, 137);
    const auto w = random_vec(rng, 137);
    double dot_ref = 0.0, wdot_ref = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot_ref += x[i] * y[i];
        wdot_ref += w[i] * x[i] * y[i];
    }
    CHECK(simd::scalar::dot(x.data(), y.data(), x.size()) ==
          doctest::Approx(dot_ref).epsilon(1e-14));
    CHECK(simd::scalar::weighted_dot(w.data(), x.data(), y.data(), x.size()) ==
          doctest::Approx(wdot_ref).epsilon(1e-14));
}

TEST_CASE("vector backend agrees with the scalar reference") {
    if (!simd::backend_available(simd::Backend::avx2)) {
        MESSAGE("avx2 unavailable; dispatch stays scalar");
        return;
    }
    BackendGuard guard;
    Rng rng(2);
    for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 8ul, 31ul, 100ul, 1001ul,
                          10000ul}) {
        const auto x = random_vec(rng, n);
        const auto y = random_vec(rng, n);
        const auto w = random_vec(rng, n);
        auto yx = y;

        simd::set_backend(simd::Backend::scalar);
        const double dot_s = simd::dot(x.data(), y.data(), n);
        const double wdot_s =
            simd::weighted_dot(w.data(), x.data(), y.data(), n);
        auto axpy_s = y;
        simd::axpy(0.37, x.data(), axpy_s.data(), n);

        simd::set_backend(simd::Backend::avx2);
        const double dot_v = simd::dot(x.data(), y.data(), n);
        const double wdot_v =
            simd::weighted_dot(w.data(), x.data(), y.data(), n);
        auto axpy_v = yx;
        simd::axpy(0.37, x.data(), axpy_v.data(), n);

        CHECK(dot_v == doctest::Approx(dot_s).epsilon(1e-13));
        CHECK(wdot_v == doctest::Approx(wdot_s).epsilon(1e-13));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(axpy_v[i] == doctest::Approx(axpy_s[i]).epsilon(1e-13));
    }
}

TEST_CASE("backend selection is explicit and reversible") {
    BackendGuard guard;
    simd::set_backend(simd::Backend::scalar);
    CHECK(simd::active_backend() == simd::Backend::scalar);
    if (simd::backend_available(simd::Backend::avx2)) {
        simd::set_backend(simd::Backend::avx2);
        CHECK(simd::active_backend() == simd::Backend::avx2);
    }
}

TEST_CASE("smoothed covariance is backend independent") {
    if (!simd::backend_available(simd::Backend::avx2)) return;
    BackendGuard guard;
    Rng rng(5);
    const int n = 60, p = 7;
    std::vector<double> obs(static_cast<std::size_t>(n) * p);
    for (double& v : obs) v = rng.uniform(-1.0, 1.0);
    const TimeSeriesData data(n, p, obs, TimeSeriesData::default_grid(n));
    const KernelSpec spec{KernelFamily::truncated_gaussian, 0.5};

    simd::set_backend(simd::Backend::scalar);
    const CovarianceMatrix s1 = smoothed_covariance(data, 1.0, spec);
    simd::set_backend(simd::Backend::avx2);
    const CovarianceMatrix s2 = smoothed_covariance(data, 1.0, spec);
    CHECK(max_abs_diff(s1.matrix(), s2.matrix()) < 1e-12);
}
