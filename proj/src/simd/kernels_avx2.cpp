#include <immintrin.h>

#include <cstddef>

#include "kernels_impl.hpp"

// AVX2 + FMA variants. Loads are unaligned; remainders run scalar.
// Results differ from the scalar reference only by reassociation of the
// accumulation order, which the equivalence tests bound.

namespace tvgl::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                               acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                               _mm256_loadu_pd(y + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                               acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_pd(
            y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                   _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(
            y + i + 4, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4),
                                       _mm256_loadu_pd(y + i + 4)));
    }
    if (i + 4 <= n) {
        _mm256_storeu_pd(
            y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                   _mm256_loadu_pd(y + i)));
        i += 4;
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                   _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), xy, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * x[i] * y[i];
    return s;
}

}  // namespace tvgl::simd::avx2
