#pragma once

#include <cstddef>

// Internal declarations shared by the dispatcher and the AVX2 translation
// unit (which is compiled with -mavx2 -mfma only when the toolchain allows).

namespace tvgl::simd::avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n);
}  // namespace tvgl::simd::avx2
