#pragma once

#include <cstddef>

// Arithmetic kernels behind the hot loops: weighted second-moment
// accumulation, lasso coordinate descent and Monte-Carlo reductions.
// Every kernel has a scalar reference implementation and, on x86-64
// hardware with AVX2+FMA, a vectorized variant selected once at startup.
// The environment variable TVGL_SIMD=scalar|avx2 overrides the CPU probe.

namespace tvgl::simd {

enum class Backend { scalar, avx2 };

/// Backend the dispatcher currently routes to.
Backend active_backend();

/// True when the given backend can run on this build/CPU.
bool backend_available(Backend b);

/// Force a backend (tests use this to cross-check variants).
/// Throws tvgl::Error when the backend is unavailable.
void set_backend(Backend b);

const char* backend_name(Backend b);

/// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

/// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

/// sum_i w[i] * x[i] * y[i]
double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n);

// Reference implementations, callable directly regardless of dispatch.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n);
}  // namespace scalar

}  // namespace tvgl::simd
