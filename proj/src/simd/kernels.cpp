#include "tvgl/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "tvgl/errors.hpp"
#include "kernels_impl.hpp"

namespace tvgl::simd {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
    return acc;
}

}  // namespace scalar

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using WdotFn = double (*)(const double*, const double*, const double*,
                          std::size_t);

struct Dispatch {
    Backend backend = Backend::scalar;
    DotFn dot = &scalar::dot;
    AxpyFn axpy = &scalar::axpy;
    WdotFn weighted_dot = &scalar::weighted_dot;
};

bool avx2_usable() {
#if defined(TVGL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Dispatch make_dispatch(Backend b) {
    Dispatch d;
    d.backend = b;
#if defined(TVGL_HAVE_AVX2)
    if (b == Backend::avx2) {
        d.dot = &avx2::dot;
        d.axpy = &avx2::axpy;
        d.weighted_dot = &avx2::weighted_dot;
    }
#endif
    return d;
}

Backend startup_backend() {
    if (const char* env = std::getenv("TVGL_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_usable()) return Backend::avx2;
        return Backend::scalar;
    }
    return avx2_usable() ? Backend::avx2 : Backend::scalar;
}

Dispatch& dispatch() {
    static Dispatch d = make_dispatch(startup_backend());
    return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
    return avx2_usable();
}

void set_backend(Backend b) {
    if (!backend_available(b))
        throw Error(std::string("simd backend unavailable: ") + backend_name(b));
    dispatch() = make_dispatch(b);
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "?";
}

double dot(const double* x, const double* y, std::size_t n) {
    return dispatch().dot(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    dispatch().axpy(a, x, y, n);
}

double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n) {
    return dispatch().weighted_dot(w, x, y, n);
}

}  // namespace tvgl::simd
