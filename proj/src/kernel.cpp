#include "tvgl/kernel.hpp"

#include <cmath>

#include "tvgl/simd/kernels.hpp"

namespace tvgl {

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "boxcar") return KernelFamily::boxcar;
    if (name == "epanechnikov") return KernelFamily::epanechnikov;
    if (name == "gaussian" || name == "truncated_gaussian")
        return KernelFamily::truncated_gaussian;
    throw ConfigError("unknown kernel family: " + name);
}

const char* to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::boxcar: return "boxcar";
        case KernelFamily::epanechnikov: return "epanechnikov";
        case KernelFamily::truncated_gaussian: return "truncated_gaussian";
    }
    return "?";
}

void KernelSpec::validate() const {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw ConfigError("kernel bandwidth must be positive and finite");
}

double kernel_value(const KernelSpec& spec, double v) {
    if (std::abs(v) > 1.0) return 0.0;
    switch (spec.family) {
        case KernelFamily::boxcar:
            return 0.5;
        case KernelFamily::epanechnikov:
            return 0.75 * (1.0 - v * v);
        case KernelFamily::truncated_gaussian:
            return std::exp(-0.5 * v * v);
    }
    return 0.0;
}

std::vector<double> smoothing_weights(const KernelSpec& spec,
                                      std::span<const double> times,
                                      double t0) {
    spec.validate();
    if (times.empty()) throw EmptyWindow("no observation times");
    std::vector<double> w(times.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        w[k] = kernel_value(spec, (times[k] - t0) / spec.bandwidth);
        sum += w[k];
    }
    if (!(sum > 0.0))
        throw EmptyWindow("all kernel weights are zero: bandwidth too small "
                          "for the time grid");
    for (double& v : w) v /= sum;
    return w;
}

CovarianceMatrix smoothed_covariance(const TimeSeriesData& data, double t0,
                                     const KernelSpec& spec) {
    const std::vector<double> w = smoothing_weights(spec, data.times(), t0);
    const int p = data.p();
    std::vector<double> s(static_cast<std::size_t>(p) * p, 0.0);
    for (int k = 0; k < data.n(); ++k) {
        const double wk = w[static_cast<std::size_t>(k)];
        if (wk == 0.0) continue;
        const std::span<const double> z = data.row(k);
        // Upper triangle of the rank-1 update w_k * z z^T, row by row.
        for (int i = 0; i < p; ++i) {
            simd::axpy(wk * z[static_cast<std::size_t>(i)],
                       z.data() + i,
                       s.data() + static_cast<std::size_t>(i) * p + i,
                       static_cast<std::size_t>(p - i));
        }
    }
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            s[static_cast<std::size_t>(j) * p + i] =
                s[static_cast<std::size_t>(i) * p + j];
    return CovarianceMatrix(SymmetricMatrix::from_row_major(p, s));
}

}  // namespace tvgl
