#pragma once

#include <span>
#include <string>
#include <vector>

#include "tvgl/matrix.hpp"
#include "tvgl/timeseries.hpp"

namespace tvgl {

enum class KernelFamily { boxcar, epanechnikov, truncated_gaussian };

KernelFamily kernel_family_from_string(const std::string& name);
const char* to_string(KernelFamily family);

// Smoothing kernel: a symmetric nonnegative weight function supported on
// [-1, 1], plus a bandwidth h that maps time offsets onto that support.
// The truncated Gaussian is the default: with bandwidths near 1 on a [0,1]
// grid it matches the untruncated Gaussian used in practice while keeping
// the compact support the theory asks for.
struct KernelSpec {
    KernelFamily family = KernelFamily::truncated_gaussian;
    double bandwidth = 1.0;

    void validate() const;
};

/// Kernel value at offset v: 0 for |v| > 1; boxcar 1/2, epanechnikov
/// (3/4)(1 - v^2), truncated Gaussian exp(-v^2/2) on [-1, 1].
double kernel_value(const KernelSpec& spec, double v);

/// Weights w_k = K((times[k] - t0)/h), normalized to sum to one.
/// Throws EmptyWindow when every raw weight vanishes.
std::vector<double> smoothing_weights(const KernelSpec& spec,
                                      std::span<const double> times,
                                      double t0);

/// Kernel-weighted second-moment matrix around t0:
///   S(t0) = sum_k w_k z_k z_k^T / sum_k w_k.
/// Observations are treated as zero-mean; no centering is applied.
CovarianceMatrix smoothed_covariance(const TimeSeriesData& data, double t0,
                                     const KernelSpec& spec);

}  // namespace tvgl
