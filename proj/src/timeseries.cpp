#include "tvgl/timeseries.hpp"

#include <algorithm>
#include <cmath>

namespace tvgl {

TimeSeriesData::TimeSeriesData(int n, int p,
                               std::vector<double> row_major_observations,
                               std::vector<double> times)
    : n_(n), p_(p), obs_(std::move(row_major_observations)),
      times_(std::move(times)) {
    if (n <= 0 || p <= 0)
        throw DimensionMismatch("time series needs n > 0 and p > 0");
    if (obs_.size() != static_cast<std::size_t>(n) * p)
        throw DimensionMismatch("observation buffer does not match n x p");
    if (times_.size() != static_cast<std::size_t>(n))
        throw DimensionMismatch("time grid does not match n");
    if (!std::all_of(obs_.begin(), obs_.end(),
                     [](double v) { return std::isfinite(v); }))
        throw Error("observations must be finite");
    for (std::size_t k = 0; k < times_.size(); ++k) {
        const double t = times_[k];
        if (!(t >= 0.0 && t <= 1.0))
            throw Error("times must lie in [0, 1]");
        if (k > 0 && !(times_[k - 1] < t))
            throw Error("times must be strictly increasing");
    }
}

std::vector<double> TimeSeriesData::default_grid(int n) {
    if (n <= 0) throw DimensionMismatch("grid size must be positive");
    if (n == 1) return {0.0};
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        t[static_cast<std::size_t>(k)] =
            static_cast<double>(k) / static_cast<double>(n - 1);
    return t;
}

}  // namespace tvgl
