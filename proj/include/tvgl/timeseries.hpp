#pragma once

#include <span>
#include <vector>

#include "tvgl/errors.hpp"

namespace tvgl {

// n observations of a p-vector on a strictly increasing time grid in [0,1].
// The default grid places observation k at k/(n-1).
class TimeSeriesData {
public:
    TimeSeriesData(int n, int p, std::vector<double> row_major_observations,
                   std::vector<double> times);

    static std::vector<double> default_grid(int n);

    int n() const { return n_; }
    int p() const { return p_; }

    std::span<const double> row(int k) const {
        return {obs_.data() + static_cast<std::size_t>(k) * p_,
                static_cast<std::size_t>(p_)};
    }
    double time(int k) const { return times_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& observations() const { return obs_; }

private:
    int n_ = 0;
    int p_ = 0;
    std::vector<double> obs_;  // row-major n x p
    std::vector<double> times_;
};

}  // namespace tvgl
