#include "tvgl/devlab.hpp"

#include <algorithm>
#include <cmath>

#include "tvgl/glasso.hpp"
#include "tvgl/parallel.hpp"
#include "tvgl/rng.hpp"
#include "tvgl/simd/kernels.hpp"
#include "tvgl/simgen.hpp"

namespace tvgl {

namespace {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool valid = false;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    LinearFit f;
    const std::size_t n = x.size();
    if (n < 2) return f;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.valid = true;
    return f;
}

}  // namespace

double mgf_product_normals(double t, double sigma_i, double sigma_j,
                           double rho) {
    if (!(sigma_i > 0.0) || !(sigma_j > 0.0))
        throw ConfigError("mgf_product_normals: standard deviations must be "
                          "positive");
    if (!(rho >= -1.0 && rho <= 1.0))
        throw ConfigError("mgf_product_normals: rho must lie in [-1, 1]");
    const double sij = rho * sigma_i * sigma_j;
    const double prod = sigma_i * sigma_j;
    const double f1 = 1.0 - t * (prod + sij);
    const double f2 = 1.0 + t * (prod - sij);
    if (!(f1 > 0.0) || !(f2 > 0.0))
        throw OutOfDomain("mgf_product_normals: t at or beyond the MGF "
                          "singularity");
    return 1.0 / std::sqrt(f1 * f2);
}

MatrixCurve constant_curve(const SymmetricMatrix& m) {
    const int p = m.dim();
    return MatrixCurve{[m](double) { return m; },
                       [p](double) { return SymmetricMatrix(p); },
                       [p](double) { return SymmetricMatrix(p); }};
}

MatrixCurve polynomial_entry_curve(double c0, double c1, double c2,
                                   double t_ref) {
    auto value = [=](double t) {
        SymmetricMatrix m(1);
        const double u = t - t_ref;
        m.set(0, 0, c0 + c1 * u + c2 * u * u);
        return m;
    };
    auto first = [=](double t) {
        SymmetricMatrix m(1);
        m.set(0, 0, c1 + 2.0 * c2 * (t - t_ref));
        return m;
    };
    auto second = [=](double) {
        SymmetricMatrix m(1);
        m.set(0, 0, 2.0 * c2);
        return m;
    };
    return MatrixCurve{value, first, second};
}

std::vector<BiasPoint> bias_curve(const MatrixCurve& sigma_curve, int entry_i,
                                  int entry_j, double t0, KernelFamily family,
                                  std::span<const double> h_values, int n) {
    if (!sigma_curve.value) throw ConfigError("bias_curve: curve required");
    const std::vector<double> times = TimeSeriesData::default_grid(n);
    std::vector<double> sigma_ij(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        sigma_ij[k] = sigma_curve.value(times[k])(entry_i, entry_j);
    const double target = sigma_curve.value(t0)(entry_i, entry_j);

    std::vector<BiasPoint> out;
    out.reserve(h_values.size());
    for (double h : h_values) {
        const std::vector<double> w =
            smoothing_weights(KernelSpec{family, h}, times, t0);
        double mean = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) mean += w[k] * sigma_ij[k];
        out.push_back(BiasPoint{h, std::abs(mean - target)});
    }
    return out;
}

void TailExperimentConfig::validate() const {
    if (n < 1) throw ConfigError("tail: n must be >= 1");
    if (!(h > 0.0)) throw ConfigError("tail: h must be positive");
    if (!(epsilon > 0.0)) throw ConfigError("tail: epsilon must be positive");
    if (replicates < 1) throw ConfigError("tail: replicates must be >= 1");
    if (!curve.value) throw ConfigError("tail: covariance curve required");
    if (entry_i < 0 || entry_j < 0)
        throw ConfigError("tail: entry indices must be nonnegative");
    if (!(t0 >= 0.0 && t0 <= 1.0)) throw ConfigError("tail: t0 must be in [0,1]");
}

TailResult tail_probability(const TailExperimentConfig& config) {
    config.validate();
    const int n = config.n;
    const bool diag = config.entry_i == config.entry_j;
    const std::vector<double> times = TimeSeriesData::default_grid(n);
    const std::vector<double> w = smoothing_weights(
        KernelSpec{config.family, config.h}, times, config.t0);

    // Per-step marginal parameters of the (Z_i, Z_j) pair.
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> b(static_cast<std::size_t>(n));
    std::vector<double> c(static_cast<std::size_t>(n));
    double expected = 0.0;
    for (int k = 0; k < n; ++k) {
        const SymmetricMatrix m = config.curve.value(times[static_cast<std::size_t>(k)]);
        const double sii = m(config.entry_i, config.entry_i);
        const double sjj = m(config.entry_j, config.entry_j);
        const double sij = m(config.entry_i, config.entry_j);
        if (!(sii > 0.0) || !(sjj > 0.0))
            throw NotPositiveDefinite("tail: marginal variances must be positive");
        expected += w[static_cast<std::size_t>(k)] * (diag ? sii : sij);
        a[static_cast<std::size_t>(k)] = std::sqrt(sii);
        if (!diag) {
            const double bk = sij / a[static_cast<std::size_t>(k)];
            b[static_cast<std::size_t>(k)] = bk;
            c[static_cast<std::size_t>(k)] =
                std::sqrt(std::max(sjj - bk * bk, 0.0));
        }
    }

    std::vector<char> exceed(static_cast<std::size_t>(config.replicates), 0);
    parallel_for(static_cast<std::size_t>(config.replicates), [&](std::size_t r) {
        Rng rng = Rng::substream(config.seed, stream_tag("tail"), r);
        std::vector<double> x(static_cast<std::size_t>(n));
        std::vector<double> y(static_cast<std::size_t>(n));
        if (diag) {
            for (int k = 0; k < n; ++k) {
                const double v = a[static_cast<std::size_t>(k)] * rng.normal();
                x[static_cast<std::size_t>(k)] = v;
                y[static_cast<std::size_t>(k)] = v;
            }
        } else {
            for (int k = 0; k < n; ++k) {
                const double g1 = rng.normal();
                const double g2 = rng.normal();
                x[static_cast<std::size_t>(k)] =
                    a[static_cast<std::size_t>(k)] * g1;
                y[static_cast<std::size_t>(k)] =
                    b[static_cast<std::size_t>(k)] * g1 +
                    c[static_cast<std::size_t>(k)] * g2;
            }
        }
        const double acc = simd::weighted_dot(w.data(), x.data(), y.data(),
                                              static_cast<std::size_t>(n));
        exceed[r] = std::abs(acc - expected) > config.epsilon ? 1 : 0;
    });

    TailResult result;
    result.exceed_count =
        std::count(exceed.begin(), exceed.end(), static_cast<char>(1));
    result.empirical_tail = static_cast<double>(result.exceed_count) /
                            static_cast<double>(config.replicates);
    result.bound_value = std::exp(-config.bound_c * n * config.h *
                                  config.epsilon * config.epsilon);
    result.expected_value = expected;
    return result;
}

TailGridResult tail_grid(std::span<const int> n_values, double h_const,
                         const TailExperimentConfig& base) {
    if (n_values.size() < 2)
        throw ConfigError("tail_grid: need at least two n values");
    TailGridResult grid;
    for (int n : n_values) {
        TailExperimentConfig cfg = base;
        cfg.n = n;
        cfg.h = h_const * std::pow(static_cast<double>(n), -1.0 / 3.0);
        cfg.seed = splitmix64(base.seed ^ static_cast<std::uint64_t>(n));
        const TailResult r = tail_probability(cfg);
        grid.points.push_back(TailGridPoint{
            n, cfg.h, n * cfg.h * cfg.epsilon * cfg.epsilon,
            r.empirical_tail, r.bound_value});
    }

    std::vector<double> xs, ys;
    for (const TailGridPoint& pt : grid.points)
        if (pt.empirical_tail > 0.0) {
            xs.push_back(pt.nh_eps2);
            ys.push_back(std::log(pt.empirical_tail));
        }
    const LinearFit f = least_squares(xs, ys);
    grid.slope = f.valid ? f.slope : 0.0;
    grid.fitted_rate = -grid.slope;

    for (std::size_t k = 1; k < grid.points.size(); ++k) {
        ++grid.total_adjacent;
        if (grid.points[k].empirical_tail <= grid.points[k - 1].empirical_tail)
            ++grid.decreasing_adjacent;
    }
    return grid;
}

void RateExperimentConfig::validate() const {
    if (n_values.size() < 2)
        throw ConfigError("rate: need at least two n values");
    for (std::size_t k = 1; k < n_values.size(); ++k)
        if (n_values[k] <= n_values[k - 1])
            throw ConfigError("rate: n values must be increasing");
    if (n_values.front() < 2) throw ConfigError("rate: n must be >= 2");
    if (replicates < 1) throw ConfigError("rate: replicates must be >= 1");
    if (!(lambda_const > 0.0) || !(h_const > 0.0))
        throw ConfigError("rate: lambda_const and h_const must be positive");
    if (!(shape.churn_period_frac > 0.0 && shape.churn_period_frac <= 1.0))
        throw ConfigError("rate: churn_period_frac must be in (0, 1]");
}

RateResult frobenius_rate(const RateExperimentConfig& config) {
    config.validate();
    RateResult result;
    for (int n : config.n_values) {
        EvolutionConfig ec;
        ec.p = config.shape.p;
        ec.steps = n;
        ec.base_diag = config.shape.base_diag;
        ec.initial_edges = config.shape.initial_edges;
        ec.churn_period = std::max(
            1, static_cast<int>(std::lround(config.shape.churn_period_frac *
                                            static_cast<double>(n))));
        ec.churn_count = config.shape.churn_count;
        ec.weight_min = config.shape.weight_min;
        ec.weight_max = config.shape.weight_max;
        // One trajectory seed for the whole grid: churn times scale with n,
        // so every n sees the same time-domain truth and the error trend
        // reflects n alone.
        ec.seed = splitmix64(config.seed ^ stream_tag("rate-trajectory"));
        const GraphTrajectory trajectory = generate_trajectory(ec);
        const SymmetricMatrix& theta_true = trajectory.theta(n - 1);

        const double h =
            config.h_const * std::pow(static_cast<double>(n), -1.0 / 3.0);
        const double lambda =
            config.lambda_const *
            std::sqrt(std::log(static_cast<double>(n)) /
                      std::pow(static_cast<double>(n), 2.0 / 3.0));

        std::vector<double> errors(static_cast<std::size_t>(config.replicates));
        parallel_for(
            static_cast<std::size_t>(config.replicates), [&](std::size_t r) {
                const std::uint64_t sample_seed = splitmix64(
                    config.seed ^ stream_tag("rate-sample") ^
                    (static_cast<std::uint64_t>(n) << 20) ^ r);
                const TimeSeriesData data = sample_data(trajectory, sample_seed);
                const CovarianceMatrix s = smoothed_covariance(
                    data, 1.0, KernelSpec{config.family, h});
                GlassoOptions options;
                options.tol = config.tol;
                options.max_iter = config.max_iter;
                const GlassoFit f =
                    fit(s, PenaltySpec{lambda, false}, options);
                double sq = 0.0;
                for (int i = 0; i < ec.p; ++i)
                    for (int j = 0; j < ec.p; ++j) {
                        const double d = f.theta(i, j) - theta_true(i, j);
                        sq += d * d;
                    }
                errors[r] = std::sqrt(sq);
            });

        double mean = 0.0;
        for (double e : errors) mean += e;
        mean /= static_cast<double>(config.replicates);
        double var = 0.0;
        for (double e : errors) var += (e - mean) * (e - mean);
        const double se =
            config.replicates > 1
                ? std::sqrt(var / (config.replicates *
                                   (config.replicates - 1.0)))
                : 0.0;
        result.points.push_back(RatePoint{n, h, lambda, mean, se});
    }

    std::vector<double> xs, ys;
    for (const RatePoint& pt : result.points)
        if (pt.mean_error > 0.0) {
            xs.push_back(std::log(static_cast<double>(pt.n)));
            ys.push_back(std::log(pt.mean_error));
        }
    const LinearFit f = least_squares(xs, ys);
    result.loglog_slope = f.valid ? f.slope : 0.0;
    return result;
}

}  // namespace tvgl
