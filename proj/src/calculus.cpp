#include "tvgl/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "tvgl/simd/kernels.hpp"

namespace tvgl {

namespace {

// C = A * B for dense row-major square blocks.
std::vector<double> matmul(const std::vector<double>& a,
                           const std::vector<double>& b, int p) {
    std::vector<double> c(static_cast<std::size_t>(p) * p, 0.0);
    for (int i = 0; i < p; ++i) {
        const double* arow = a.data() + static_cast<std::size_t>(i) * p;
        double* crow = c.data() + static_cast<std::size_t>(i) * p;
        for (int k = 0; k < p; ++k)
            simd::axpy(arow[k], b.data() + static_cast<std::size_t>(k) * p,
                       crow, static_cast<std::size_t>(p));
    }
    return c;
}

std::vector<double> to_dense(const SymmetricMatrix& m) {
    return m.entries();
}

void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw DimensionMismatch(what);
}

}  // namespace

SymmetricMatrix sigma_dot(const CovarianceMatrix& sigma,
                          const SymmetricMatrix& theta_dot) {
    require_same_dim(sigma.dim(), theta_dot.dim(),
                     "sigma_dot: dimension mismatch");
    const int p = sigma.dim();
    const std::vector<double> s = to_dense(sigma.matrix());
    std::vector<double> out = matmul(matmul(s, to_dense(theta_dot), p), s, p);
    for (double& v : out) v = -v;
    return SymmetricMatrix::from_row_major(p, out);
}

SymmetricMatrix sigma_ddot(const CovarianceMatrix& sigma,
                           const SymmetricMatrix& theta_dot,
                           const SymmetricMatrix& theta_ddot) {
    require_same_dim(sigma.dim(), theta_dot.dim(),
                     "sigma_ddot: dimension mismatch");
    require_same_dim(sigma.dim(), theta_ddot.dim(),
                     "sigma_ddot: dimension mismatch");
    const int p = sigma.dim();
    const std::vector<double> s = to_dense(sigma.matrix());
    const std::vector<double> td = to_dense(theta_dot);
    // D = 2 Theta' Sigma Theta' - Theta''
    std::vector<double> d = matmul(matmul(td, s, p), td, p);
    const std::vector<double> tdd = to_dense(theta_ddot);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = 2.0 * d[i] - tdd[i];
    return SymmetricMatrix::from_row_major(p, matmul(matmul(s, d, p), s, p));
}

SmoothnessReport smoothness_budget(const MatrixCurve& theta_curve,
                                   std::span<const double> grid) {
    if (!theta_curve.value)
        throw MissingDerivatives("smoothness_budget: curve has no evaluator");
    if (!theta_curve.first_derivative)
        throw MissingDerivatives(
            "smoothness_budget: analytic first derivative required");
    if (grid.empty()) throw ConfigError("smoothness_budget: empty grid");

    SmoothnessReport report;
    report.grid_size = grid.size();
    report.has_second_order = static_cast<bool>(theta_curve.second_derivative);

    for (double t : grid) {
        const SymmetricMatrix theta = theta_curve.value(t);
        const CovarianceMatrix sigma(spd_inverse(theta));
        const SymmetricMatrix theta_d = theta_curve.first_derivative(t);

        for (int i = 0; i < sigma.dim(); ++i)
            report.s0 = std::max(report.s0, std::sqrt(sigma(i, i)));

        double abs_sum = 0.0;
        for (double v : theta_d.entries()) abs_sum += std::abs(v);
        // The quadruple sum over |theta'_ki theta'_lj| factorizes exactly
        // into the squared entrywise l1 norm.
        report.s1_proxy = std::max(report.s1_proxy, abs_sum * abs_sum);
        report.s1_quad = report.s1_proxy;

        report.sup_sigma_dot =
            std::max(report.sup_sigma_dot, sigma_dot(sigma, theta_d).max_abs());

        if (report.has_second_order) {
            const SymmetricMatrix theta_dd = theta_curve.second_derivative(t);
            double dd_sum = 0.0;
            for (double v : theta_dd.entries()) dd_sum += std::abs(v);
            report.s2 = std::max(report.s2, dd_sum);
            report.sup_sigma_ddot =
                std::max(report.sup_sigma_ddot,
                         sigma_ddot(sigma, theta_d, theta_dd).max_abs());
        }
    }

    report.bound_first = report.s0 * report.s0 * std::sqrt(report.s1_quad);
    report.first_bound_holds = report.sup_sigma_dot <= report.bound_first;
    if (report.has_second_order) {
        const double s0 = report.s0;
        report.bound_second =
            2.0 * s0 * s0 * s0 * report.s1_quad + s0 * s0 * report.s2;
        report.second_bound_holds =
            report.sup_sigma_ddot <= report.bound_second;
    }
    return report;
}

std::string to_json_string(const SmoothnessReport& r) {
    nlohmann::json j{{"s0", r.s0},
                     {"s1_quad", r.s1_quad},
                     {"s1_proxy", r.s1_proxy},
                     {"sup_sigma_dot", r.sup_sigma_dot},
                     {"bound_first", r.bound_first},
                     {"first_bound_holds", r.first_bound_holds},
                     {"grid_size", r.grid_size},
                     {"has_second_order", r.has_second_order}};
    if (r.has_second_order) {
        j["s2"] = r.s2;
        j["sup_sigma_ddot"] = r.sup_sigma_ddot;
        j["bound_second"] = r.bound_second;
        j["second_bound_holds"] = r.second_bound_holds;
    }
    return j.dump(2);
}

MatrixCurve trajectory_curve(const GraphTrajectory& trajectory) {
    const int last = trajectory.steps() - 1;
    if (last < 1)
        throw ConfigError("trajectory_curve needs at least two steps");
    // Steps sit on the uniform grid k/last.
    auto locate = [last](double t) {
        const int k = std::clamp(static_cast<int>(std::floor(t * last)), 0,
                                 last - 1);
        return k;
    };
    auto value = [&trajectory, last, locate](double t) {
        const int k = locate(t);
        const double u = t * last - k;
        const SymmetricMatrix& a = trajectory.theta(k);
        const SymmetricMatrix& b = trajectory.theta(k + 1);
        SymmetricMatrix out(a.dim());
        for (int i = 0; i < a.dim(); ++i)
            for (int j = i; j < a.dim(); ++j)
                out.set(i, j, (1.0 - u) * a(i, j) + u * b(i, j));
        return out;
    };
    auto deriv = [&trajectory, last, locate](double t) {
        const int k = locate(t);
        const SymmetricMatrix& a = trajectory.theta(k);
        const SymmetricMatrix& b = trajectory.theta(k + 1);
        SymmetricMatrix out(a.dim());
        for (int i = 0; i < a.dim(); ++i)
            for (int j = i; j < a.dim(); ++j)
                out.set(i, j, (b(i, j) - a(i, j)) * last);
        return out;
    };
    return MatrixCurve{value, deriv, nullptr};
}

}  // namespace tvgl
