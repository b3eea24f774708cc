#include "tvgl/risk.hpp"

#include <sstream>

#include "tvgl/io.hpp"
#include "tvgl/simd/kernels.hpp"

namespace tvgl {

namespace {

double risk_functional(const CovarianceMatrix& sigma,
                       const SymmetricMatrix& reference) {
    if (sigma.dim() != reference.dim())
        throw DimensionMismatch("risk: dimension mismatch");
    const SymmetricMatrix theta = spd_inverse(sigma.matrix());
    double tr = 0.0;
    for (int i = 0; i < sigma.dim(); ++i)
        tr += simd::dot(theta.row(i), reference.row(i),
                        static_cast<std::size_t>(sigma.dim()));
    return tr + log_det(sigma.matrix());
}

}  // namespace

double predictive_risk(const CovarianceMatrix& sigma,
                       const CovarianceMatrix& sigma0) {
    return risk_functional(sigma, sigma0.matrix());
}

double empirical_risk(const CovarianceMatrix& sigma,
                      const CovarianceMatrix& s_hat) {
    return risk_functional(sigma, s_hat.matrix());
}

std::size_t graph_loss(const EdgeSet& f_true, const EdgeSet& f_est) {
    return f_true.symmetric_difference_size(f_est);
}

PrecisionRecall precision_recall(const EdgeSet& f_true, const EdgeSet& f_est) {
    if (f_true.dim() != f_est.dim())
        throw DimensionMismatch("precision_recall: dimension mismatch");
    const double common =
        static_cast<double>(f_true.intersection_size(f_est));
    PrecisionRecall pr;
    if (!f_est.empty())
        pr.precision = common / static_cast<double>(f_est.size());
    if (!f_true.empty())
        pr.recall = common / static_cast<double>(f_true.size());
    return pr;
}

GlassoFit oracle_fit(const CovarianceMatrix& sigma0, const PenaltySpec& penalty,
                     const GlassoOptions& options) {
    return fit(sigma0, penalty, options);
}

std::string risk_report_csv_header() {
    return "lambda,l1_norm,edge_count,precision,recall,predictive_risk,"
           "empirical_risk";
}

std::string risk_report_csv_row(const RiskReport& report) {
    std::ostringstream out;
    out << format_double(report.lambda) << ','
        << format_double(report.l1_norm) << ',' << report.edge_count << ',';
    if (report.precision) out << format_double(*report.precision);
    out << ',';
    if (report.recall) out << format_double(*report.recall);
    out << ',';
    if (report.predictive_risk) out << format_double(*report.predictive_risk);
    out << ',' << format_double(report.empirical_risk);
    return out.str();
}

}  // namespace tvgl
