#pragma once

#include <optional>
#include <string>

#include "tvgl/edge_set.hpp"
#include "tvgl/glasso.hpp"
#include "tvgl/matrix.hpp"

namespace tvgl {

/// Predictive risk R(Sigma) = tr(Sigma^{-1} Sigma0) + log|Sigma|,
/// the expected negative log-likelihood under Sigma0 up to a constant.
double predictive_risk(const CovarianceMatrix& sigma,
                       const CovarianceMatrix& sigma0);

/// Same functional with the smoothed sample covariance in place of Sigma0.
double empirical_risk(const CovarianceMatrix& sigma,
                      const CovarianceMatrix& s_hat);

/// |F delta F_hat|: number of edges present in exactly one set.
std::size_t graph_loss(const EdgeSet& f_true, const EdgeSet& f_est);

// Precision is undefined when no edges are predicted; recall is undefined
// when the true edge set is empty. The distinction matters: at the sparse
// end of a regularization path no edges are predicted at all, which is not
// the same as predicting wrong ones.
struct PrecisionRecall {
    std::optional<double> precision;
    std::optional<double> recall;
};

PrecisionRecall precision_recall(const EdgeSet& f_true, const EdgeSet& f_est);

/// Penalized fit with the true covariance in place of the empirical one;
/// minimizes the predictive risk plus the l1 penalty.
GlassoFit oracle_fit(const CovarianceMatrix& sigma0, const PenaltySpec& penalty,
                     const GlassoOptions& options = {});

// One evaluated point of a regularization path.
struct RiskReport {
    double lambda = 0.0;
    double l1_norm = 0.0;  // penalized entries of theta
    std::size_t edge_count = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> predictive_risk;  // needs the true covariance
    double empirical_risk = 0.0;
};

/// CSV columns: lambda,l1_norm,edge_count,precision,recall,predictive_risk,
/// empirical_risk. Undefined fields become empty cells.
std::string risk_report_csv_header();
std::string risk_report_csv_row(const RiskReport& report);

}  // namespace tvgl
