#pragma once

#include <Eigen/Dense>

#include "bcoint/core.hpp"

namespace bcoint::classical {

struct OlsFit {
    Eigen::VectorXd coefficients;  ///< intercept first when requested
    Eigen::VectorXd residuals;
    double ssr = 0.0;
};

/// Least squares of y on the columns of X (plus an intercept column when
/// requested). Throws CollinearRegressors on rank deficiency.
OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, bool intercept);

struct AdfResult {
    double statistic = 0.0;   ///< t-ratio on the lagged level
    int selected_lags = 0;    ///< augmentation order chosen by BIC
    double pvalue_band = 0.5; ///< interpolated between tabulated quantiles
    bool reject = false;      ///< unit-root null rejected at `level`
    double critical_value = 0.0;
    int n_vars = 1;           ///< size of the cointegration system behind the series
    bool demeaned = false;    ///< cointegrating regression carried an intercept
};

/// Augmented Dickey-Fuller regression on a residual series:
///   dR_t = gamma R_{t-1} + sum_i xi_i dR_{t-i} + e_t
/// with no deterministic terms (those live in the cointegrating regression).
/// The augmentation order is picked by BIC over 0..k_max on a common sample,
/// then the statistic is refit on the longest sample for that order.
/// `n_vars` and `demeaned` select the critical-value table.
AdfResult adf_test(const Eigen::VectorXd& series, int k_max, double level, int n_vars = 1,
                   bool demeaned = false);

/// Residual-based critical value at `level` for a system of n_vars series,
/// interpolated from the embedded response-surface table.
double critical_value(double level, int n_vars, bool demeaned, int T);

/// Two-stage Engle-Granger test: OLS for beta2_hat, ADF on the fitted
/// residuals; cointegrated when the unit-root null is rejected.
TestResult engle_granger_test(const Dataset& data, const RegressionSpec& spec);

}  // namespace bcoint::classical
