#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcoint/errors.hpp"

namespace bcoint {

/// Observed multivariate series Z_{1:T}: rows are time points, columns are
/// series. One column is the regressand Y_t, the rest are the regressors
/// X_t of the cointegrating regression. Immutable after construction.
class Dataset {
public:
    /// Throws InsufficientData when T < n + 3, MissingDataError on
    /// non-finite entries, DimensionError on an invalid regressand index.
    Dataset(Eigen::MatrixXd values, std::vector<std::string> labels, int regressand_index = 0);

    int T() const { return static_cast<int>(values_.rows()); }
    int n() const { return static_cast<int>(values_.cols()); }
    int regressand_index() const { return regressand_index_; }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Regressand column y (length T).
    Eigen::VectorXd y() const { return values_.col(regressand_index_); }

    /// Regressor columns, T x (n-1), original column order preserved.
    Eigen::MatrixXd X() const;

    /// Copy with a different regressand column (selected by label).
    Dataset with_regressand(const std::string& label) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> labels_;
    int regressand_index_ = 0;
};

enum class Method {
    Ar1BayesFactor,
    Ar1Credible,
    GibbsFixedOrder,
    RjMcmc,
    EngleGranger,
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Configuration of a single cointegration test run. `alpha_level` is the
/// posterior tail-mass threshold for credible tests (in (0,1)) or the
/// Bayes-factor decision threshold (any positive real).
struct RegressionSpec {
    bool intercept = true;
    Method method = Method::RjMcmc;
    std::optional<int> order;  ///< fixed residual order, GibbsFixedOrder only
    int k_max = 5;
    double alpha_level = 0.05;

    void validate() const;  ///< throws DimensionError on inconsistent fields
};

/// Residual series R_t(beta2) together with the coefficients that induced it.
struct ResidualSeries {
    Eigen::VectorXd r;
    Eigen::VectorXd beta2;
    std::optional<double> intercept_value;
};

enum class Verdict { Cointegrated, NotCointegrated };

/// Decision object for every test in the library. The verdict is a pure
/// function of (statistic, threshold, method): a Bayes factor K >= threshold
/// means not cointegrated; a posterior tail mass <= threshold (and an ADF
/// statistic below its critical value) means cointegrated.
struct TestResult {
    Verdict verdict = Verdict::NotCointegrated;
    double statistic = 0.0;
    double threshold = 0.0;
    Method method = Method::RjMcmc;
    std::map<std::string, double> diagnostics;
};

/// Apply the decision rule shared by all methods.
Verdict decide(Method method, double statistic, double threshold);

/// R_t = y_t - beta2' x_t - alpha for every t. `beta2` must have length n-1.
ResidualSeries build_residuals(const Dataset& data, const Eigen::VectorXd& beta2,
                               std::optional<double> intercept = std::nullopt);

/// First differences: output[t] = series[t+1] - series[t], length T-1.
Eigen::VectorXd first_differences(const Eigen::VectorXd& series);

}  // namespace bcoint
