#include "bcoint/core.hpp"

#include <algorithm>
#include <cmath>

namespace bcoint {

Dataset::Dataset(Eigen::MatrixXd values, std::vector<std::string> labels, int regressand_index)
    : values_(std::move(values)), labels_(std::move(labels)), regressand_index_(regressand_index) {
    const int T = static_cast<int>(values_.rows());
    const int n = static_cast<int>(values_.cols());
    if (n < 1) throw DimensionError("dataset needs at least one series");
    if (regressand_index_ < 0 || regressand_index_ >= n)
        throw DimensionError("regressand index " + std::to_string(regressand_index_) +
                             " out of range for " + std::to_string(n) + " series");
    if (T < n + 3)
        throw InsufficientData("need T >= n + 3 observations, got T=" + std::to_string(T) +
                               " with n=" + std::to_string(n));
    if (!values_.allFinite()) throw MissingDataError("dataset contains non-finite values");
    if (labels_.empty()) {
        for (int j = 0; j < n; ++j) labels_.push_back("series" + std::to_string(j));
    }
    if (static_cast<int>(labels_.size()) != n)
        throw DimensionError("label count does not match series count");
}

Eigen::MatrixXd Dataset::X() const {
    Eigen::MatrixXd out(T(), n() - 1);
    int col = 0;
    for (int j = 0; j < n(); ++j) {
        if (j == regressand_index_) continue;
        out.col(col++) = values_.col(j);
    }
    return out;
}

Dataset Dataset::with_regressand(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw DimensionError("no series named '" + label + "'");
    return Dataset(values_, labels_, static_cast<int>(it - labels_.begin()));
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Ar1BayesFactor: return "ar1-bf";
        case Method::Ar1Credible: return "ar1-credible";
        case Method::GibbsFixedOrder: return "gibbs";
        case Method::RjMcmc: return "rjmcmc";
        case Method::EngleGranger: return "engle-granger";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "ar1-bf") return Method::Ar1BayesFactor;
    if (name == "ar1-credible") return Method::Ar1Credible;
    if (name == "gibbs") return Method::GibbsFixedOrder;
    if (name == "rjmcmc") return Method::RjMcmc;
    if (name == "engle-granger") return Method::EngleGranger;
    throw DimensionError("unknown method '" + name + "'");
}

void RegressionSpec::validate() const {
    if (method == Method::GibbsFixedOrder) {
        if (!order) throw DimensionError("GibbsFixedOrder requires a fixed order");
        if (*order < 1 || *order > k_max)
            throw DimensionError("order must lie in [1, k_max]");
    }
    if (k_max < 0) throw DimensionError("k_max must be non-negative");
    const bool credible = method == Method::Ar1Credible || method == Method::GibbsFixedOrder ||
                          method == Method::RjMcmc || method == Method::EngleGranger;
    if (credible && (alpha_level <= 0.0 || alpha_level >= 1.0))
        throw DimensionError("alpha_level must lie in (0,1) for credible tests");
    if (method == Method::Ar1BayesFactor && alpha_level <= 0.0)
        throw DimensionError("Bayes-factor threshold must be positive");
}

Verdict decide(Method method, double statistic, double threshold) {
    switch (method) {
        case Method::Ar1BayesFactor:
            return statistic >= threshold ? Verdict::NotCointegrated : Verdict::Cointegrated;
        case Method::Ar1Credible:
        case Method::GibbsFixedOrder:
        case Method::RjMcmc:
            return statistic <= threshold ? Verdict::Cointegrated : Verdict::NotCointegrated;
        case Method::EngleGranger:
            // ADF t-ratio below the critical value rejects the unit-root null.
            return statistic < threshold ? Verdict::Cointegrated : Verdict::NotCointegrated;
    }
    return Verdict::NotCointegrated;
}

ResidualSeries build_residuals(const Dataset& data, const Eigen::VectorXd& beta2,
                               std::optional<double> intercept) {
    if (beta2.size() != data.n() - 1)
        throw DimensionError("beta2 must have length n-1 = " + std::to_string(data.n() - 1) +
                             ", got " + std::to_string(beta2.size()));
    const double alpha = intercept.value_or(0.0);
    ResidualSeries out;
    out.beta2 = beta2;
    out.intercept_value = intercept;
    out.r = data.y() - data.X() * beta2;
    out.r.array() -= alpha;
    return out;
}

Eigen::VectorXd first_differences(const Eigen::VectorXd& series) {
    if (series.size() < 2) throw InsufficientData("need at least two points to difference");
    return series.tail(series.size() - 1) - series.head(series.size() - 1);
}

}  // namespace bcoint
