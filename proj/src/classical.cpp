#include "bcoint/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace bcoint::classical {

namespace {

// Response-surface constants for residual-based cointegration critical
// values, MacKinnon (2010): cv(T) = b_inf + b1/T + b2/T^2, rows ordered
// 1%, 5%, 10%. The "demeaned" table applies when the cointegrating
// regression carries an intercept; the raw table covers a plain no-constant
// Dickey-Fuller test of a single series. For a no-constant cointegrating
// regression with n >= 2 the demeaned (stricter) surface is used as a
// conservative stand-in, since no published surface covers that variant.
struct Surface {
    double b_inf, b1, b2;
};

constexpr std::array<std::array<Surface, 3>, 4> kTauC = {{
    {{{-3.43035, -6.5393, -16.786}, {-2.86154, -2.8903, -4.234}, {-2.56677, -1.5384, -2.809}}},
    {{{-3.89644, -10.9519, -33.527}, {-3.33613, -6.1101, -6.823}, {-3.04445, -4.2412, -2.720}}},
    {{{-4.29374, -14.4354, -33.195}, {-3.74066, -8.5632, -10.852}, {-3.45218, -6.2143, -3.718}}},
    {{{-4.64332, -18.7889, -49.793}, {-4.09600, -11.2699, -21.313}, {-3.81020, -8.4324, -9.284}}},
}};

constexpr std::array<Surface, 3> kTauNc = {
    {{-2.56574, -2.2358, -3.627}, {-1.94100, -0.2686, -3.365}, {-1.61682, 0.2656, -2.714}}};

constexpr std::array<double, 3> kLevels = {0.01, 0.05, 0.10};

std::array<double, 3> tabulated_cvs(int n_vars, bool demeaned, int T) {
    std::array<double, 3> cv{};
    const double t = static_cast<double>(T);
    if (!demeaned && n_vars <= 1) {
        for (int i = 0; i < 3; ++i)
            cv[i] = kTauNc[i].b_inf + kTauNc[i].b1 / t + kTauNc[i].b2 / (t * t);
        return cv;
    }
    const int row = std::clamp(n_vars, 1, static_cast<int>(kTauC.size())) - 1;
    for (int i = 0; i < 3; ++i) {
        const Surface& s = kTauC[row][i];
        cv[i] = s.b_inf + s.b1 / t + s.b2 / (t * t);
    }
    return cv;
}

double interpolate(double x, double x0, double x1, double y0, double y1) {
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

double critical_value(double level, int n_vars, bool demeaned, int T) {
    const auto cv = tabulated_cvs(n_vars, demeaned, T);
    if (level <= kLevels[1]) return interpolate(level, kLevels[0], kLevels[1], cv[0], cv[1]);
    return interpolate(level, kLevels[1], kLevels[2], cv[1], cv[2]);
}

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, bool intercept) {
    const int rows = static_cast<int>(y.size());
    const int cols = static_cast<int>(X.cols()) + (intercept ? 1 : 0);
    if (X.rows() != rows) throw DimensionError("ols: y and X row counts differ");
    if (rows <= cols) throw InsufficientData("ols: need more rows than columns");

    Eigen::MatrixXd design(rows, cols);
    int at = 0;
    if (intercept) design.col(at++).setOnes();
    design.rightCols(X.cols()) = X;

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols) throw CollinearRegressors("ols: design matrix is rank deficient");

    OlsFit fit;
    fit.coefficients = qr.solve(y);
    fit.residuals = y - design * fit.coefficients;
    fit.ssr = fit.residuals.squaredNorm();
    return fit;
}

namespace {

struct AdfFit {
    double t_ratio = 0.0;
    double ssr = 0.0;
    int n_obs = 0;
};

/// Fit dR_t = gamma R_{t-1} + sum_{i<=p} xi_i dR_{t-i} + e with the first
/// `skip` observations of dR held out (common-sample BIC comparison).
AdfFit fit_adf_regression(const Eigen::VectorXd& r, int p, int skip) {
    const Eigen::VectorXd dr = first_differences(r);  // dr(i) = r(i+1) - r(i)
    const int n_obs = static_cast<int>(dr.size()) - skip;
    const int cols = 1 + p;
    if (n_obs <= cols + 1) throw InsufficientData("adf: series too short for lag order");

    Eigen::MatrixXd design(n_obs, cols);
    Eigen::VectorXd target(n_obs);
    for (int i = 0; i < n_obs; ++i) {
        const int t = skip + i;        // index into dr; response is dr(t) = r(t+1)-r(t)
        target(i) = dr(t);
        design(i, 0) = r(t);           // lagged level R_{t-1} in 1-indexed terms
        for (int j = 1; j <= p; ++j) design(i, j) = dr(t - j);
    }

    const Eigen::MatrixXd xtx = design.transpose() * design;
    const Eigen::LLT<Eigen::MatrixXd> llt(xtx);
    if (llt.info() != Eigen::Success)
        throw CollinearRegressors("adf: singular design (constant residual series?)");
    const Eigen::VectorXd coef = llt.solve(design.transpose() * target);
    const Eigen::VectorXd resid = target - design * coef;

    AdfFit fit;
    fit.ssr = resid.squaredNorm();
    fit.n_obs = n_obs;
    const double sigma2 = fit.ssr / (n_obs - cols);
    const double var_gamma = sigma2 * llt.solve(Eigen::MatrixXd::Identity(cols, cols))(0, 0);
    if (!(var_gamma > 0.0)) throw NumericalError("adf: non-positive coefficient variance");
    fit.t_ratio = coef(0) / std::sqrt(var_gamma);
    return fit;
}

}  // namespace

AdfResult adf_test(const Eigen::VectorXd& series, int k_max, double level, int n_vars,
                   bool demeaned) {
    if (k_max < 0) throw DimensionError("adf: negative lag bound");
    if (static_cast<int>(series.size()) <= k_max + 10)
        throw InsufficientData("adf: need length > k_max + 10");

    // Select p on a common estimation sample so the BIC values are comparable.
    int best_p = 0;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= k_max; ++p) {
        const AdfFit fit = fit_adf_regression(series, p, k_max);
        const double n = static_cast<double>(fit.n_obs);
        const double bic = n * std::log(fit.ssr / n) + (p + 1) * std::log(n);
        if (bic < best_bic) {
            best_bic = bic;
            best_p = p;
        }
    }

    const AdfFit chosen = fit_adf_regression(series, best_p, best_p);
    AdfResult out;
    out.statistic = chosen.t_ratio;
    out.selected_lags = best_p;
    out.n_vars = n_vars;
    out.demeaned = demeaned;
    out.critical_value = critical_value(level, n_vars, demeaned, chosen.n_obs);

    const auto cv = tabulated_cvs(n_vars, demeaned, chosen.n_obs);
    double p_value;
    if (out.statistic <= cv[1])
        p_value = interpolate(out.statistic, cv[0], cv[1], kLevels[0], kLevels[1]);
    else
        p_value = interpolate(out.statistic, cv[1], cv[2], kLevels[1], kLevels[2]);
    out.pvalue_band = std::clamp(p_value, 0.001, 0.999);
    out.reject = out.statistic < out.critical_value;
    return out;
}

TestResult engle_granger_test(const Dataset& data, const RegressionSpec& spec) {
    spec.validate();
    if (spec.method != Method::EngleGranger)
        throw DimensionError("engle_granger_test requires method=EngleGranger");

    const OlsFit stage1 = ols(data.y(), data.X(), spec.intercept);
    const double scale = data.y().squaredNorm();
    if (stage1.ssr <= 1e-14 * std::max(scale, 1.0))
        throw DegenerateFit("regression residuals are numerically zero");

    const AdfResult adf =
        adf_test(stage1.residuals, spec.k_max, spec.alpha_level, data.n(), spec.intercept);

    TestResult result;
    result.method = spec.method;
    result.statistic = adf.statistic;
    result.threshold = adf.critical_value;
    result.verdict = decide(spec.method, result.statistic, result.threshold);
    result.diagnostics["selected_lags"] = static_cast<double>(adf.selected_lags);
    result.diagnostics["pvalue_band"] = adf.pvalue_band;
    result.diagnostics["stage1_ssr"] = stage1.ssr;
    return result;
}

}  // namespace bcoint::classical
