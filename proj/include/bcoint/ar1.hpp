#pragma once

#include <Eigen/Dense>

#include "bcoint/core.hpp"
#include "bcoint/numerics.hpp"

namespace bcoint::ar1 {

/// Treatment of the first observation of the residual process.
///
/// StationaryPrior puts R_1 ~ N(0, sigma^2/(1-phi^2)), the stationary
/// distribution, and is only defined for |phi| < 1. UnitVariancePrior puts
/// R_1 ~ N(0, sigma^2), which stays proper across phi = 1 and backs the
/// credible-interval test. Conditional drops the t = 1 term entirely.
enum class InitialObs { StationaryPrior, UnitVariancePrior, Conditional };

/// Sufficient statistics of the AR(1) marginal likelihood at a fixed phi.
///
/// L_XX(phi) accumulates the filtered design cross-products
///   w1 * v1 v1' + sum_{t>=2} (v_t - phi v_{t-1})(v_t - phi v_{t-1})'
/// with v_t = (1, x_t) when an intercept is present and v_t = x_t otherwise;
/// w1 is (1-phi^2) under the stationary prior, 1 under the unit-variance
/// prior, and the t = 1 term is absent in conditional mode. L_XY and L_YY
/// are built from the same filtered terms against y_t - phi y_{t-1}, and
///   g(phi) = L_YY - L_XY' L_XX^{-1} L_XY
/// is the residual quadratic after projecting out the regression block.
struct Ar1SuffStats {
    double phi = 0.0;
    Eigen::MatrixXd L_XX;
    Eigen::VectorXd L_XY;
    double L_YY = 0.0;
    double g = 0.0;
    double nu_p = 0.0;  ///< marginalisation degrees of freedom (terms - dim)
    double s_p = 0.0;   ///< sqrt(g / nu_p)
};

Ar1SuffStats suff_stats(const Dataset& data, double phi, bool intercept, InitialObs mode);

/// Log of the phi-dependent part of the marginal likelihood:
///   0.5 log(1-phi^2) [stationary prior only]
///   - (nu_p/2) log g(phi) - 0.5 log |L_XX(phi)|,
/// where nu_p counts likelihood terms minus marginalised regression
/// parameters. Additive constants independent of phi are omitted, so ratios
/// and normalised posteriors are exact.
double log_marginal_likelihood(const Dataset& data, double phi, bool intercept, InitialObs mode);

/// Marginal likelihood of the unit-root model. With an intercept this is the
/// limit phi -> 1 of the stationary-prior full likelihood, evaluated by
/// Richardson extrapolation in eps = 1 - phi; without one the conditional
/// likelihood is continuous at 1 and is evaluated directly.
double log_likelihood_at_unit_root(const Dataset& data, bool intercept);

struct QuadratureDiagnostics {
    int levels = 0;
    int nodes = 0;
    double rel_change = 0.0;
    bool converged = false;
};

struct BayesFactorResult {
    double K = 0.0;
    double log_numerator = 0.0;
    double log_denominator = 0.0;
    QuadratureDiagnostics grid_diagnostics;
};

/// Bayes factor K = L(phi=1) / (1/2 integral_{-1}^{1} L(phi) dphi), computed
/// in log space with a shared additive constant. Without an intercept both
/// sides use the conditional likelihood; with one, the stationary-prior full
/// likelihood and its phi -> 1 limit.
BayesFactorResult bayes_factor(const Dataset& data, bool intercept);

struct GridSpec {
    double lo = -1.5;
    double hi = 1.5;
    int points = 1001;
};

struct PhiPosterior {
    Eigen::VectorXd grid;
    Eigen::VectorXd density;       ///< trapezoid-normalised over the grid
    double prob_phi_ge_1 = 0.0;    ///< posterior mass of {phi >= 1}
    double prob_stationary = 0.0;  ///< posterior mass of {|phi| < 1}
};

/// Flat-prior marginal posterior of phi on a grid, for the credible-interval
/// test. Defaults to the unit-variance initial-observation prior, which is
/// proper on the whole grid. Throws GridTooNarrow when boundary cells carry
/// more than 1e-4 mass.
PhiPosterior phi_posterior(const Dataset& data, bool intercept, const GridSpec& spec = {},
                           InitialObs mode = InitialObs::UnitVariancePrior);

/// Dispatch for the two AR(1) tests (Bayes factor and credible interval).
TestResult ar1_test(const Dataset& data, const RegressionSpec& spec);

}  // namespace bcoint::ar1
