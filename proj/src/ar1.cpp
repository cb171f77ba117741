#include "bcoint/ar1.hpp"

#include <cmath>
#include <limits>

namespace bcoint::ar1 {

namespace {

struct StatsWithLogDet {
    Ar1SuffStats stats;
    double logdet_LXX = 0.0;
};

StatsWithLogDet compute_stats(const Dataset& data, double phi, bool intercept, InitialObs mode) {
    if (mode == InitialObs::StationaryPrior && std::abs(phi) >= 1.0)
        throw DomainError("stationary initial-observation prior requires |phi| < 1");

    const Eigen::VectorXd y = data.y();
    const Eigen::MatrixXd X = data.X();
    const int T = data.T();
    const int p = static_cast<int>(X.cols()) + (intercept ? 1 : 0);

    auto design_row = [&](int t) {
        Eigen::VectorXd v(p);
        int at = 0;
        if (intercept) v(at++) = 1.0;
        for (int j = 0; j < X.cols(); ++j) v(at++) = X(t, j);
        return v;
    };

    Eigen::MatrixXd L_XX = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd L_XY = Eigen::VectorXd::Zero(p);
    double L_YY = 0.0;
    int terms = 0;

    if (mode != InitialObs::Conditional) {
        const double w1 = mode == InitialObs::StationaryPrior ? (1.0 - phi) * (1.0 + phi) : 1.0;
        const Eigen::VectorXd v1 = design_row(0);
        L_XX += w1 * v1 * v1.transpose();
        L_XY += w1 * y(0) * v1;
        L_YY += w1 * y(0) * y(0);
        ++terms;
    }
    Eigen::VectorXd v_prev = design_row(0);
    for (int t = 1; t < T; ++t) {
        const Eigen::VectorXd v_t = design_row(t);
        const Eigen::VectorXd u = v_t - phi * v_prev;
        const double ytil = y(t) - phi * y(t - 1);
        L_XX += u * u.transpose();
        L_XY += ytil * u;
        L_YY += ytil * ytil;
        v_prev = v_t;
        ++terms;
    }

    StatsWithLogDet out;
    out.stats.phi = phi;
    out.stats.L_XX = L_XX;
    out.stats.L_XY = L_XY;
    out.stats.L_YY = L_YY;
    if (p == 0) {
        out.stats.g = L_YY;
        out.logdet_LXX = 0.0;
    } else {
        try {
            const SpdSolution sol = solve_spd(L_XX, L_XY);
            out.stats.g = L_YY - L_XY.dot(sol.x);
            out.logdet_LXX = sol.logdet;
        } catch (const SingularCovariance& e) {
            throw CollinearRegressors(std::string("L_XX singular: ") + e.what());
        }
    }
    out.stats.nu_p = static_cast<double>(terms - p);
    out.stats.s_p = out.stats.g > 0.0 ? std::sqrt(out.stats.g / out.stats.nu_p) : 0.0;
    return out;
}

double log_marginal_from(const StatsWithLogDet& s, InitialObs mode) {
    if (!(s.stats.g > 0.0))
        throw CollinearRegressors("projected residual quadratic g(phi) is not positive");
    double value = -0.5 * s.stats.nu_p * std::log(s.stats.g) - 0.5 * s.logdet_LXX;
    if (mode == InitialObs::StationaryPrior)
        value += 0.5 * (std::log(1.0 - s.stats.phi) + std::log(1.0 + s.stats.phi));
    return value;
}

double trapezoid(const Eigen::VectorXd& grid, const Eigen::VectorXd& vals) {
    double acc = 0.0;
    for (int i = 0; i + 1 < grid.size(); ++i)
        acc += 0.5 * (vals(i) + vals(i + 1)) * (grid(i + 1) - grid(i));
    return acc;
}

/// Trapezoid mass of a piecewise-linear density over [lo, hi] clipped to the
/// grid, with linear interpolation at interior cut points.
double mass_between(const Eigen::VectorXd& grid, const Eigen::VectorXd& density, double lo,
                    double hi) {
    lo = std::max(lo, grid(0));
    hi = std::min(hi, grid(grid.size() - 1));
    if (!(hi > lo)) return 0.0;
    auto value_at = [&](double x, int cell) {
        const double t = (x - grid(cell)) / (grid(cell + 1) - grid(cell));
        return density(cell) * (1.0 - t) + density(cell + 1) * t;
    };
    double acc = 0.0;
    for (int i = 0; i + 1 < grid.size(); ++i) {
        const double a = std::max(lo, grid(i));
        const double b = std::min(hi, grid(i + 1));
        if (b <= a) continue;
        acc += 0.5 * (value_at(a, i) + value_at(b, i)) * (b - a);
    }
    return acc;
}

}  // namespace

Ar1SuffStats suff_stats(const Dataset& data, double phi, bool intercept, InitialObs mode) {
    return compute_stats(data, phi, intercept, mode).stats;
}

double log_marginal_likelihood(const Dataset& data, double phi, bool intercept, InitialObs mode) {
    return log_marginal_from(compute_stats(data, phi, intercept, mode), mode);
}

double log_likelihood_at_unit_root(const Dataset& data, bool intercept) {
    if (!intercept)
        return log_marginal_likelihood(data, 1.0, false, InitialObs::Conditional);
    const auto f = [&](double eps) {
        return log_marginal_likelihood(data, 1.0 - eps, true, InitialObs::StationaryPrior);
    };
    return richardson_limit(f).limit;
}

BayesFactorResult bayes_factor(const Dataset& data, bool intercept) {
    const InitialObs mode = intercept ? InitialObs::StationaryPrior : InitialObs::Conditional;
    BayesFactorResult out;
    out.log_numerator = log_likelihood_at_unit_root(data, intercept);
    const auto log_lik = [&](double phi) {
        return log_marginal_likelihood(data, phi, intercept, mode);
    };
    const AdaptiveIntegral integral = integrate_adaptive_log(log_lik, -1.0, 1.0);
    out.log_denominator = std::log(0.5) + integral.value;
    out.grid_diagnostics = {integral.levels, integral.nodes, integral.rel_change,
                            integral.converged};
    out.K = std::exp(out.log_numerator - out.log_denominator);
    return out;
}

PhiPosterior phi_posterior(const Dataset& data, bool intercept, const GridSpec& spec,
                           InitialObs mode) {
    if (spec.points < 3) throw DomainError("phi grid needs at least three points");
    PhiPosterior out;
    out.grid = Eigen::VectorXd::LinSpaced(spec.points, spec.lo, spec.hi);
    Eigen::VectorXd log_post(spec.points);
    for (int i = 0; i < spec.points; ++i)
        log_post(i) = log_marginal_likelihood(data, out.grid(i), intercept, mode);

    const double peak = log_post.maxCoeff();
    out.density = (log_post.array() - peak).exp();
    const double total = trapezoid(out.grid, out.density);
    if (!(total > 0.0)) throw NumericalError("phi posterior vanished on the whole grid");
    out.density /= total;

    const double h0 = out.grid(1) - out.grid(0);
    const double hn = out.grid(spec.points - 1) - out.grid(spec.points - 2);
    const double edge_mass = std::max(0.5 * (out.density(0) + out.density(1)) * h0,
                                      0.5 * (out.density(spec.points - 1) +
                                             out.density(spec.points - 2)) * hn);
    if (edge_mass > 1e-4)
        throw GridTooNarrow("posterior mass " + std::to_string(edge_mass) +
                            " in a boundary grid cell; widen the phi grid");

    out.prob_phi_ge_1 = mass_between(out.grid, out.density, 1.0, out.grid(spec.points - 1));
    out.prob_stationary = mass_between(out.grid, out.density, -1.0, 1.0);
    return out;
}

TestResult ar1_test(const Dataset& data, const RegressionSpec& spec) {
    spec.validate();
    TestResult result;
    result.method = spec.method;
    result.threshold = spec.alpha_level;
    if (spec.method == Method::Ar1BayesFactor) {
        const BayesFactorResult bf = bayes_factor(data, spec.intercept);
        result.statistic = bf.K;
        result.diagnostics["log_numerator"] = bf.log_numerator;
        result.diagnostics["log_denominator"] = bf.log_denominator;
        result.diagnostics["quadrature_nodes"] = bf.grid_diagnostics.nodes;
        result.diagnostics["quadrature_converged"] = bf.grid_diagnostics.converged ? 1.0 : 0.0;
    } else if (spec.method == Method::Ar1Credible) {
        const PhiPosterior post = phi_posterior(data, spec.intercept);
        result.statistic = post.prob_phi_ge_1;
        result.diagnostics["prob_stationary"] = post.prob_stationary;
        result.diagnostics["grid_points"] = static_cast<double>(post.grid.size());
    } else {
        throw DimensionError("ar1_test handles only the AR(1) methods");
    }
    result.verdict = decide(spec.method, result.statistic, result.threshold);
    return result;
}

}  // namespace bcoint::ar1
