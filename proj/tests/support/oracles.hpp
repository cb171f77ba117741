#pragma once

// Test-only oracles, independent of the library's computation paths: the
// marginal likelihoods are integrated numerically from pointwise evaluation
// of the observation model, never through the closed-form sufficient
// statistics under test.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bcoint/core.hpp"
#include "bcoint/numerics.hpp"
#include "bcoint/rng.hpp"

namespace oracle {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// The sigma2 range is deliberately much wider than the posterior bulk: the
// closed forms integrate sigma2 over (0, inf), and truncating near the bulk
// (say [1e-3, 50]) leaves an O(1e-4) tail error that would swamp the
// comparisons below. These settings are converged to ~1e-13 against doubled
// resolution.
struct QuadSpec {
    double log_s2_lo = std::log(1e-6);
    double log_s2_hi = std::log(1e6);
    int s_panels = 36;
    int s_points = 8;
    int u_points = 24;
    double u_span = 12.0;
};

/// Brute-force marginal posterior of phi for the full likelihood with an
/// intercept and the stationary initial-observation prior, n = 2. For each
/// phi, integrates the joint over (alpha, beta, sigma2) with prior 1/sigma2:
/// sigma2 on a log grid, (alpha, beta) on a Gauss-Legendre grid recentred at
/// the minimiser of the quadratic exponent (located by finite differences)
/// and scaled by sigma. Returns the trapezoid-normalised density.
inline Eigen::VectorXd phi_posterior_full_3d(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& phi_grid,
                                             const QuadSpec& spec = {}) {
    const int T = static_cast<int>(y.size());
    std::vector<double> s_nodes, s_weights, u_nodes, u_weights, gl_nodes, gl_weights;
    bcoint::gauss_legendre(spec.s_points, gl_nodes, gl_weights);
    const double s_width = (spec.log_s2_hi - spec.log_s2_lo) / spec.s_panels;
    for (int p = 0; p < spec.s_panels; ++p) {
        const double lo = spec.log_s2_lo + p * s_width;
        for (int i = 0; i < spec.s_points; ++i) {
            s_nodes.push_back(lo + 0.5 * s_width * (gl_nodes[i] + 1.0));
            s_weights.push_back(0.5 * s_width * gl_weights[i]);
        }
    }
    bcoint::gauss_legendre(spec.u_points, u_nodes, u_weights);
    for (auto& u : u_nodes) u *= spec.u_span;
    for (auto& w : u_weights) w *= spec.u_span;

    Eigen::VectorXd log_post(phi_grid.size());
    std::vector<double> values;
    values.reserve(s_nodes.size() * u_nodes.size() * u_nodes.size());

    for (int gi = 0; gi < phi_grid.size(); ++gi) {
        const double phi = phi_grid(gi);
        const double w1 = 1.0 - phi * phi;
        if (!(w1 > 0.0)) throw std::runtime_error("oracle needs |phi| < 1");

        // Exact quadratic exponent, evaluated pointwise.
        auto E = [&](double a, double b) {
            const double r1 = y(0) - a - b * x(0);
            double acc = w1 * r1 * r1;
            for (int t = 1; t < T; ++t) {
                const double resid =
                    (y(t) - phi * y(t - 1)) - b * (x(t) - phi * x(t - 1)) - a * (1.0 - phi);
                acc += resid * resid;
            }
            return acc;
        };
        const double e00 = E(0, 0);
        const double h11 = E(1, 0) + E(-1, 0) - 2.0 * e00;
        const double h22 = E(0, 1) + E(0, -1) - 2.0 * e00;
        const double g1 = 0.5 * (E(1, 0) - E(-1, 0));
        const double g2 = 0.5 * (E(0, 1) - E(0, -1));
        const double h12 = E(1, 1) - e00 - g1 - g2 - 0.5 * h11 - 0.5 * h22;
        const double det = h11 * h22 - h12 * h12;
        if (!(det > 0.0) || !(h11 > 0.0)) throw std::runtime_error("oracle exponent not convex");
        const double ca = -(h22 * g1 - h12 * g2) / det;
        const double cb = -(h11 * g2 - h12 * g1) / det;
        const double l11 = std::sqrt(h11);
        const double l21 = h12 / l11;
        const double l22 = std::sqrt(h22 - l21 * l21);

        values.clear();
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t si = 0; si < s_nodes.size(); ++si) {
            const double s = s_nodes[si];
            const double sigma = std::exp(0.5 * s);
            const double log_ws = std::log(s_weights[si]);
            for (std::size_t i = 0; i < u_nodes.size(); ++i) {
                const double da = u_nodes[i] / l11;
                for (std::size_t j = 0; j < u_nodes.size(); ++j) {
                    const double a = ca + sigma * (da - u_nodes[j] * l21 / (l11 * l22));
                    const double b = cb + sigma * (u_nodes[j] / l22);
                    // log of: e^s dsigma2 jacobian, (alpha,beta) jacobian
                    // sigma^2 / (l11 l22), prior 1/sigma2, and the likelihood.
                    const double lv = s + 0.5 * std::log(w1) -
                                      0.5 * T * (kLog2Pi + s) - 0.5 * E(a, b) / std::exp(s) -
                                      std::log(l11 * l22) + log_ws +
                                      std::log(u_weights[i] * u_weights[j]);
                    values.push_back(lv);
                    peak = std::max(peak, lv);
                }
            }
        }
        double acc = 0.0;
        for (double lv : values) acc += std::exp(lv - peak);
        log_post(gi) = peak + std::log(acc);
    }

    Eigen::VectorXd density = (log_post.array() - log_post.maxCoeff()).exp();
    double total = 0.0;
    for (int i = 0; i + 1 < phi_grid.size(); ++i)
        total += 0.5 * (density(i) + density(i + 1)) * (phi_grid(i + 1) - phi_grid(i));
    return density / total;
}

/// Brute-force marginal posterior of phi for the conditional likelihood
/// without an intercept (n = 2): integrates over (beta, sigma2) only.
inline Eigen::VectorXd phi_posterior_conditional_2d(const Eigen::VectorXd& y,
                                                    const Eigen::VectorXd& x,
                                                    const Eigen::VectorXd& phi_grid,
                                                    const QuadSpec& spec = {}) {
    const int T = static_cast<int>(y.size());
    std::vector<double> s_nodes, s_weights, u_nodes, u_weights, gl_nodes, gl_weights;
    bcoint::gauss_legendre(spec.s_points, gl_nodes, gl_weights);
    const double s_width = (spec.log_s2_hi - spec.log_s2_lo) / spec.s_panels;
    for (int p = 0; p < spec.s_panels; ++p) {
        const double lo = spec.log_s2_lo + p * s_width;
        for (int i = 0; i < spec.s_points; ++i) {
            s_nodes.push_back(lo + 0.5 * s_width * (gl_nodes[i] + 1.0));
            s_weights.push_back(0.5 * s_width * gl_weights[i]);
        }
    }
    bcoint::gauss_legendre(spec.u_points, u_nodes, u_weights);
    for (auto& u : u_nodes) u *= spec.u_span;
    for (auto& w : u_weights) w *= spec.u_span;

    Eigen::VectorXd log_post(phi_grid.size());
    for (int gi = 0; gi < phi_grid.size(); ++gi) {
        const double phi = phi_grid(gi);
        auto E = [&](double b) {
            double acc = 0.0;
            for (int t = 1; t < T; ++t) {
                const double resid = (y(t) - phi * y(t - 1)) - b * (x(t) - phi * x(t - 1));
                acc += resid * resid;
            }
            return acc;
        };
        const double e0 = E(0);
        const double h = E(1) + E(-1) - 2.0 * e0;
        const double g = 0.5 * (E(1) - E(-1));
        if (!(h > 0.0)) throw std::runtime_error("oracle exponent not convex");
        const double c = -g / h;
        const double sqrt_h = std::sqrt(h);

        double peak = -std::numeric_limits<double>::infinity();
        std::vector<double> values;
        values.reserve(s_nodes.size() * u_nodes.size());
        for (std::size_t si = 0; si < s_nodes.size(); ++si) {
            const double s = s_nodes[si];
            const double sigma = std::exp(0.5 * s);
            for (std::size_t i = 0; i < u_nodes.size(); ++i) {
                const double b = c + sigma * u_nodes[i] / sqrt_h;
                const double lv = s + 0.5 * s - std::log(sqrt_h) - s -
                                  0.5 * (T - 1) * (kLog2Pi + s) - 0.5 * E(b) / std::exp(s) +
                                  std::log(s_weights[si] * u_weights[i]);
                values.push_back(lv);
                peak = std::max(peak, lv);
            }
        }
        double acc = 0.0;
        for (double lv : values) acc += std::exp(lv - peak);
        log_post(gi) = peak + std::log(acc);
    }

    Eigen::VectorXd density = (log_post.array() - log_post.maxCoeff()).exp();
    double total = 0.0;
    for (int i = 0; i + 1 < phi_grid.size(); ++i)
        total += 0.5 * (density(i) + density(i + 1)) * (phi_grid(i + 1) - phi_grid(i));
    return density / total;
}

// ---------------------------------------------------------------------------
// Seeded simulators
// ---------------------------------------------------------------------------

/// y_t = beta x_t + alpha + R_t with AR(1) residual and random-walk x.
inline bcoint::Dataset coint_pair(std::uint64_t seed, int T, double phi, double beta,
                                  double alpha, double sigma = 1.0) {
    bcoint::Rng rng(seed);
    Eigen::VectorXd x(T), r(T);
    double level = 0.0, res = 0.0;
    for (int t = 0; t < T; ++t) {
        level += rng.normal();
        x(t) = level;
        res = phi * res + sigma * rng.normal();
        r(t) = res;
    }
    Eigen::MatrixXd values(T, 2);
    values.col(0) = beta * x.array() + alpha + r.array();
    values.col(1) = x;
    return bcoint::Dataset(std::move(values), {"Y", "X"}, 0);
}

inline bcoint::Dataset independent_walks(std::uint64_t seed, int T) {
    bcoint::Rng rng(seed);
    Eigen::MatrixXd values(T, 2);
    double a = 0.0, b = 0.0;
    for (int t = 0; t < T; ++t) {
        a += rng.normal();
        b += rng.normal();
        values(t, 0) = a;
        values(t, 1) = b;
    }
    return bcoint::Dataset(std::move(values), {"Y", "X"}, 0);
}

/// Dataset with AR(k) residual: y = beta x + alpha + R, random-walk x.
inline bcoint::Dataset coint_pair_ark(std::uint64_t seed, int T, const Eigen::VectorXd& phi,
                                      double beta, double alpha, double sigma = 1.0,
                                      int warmup = 100) {
    bcoint::Rng rng(seed);
    const int k = static_cast<int>(phi.size());
    Eigen::VectorXd sim = Eigen::VectorXd::Zero(T + warmup);
    for (int t = k; t < T + warmup; ++t) {
        double v = sigma * rng.normal();
        for (int i = 0; i < k; ++i) v += phi(i) * sim(t - 1 - i);
        sim(t) = v;
    }
    Eigen::VectorXd x(T);
    double level = 0.0;
    for (int t = 0; t < T; ++t) {
        level += rng.normal();
        x(t) = level;
    }
    Eigen::MatrixXd values(T, 2);
    values.col(0) = beta * x.array() + alpha + sim.tail(T).array();
    values.col(1) = x;
    return bcoint::Dataset(std::move(values), {"Y", "X"}, 0);
}

// ---------------------------------------------------------------------------
// Density comparison helpers
// ---------------------------------------------------------------------------

/// Histogram density of samples on the cells of a uniform grid.
inline Eigen::VectorXd histogram_density(const Eigen::VectorXd& grid,
                                         const std::vector<double>& samples) {
    const int G = static_cast<int>(grid.size());
    const double h = grid(1) - grid(0);
    Eigen::VectorXd density = Eigen::VectorXd::Zero(G);
    for (double v : samples) {
        const int cell = static_cast<int>(std::floor((v - grid(0)) / h + 0.5));
        if (cell >= 0 && cell < G) density(cell) += 1.0;
    }
    return density / (static_cast<double>(samples.size()) * h);
}

/// Discrete Gaussian smoothing with bandwidth `bw`, identical operator for
/// histogram and exact density so the comparison is unbiased.
inline Eigen::VectorXd smooth_on_grid(const Eigen::VectorXd& grid, const Eigen::VectorXd& values,
                                      double bw) {
    const int G = static_cast<int>(grid.size());
    const double h = grid(1) - grid(0);
    const int half = std::max(1, static_cast<int>(std::ceil(6.0 * bw / h)));
    std::vector<double> kernel(2 * half + 1);
    double total = 0.0;
    for (int j = -half; j <= half; ++j) {
        kernel[j + half] = std::exp(-0.5 * (j * h) * (j * h) / (bw * bw));
        total += kernel[j + half];
    }
    for (auto& k : kernel) k /= total;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(G);
    for (int i = 0; i < G; ++i) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            const int at = std::clamp(i + j, 0, G - 1);
            acc += kernel[j + half] * values(at);
        }
        out(i) = acc;
    }
    return out;
}

}  // namespace oracle
