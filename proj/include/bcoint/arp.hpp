#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

#include "bcoint/core.hpp"
#include "bcoint/numerics.hpp"

namespace bcoint::arp {

/// AR(k) coefficients phi_{1:k} with their two polynomial views and roots.
///
/// Psi(z) = 1 - phi_1 z - ... - phi_k z^k is the lag polynomial; the process
/// is stationary when the zeros of Psi lie outside the unit circle. Pi(z) =
/// z^k - phi_1 z^{k-1} - ... - phi_k has the reciprocal roots, so the same
/// condition reads |lambda_i| < 1 for the roots of Pi.
struct ArParams {
    int k = 0;
    Eigen::VectorXd phi;
    std::vector<double> psi_poly;  ///< coefficients of Psi, ascending in z
    std::vector<double> pi_poly;   ///< monic coefficients of Pi, ascending in z
    std::vector<std::complex<double>> roots;  ///< roots of Pi

    static ArParams from_phi(const Eigen::VectorXd& phi);

    bool is_stationary() const;   ///< all |lambda_i| < 1
    bool has_unit_root() const;   ///< one root within 1e-8 of 1, rest inside
};

/// Error-correction reparameterisation (rho, xi_{1:k-1}) of phi_{1:k}:
/// rho = sum phi_i, xi_i = -sum_{j>i} phi_j. The test statistic carrier.
struct RhoXiParams {
    double rho = 0.0;
    Eigen::VectorXd xi;

    int order() const { return static_cast<int>(xi.size()) + 1; }
};

RhoXiParams phi_to_rho_xi(const Eigen::VectorXd& phi);
Eigen::VectorXd rho_xi_to_phi(const RhoXiParams& params);

/// rho = (-1)^{k+1} prod_i (lambda_i - 1) + 1 from the roots of Pi. The
/// roots must be closed under conjugation (imaginary part of the product
/// below 1e-8).
double rho_from_roots(const std::vector<std::complex<double>>& roots);

/// One state of the Gibbs chain. With an intercept in the cointegrating
/// regression the residual autoregression carries a constant term
///   R~_t = gamma + rho R~_{t-1} + sum_i xi_i dR~_{t-i} + eps_t,
/// where R~_t = y_t - beta2' x_t and gamma = alpha (1 - rho). Sampling gamma
/// inside the autoregression block keeps the posterior proper across
/// rho = 1, where alpha itself is not identified.
struct GibbsState {
    RhoXiParams rho_xi;
    double gamma = 0.0;      ///< intercept of the residual autoregression
    Eigen::VectorXd beta2;
    double sigma2 = 1.0;
    int k = 1;
    bool intercept = false;  ///< carry gamma as an extra block coefficient
};

/// Filtered design matrices of the two Gaussian conditionals. Column t of
/// X_rho_xi stacks the lagged level R_{k+t-1} over the lagged differences
/// dR_{k+t-1}, ..., dR_{t+1} (plus a trailing constant row in intercept
/// mode); X_beta2 holds the (rho, xi)-filtered regressors, and the Y vectors
/// the matching filtered responses.
struct DesignMatrices {
    Eigen::MatrixXd X_rho_xi;  ///< (k [+1]) x (T-k)
    Eigen::VectorXd Y_rho_xi;  ///< T-k
    Eigen::MatrixXd X_beta2;   ///< (n-1) x (T-k)
    Eigen::VectorXd Y_beta2;   ///< T-k
};

enum class DesignTarget { RhoXiBlock, Beta2Block };

/// Build the requested block from the residual series induced by the current
/// beta2 (RhoXiBlock) or the filtered regression induced by the current
/// (rho, xi, gamma) (Beta2Block). Unrequested fields stay empty.
DesignMatrices build_design(const Dataset& data, const GibbsState& state, DesignTarget target);

/// Same blocks conditioned on the first `conditioning` observations instead
/// of the first k (so likelihood terms run over t = conditioning+1 .. T).
/// Requires conditioning >= k. Used by order moves, which condition both
/// orders of a jump on a common prefix.
DesignMatrices build_design_conditioned(const Dataset& data, const GibbsState& state,
                                        DesignTarget target, int conditioning);

/// MCMC sample stream with its bookkeeping.
struct PosteriorDraws {
    std::vector<GibbsState> draws;
    int burn_in = 0;
    int thin = 1;
    std::uint64_t seed = 0;
    bool intercept = false;
    std::map<std::string, double> acceptance_stats;
};

struct McmcConfig {
    int iterations = 25000;
    int burn_in = 5000;
    int thin = 1;

    void validate() const;
};

/// Joint draw of the autoregression block: (rho, xi) plus gamma when the
/// state carries an intercept. `rho_tail_prob` is the exact conditional
/// P(rho >= 1 | beta2, sigma2, data) of the Gaussian the draw came from;
/// its chain average is a Rao-Blackwellised estimate of the posterior tail
/// mass (same functional as the draw fraction, far less Monte Carlo noise).
struct ArBlockDraw {
    RhoXiParams rho_xi;
    double gamma = 0.0;
    double rho_tail_prob = 0.0;
};

// Individual conditional draws (exposed for verification against their
// closed forms). The conditioned overloads shift the likelihood window to
// t > conditioning; the plain forms use conditioning = k.
ArBlockDraw sample_rho_xi(const Dataset& data, const GibbsState& state, Rng& rng);
ArBlockDraw sample_rho_xi(const Dataset& data, const GibbsState& state, Rng& rng,
                          int conditioning);
Eigen::VectorXd sample_beta2(const Dataset& data, const GibbsState& state, Rng& rng);
Eigen::VectorXd sample_beta2(const Dataset& data, const GibbsState& state, Rng& rng,
                             int conditioning);
double sample_sigma2(const Dataset& data, const GibbsState& state, Rng& rng);
double sample_sigma2(const Dataset& data, const GibbsState& state, Rng& rng, int conditioning);

namespace detail {
/// OLS chain start shared with the order sampler.
GibbsState initial_state(const Dataset& data, int k, bool intercept = false);
}  // namespace detail

/// Fixed-order Gibbs sampler cycling (rho, xi[, gamma]) -> beta2 -> sigma2
/// from an OLS initialisation. Deterministic under `seed`.
PosteriorDraws gibbs_run(const Dataset& data, int k, const McmcConfig& config,
                         std::uint64_t seed, bool intercept = false);

/// Credible test with statistic = fraction of post-burn-in draws with
/// rho >= 1; cointegrated when that tail mass is at most alpha_level.
TestResult gibbs_test(const Dataset& data, const RegressionSpec& spec, const McmcConfig& config,
                      std::uint64_t seed);

}  // namespace bcoint::arp
