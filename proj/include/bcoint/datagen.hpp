#pragma once

#include <Eigen/Dense>

#include "bcoint/arp.hpp"
#include "bcoint/core.hpp"

namespace bcoint::datagen {

/// Benchmark-generation constants. The defaults reproduce the synthetic
/// protocol of the classification studies: bivariate instances, unit-root
/// residuals with probability one half, stationary parameters rejected
/// until every root of Pi is inside the unit circle with the largest one
/// above `root_floor`, regression coefficients uniform on [coef_lo, coef_hi],
/// unit white-noise variance.
struct GenConfig {
    int T = 500;
    int k_lo = 1;  ///< residual order drawn uniformly on {k_lo..k_hi}
    int k_hi = 1;
    double p_unit_root = 0.5;
    double root_floor = 0.8;
    double coef_lo = 0.0;
    double coef_hi = 5.0;
    double sigma2 = 1.0;
    int warmup_steps = 200;  ///< discarded leading simulation steps
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Label { Cointegrated, NotCointegrated };

struct GenInstance {
    Dataset data;
    Label label = Label::Cointegrated;
    Eigen::VectorXd true_phi;
    double true_beta2 = 0.0;
    double true_intercept = 0.0;
};

/// Rejection-sample stationary AR(k) coefficients: phi uniform on (0, 1]^k,
/// accepted when all roots of Pi lie strictly inside the unit circle and the
/// largest root magnitude exceeds `root_floor`. Throws GenerationStalled
/// after 10^6 rejected proposals.
Eigen::VectorXd sample_stationary_constrained(int k, double root_floor, Rng& rng);

/// Lift stationary coefficients psi of the difference process dR_t to the
/// order-(len(psi)+1) coefficients of R_t: expansion of (1 - L) Psi_dR(L).
/// The result has coefficient sum exactly 1 and one unit root of Pi. An
/// empty psi yields the pure random walk phi = (1).
Eigen::VectorXd embed_unit_root(const Eigen::VectorXd& psi);

/// Simulate one AR(k) path of length T: zero initial lags, `warmup` leading
/// steps discarded.
Eigen::VectorXd simulate_ar(const Eigen::VectorXd& phi, int T, double sigma2, int warmup,
                            Rng& rng);

/// One synthetic bivariate instance: random-walk regressor x_t, residual
/// process per the drawn label, y_t = beta2 x_t + alpha + R_t.
GenInstance generate_instance(const GenConfig& config, Rng& rng);

/// Instance generation with a per-index derived seed, for fan-out across
/// workers.
GenInstance generate_instance_indexed(const GenConfig& config, std::uint64_t index);

}  // namespace bcoint::datagen
