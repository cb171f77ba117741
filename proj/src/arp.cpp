#include "bcoint/arp.hpp"

#include <cmath>

namespace bcoint::arp {

namespace {

Eigen::VectorXd residual_series(const Dataset& data, const Eigen::VectorXd& beta2) {
    return data.y() - data.X() * beta2;
}

// Gaussian block N(A^{-1} rhs, sigma^2 A^{-1}), solved after Jacobi
// equilibration. Row scales of the filtered designs can differ by many
// orders of magnitude (a filtered constant regressor shrinks like 1 - rho
// near a unit root), and the rescaled system stays well conditioned
// whenever the rows are not directionally collinear.
struct CholDraw {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;            // D with A = D^-1 B D^-1
    Eigen::LLT<Eigen::MatrixXd> llt;  // factor of B = D A D
};

CholDraw gaussian_block(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs) {
    const int rows = static_cast<int>(A.rows());
    CholDraw out;
    out.scale.resize(rows);
    for (int i = 0; i < rows; ++i) {
        if (!(A(i, i) > 0.0))
            throw SingularCovariance("design row " + std::to_string(i) + " is identically zero");
        out.scale(i) = 1.0 / std::sqrt(A(i, i));
    }
    const Eigen::MatrixXd B = out.scale.asDiagonal() * A * out.scale.asDiagonal();
    out.llt = cholesky_spd(B);
    out.mean = out.scale.asDiagonal() * out.llt.solve(out.scale.asDiagonal() * rhs);
    return out;
}

Eigen::VectorXd draw_from(const CholDraw& block, double sigma2, Rng& rng) {
    Eigen::VectorXd z(block.mean.size());
    for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
    // cov = sigma^2 D U^-1 U^-T D with B = U'U, so D U^{-1} z has the right
    // covariance up to sigma.
    return block.mean +
           std::sqrt(sigma2) * (block.scale.asDiagonal() * block.llt.matrixU().solve(z));
}

// Precision contribution of a guard prior on constant regressor columns. A
// user-supplied constant column is unidentified in the filtered regression
// at rho = 1 (its filtered values collapse to 1 - rho) and a flat prior
// there makes the posterior improper; a zero-mean Gaussian prior with
// standard deviation 1e4 * max(1, sd(y)) keeps it proper. Ordinary
// regressors are untouched. Intercepts requested through the API never take
// this path: they are carried as the gamma term of the autoregression.
Eigen::VectorXd constant_column_precision(const Dataset& data) {
    const Eigen::MatrixXd X = data.X();
    const Eigen::VectorXd y = data.y();
    const double sd_y = std::sqrt((y.array() - y.mean()).square().sum() /
                                  std::max(data.T() - 1, 1));
    const double tau = 1e4 * std::max(1.0, sd_y);
    Eigen::VectorXd precision = Eigen::VectorXd::Zero(X.cols());
    for (int j = 0; j < X.cols(); ++j) {
        if (X.col(j).maxCoeff() == X.col(j).minCoeff()) precision(j) = 1.0 / (tau * tau);
    }
    return precision;
}

/// Stack (rho, xi, gamma) in design-row order.
Eigen::VectorXd block_coefficients(const GibbsState& state) {
    Eigen::VectorXd coef(state.k + (state.intercept ? 1 : 0));
    if (state.k > 0) {
        coef(0) = state.rho_xi.rho;
        coef.segment(1, state.k - 1) = state.rho_xi.xi;
    }
    if (state.intercept) coef(coef.size() - 1) = state.gamma;
    return coef;
}

}  // namespace

ArParams ArParams::from_phi(const Eigen::VectorXd& phi) {
    const int k = static_cast<int>(phi.size());
    if (k < 1) throw DegenerateError("AR parameters need order >= 1");
    ArParams out;
    out.k = k;
    out.phi = phi;
    out.psi_poly.resize(k + 1);
    out.psi_poly[0] = 1.0;
    for (int i = 1; i <= k; ++i) out.psi_poly[i] = -phi(i - 1);
    out.pi_poly.resize(k);
    for (int i = 0; i < k; ++i) out.pi_poly[i] = -phi(k - 1 - i);
    out.roots = polynomial_roots(out.pi_poly);
    return out;
}

bool ArParams::is_stationary() const {
    for (const auto& root : roots)
        if (std::abs(root) >= 1.0) return false;
    return true;
}

bool ArParams::has_unit_root() const {
    int at_unity = 0;
    for (const auto& root : roots) {
        if (std::abs(root - std::complex<double>(1.0, 0.0)) < 1e-8) {
            ++at_unity;
        } else if (std::abs(root) >= 1.0) {
            return false;
        }
    }
    return at_unity == 1;
}

RhoXiParams phi_to_rho_xi(const Eigen::VectorXd& phi) {
    const int k = static_cast<int>(phi.size());
    if (k < 1) throw DegenerateError("reparameterisation needs order >= 1");
    RhoXiParams out;
    out.xi = Eigen::VectorXd::Zero(k - 1);
    double suffix = 0.0;  // sum_{j > i} phi_j, built from the back
    for (int i = k - 1; i >= 1; --i) {
        suffix += phi(i);
        out.xi(i - 1) = -suffix;
    }
    out.rho = suffix + phi(0);
    return out;
}

Eigen::VectorXd rho_xi_to_phi(const RhoXiParams& params) {
    const int k = params.order();
    Eigen::VectorXd phi(k);
    if (k == 1) {
        phi(0) = params.rho;
        return phi;
    }
    phi(0) = params.rho + params.xi(0);
    for (int i = 1; i + 1 < k; ++i) phi(i) = params.xi(i) - params.xi(i - 1);
    phi(k - 1) = -params.xi(k - 2);
    return phi;
}

double rho_from_roots(const std::vector<std::complex<double>>& roots) {
    const int k = static_cast<int>(roots.size());
    if (k < 1) throw DegenerateError("need at least one root");
    std::complex<double> prod(1.0, 0.0);
    for (const auto& root : roots) prod *= root - std::complex<double>(1.0, 0.0);
    if (std::abs(prod.imag()) >= 1e-8)
        throw DomainError("root set is not closed under conjugation");
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
    return sign * prod.real() + 1.0;
}

DesignMatrices build_design_conditioned(const Dataset& data, const GibbsState& state,
                                        DesignTarget target, int conditioning) {
    const int T = data.T();
    const int k = state.k;
    const int m = data.n() - 1;
    const int c = conditioning;
    if (k < 0) throw DimensionError("negative order");
    if (c < k || (k >= 1 && c < 1)) throw DimensionError("conditioning prefix must cover the lags");
    if (T <= c + std::max(k, m) + 2)
        throw InsufficientData("need T > conditioning + max(k, n-1) + 2 for SPD cross-products");

    DesignMatrices out;
    const int cols = T - c;
    const int block_rows = k + (state.intercept ? 1 : 0);

    if (target == DesignTarget::RhoXiBlock) {
        const Eigen::VectorXd r = residual_series(data, state.beta2);
        out.X_rho_xi.resize(block_rows, cols);
        out.Y_rho_xi.resize(cols);
        for (int j = 0; j < cols; ++j) {
            if (k > 0) {
                out.X_rho_xi(0, j) = r(c + j - 1);
                for (int i = 1; i < k; ++i)
                    out.X_rho_xi(i, j) = r(c + j - i) - r(c + j - i - 1);
            }
            if (state.intercept) out.X_rho_xi(block_rows - 1, j) = 1.0;
            out.Y_rho_xi(j) = r(c + j);
        }
    } else {
        const double rho = state.rho_xi.rho;
        const Eigen::VectorXd& xi = state.rho_xi.xi;
        const Eigen::MatrixXd X = data.X();
        const Eigen::VectorXd y = data.y();
        auto filter = [&](const Eigen::VectorXd& s, int j) {
            double v = s(c + j);
            if (k > 0) {
                v -= rho * s(c + j - 1);
                for (int i = 1; i < k; ++i)
                    v -= xi(i - 1) * (s(c + j - i) - s(c + j - i - 1));
            }
            return v;
        };
        out.X_beta2.resize(m, cols);
        out.Y_beta2.resize(cols);
        for (int j = 0; j < cols; ++j) {
            for (int col = 0; col < m; ++col) out.X_beta2(col, j) = filter(X.col(col), j);
            out.Y_beta2(j) = filter(y, j) - state.gamma;
        }
    }
    return out;
}

DesignMatrices build_design(const Dataset& data, const GibbsState& state, DesignTarget target) {
    return build_design_conditioned(data, state, target, state.k);
}

ArBlockDraw sample_rho_xi(const Dataset& data, const GibbsState& state, Rng& rng,
                          int conditioning) {
    if (state.k < 1 && !state.intercept)
        throw DimensionError("autoregression block is empty at k = 0 without an intercept");
    const DesignMatrices design =
        build_design_conditioned(data, state, DesignTarget::RhoXiBlock, conditioning);
    const CholDraw block = gaussian_block(design.X_rho_xi * design.X_rho_xi.transpose(),
                                          design.X_rho_xi * design.Y_rho_xi);
    const Eigen::VectorXd draw = draw_from(block, state.sigma2, rng);
    ArBlockDraw out;
    if (state.k > 0) {
        out.rho_xi.rho = draw(0);
        out.rho_xi.xi = draw.segment(1, state.k - 1);
        // marginal of rho under this Gaussian: var = sigma^2 (A^{-1})_00
        Eigen::VectorXd e0 = Eigen::VectorXd::Zero(block.mean.size());
        e0(0) = 1.0;
        const double b_inv_00 = block.llt.matrixL().solve(e0).squaredNorm();
        const double sd = std::sqrt(state.sigma2 * b_inv_00) * block.scale(0);
        out.rho_tail_prob = 0.5 * std::erfc((1.0 - block.mean(0)) / (sd * std::sqrt(2.0)));
    }
    if (state.intercept) out.gamma = draw(draw.size() - 1);
    return out;
}

ArBlockDraw sample_rho_xi(const Dataset& data, const GibbsState& state, Rng& rng) {
    return sample_rho_xi(data, state, rng, state.k);
}

Eigen::VectorXd sample_beta2(const Dataset& data, const GibbsState& state, Rng& rng,
                             int conditioning) {
    const DesignMatrices design =
        build_design_conditioned(data, state, DesignTarget::Beta2Block, conditioning);
    Eigen::MatrixXd A = design.X_beta2 * design.X_beta2.transpose();
    A.diagonal() += state.sigma2 * constant_column_precision(data);
    const CholDraw block = gaussian_block(A, design.X_beta2 * design.Y_beta2);
    return draw_from(block, state.sigma2, rng);
}

Eigen::VectorXd sample_beta2(const Dataset& data, const GibbsState& state, Rng& rng) {
    return sample_beta2(data, state, rng, state.k);
}

double sample_sigma2(const Dataset& data, const GibbsState& state, Rng& rng, int conditioning) {
    const DesignMatrices design =
        build_design_conditioned(data, state, DesignTarget::RhoXiBlock, conditioning);
    Eigen::VectorXd predicted = Eigen::VectorXd::Zero(design.Y_rho_xi.size());
    if (design.X_rho_xi.rows() > 0)
        predicted = design.X_rho_xi.transpose() * block_coefficients(state);
    const double ssr = (design.Y_rho_xi - predicted).squaredNorm();
    if (!(ssr > 0.0)) throw DegenerateFit("autoregression fits the residuals exactly");
    const double nu = static_cast<double>(design.Y_rho_xi.size());
    return sample_scaled_inv_chi2({nu, ssr / nu}, rng);
}

double sample_sigma2(const Dataset& data, const GibbsState& state, Rng& rng) {
    return sample_sigma2(data, state, rng, state.k);
}

void McmcConfig::validate() const {
    if (iterations <= burn_in) throw DimensionError("iterations must exceed burn_in");
    if (burn_in < 0 || thin < 1) throw DimensionError("invalid burn_in/thin");
}

namespace {

Eigen::VectorXd ols_coefficients(const Eigen::MatrixXd& X_cols_by_obs,
                                 const Eigen::VectorXd& y) {
    const Eigen::MatrixXd A = X_cols_by_obs * X_cols_by_obs.transpose();
    try {
        return solve_spd(A, X_cols_by_obs * y).x;
    } catch (const SingularCovariance& e) {
        throw CollinearRegressors(std::string("initialisation regression singular: ") + e.what());
    }
}

}  // namespace

namespace detail {

/// OLS start: beta2 from y on x (with a constant column in intercept mode,
/// discarded afterwards), (rho, xi, gamma) from the induced residual
/// regression, sigma2 from its SSR.
GibbsState initial_state(const Dataset& data, int k, bool intercept) {
    GibbsState state;
    state.k = k;
    state.intercept = intercept;
    const int m = data.n() - 1;
    if (intercept) {
        Eigen::MatrixXd design(m + 1, data.T());
        design.topRows(m) = data.X().transpose();
        design.row(m).setOnes();
        state.beta2 = ols_coefficients(design, data.y()).head(m);
    } else {
        state.beta2 = ols_coefficients(data.X().transpose(), data.y());
    }
    state.rho_xi.xi = Eigen::VectorXd::Zero(std::max(k - 1, 0));
    state.rho_xi.rho = 0.0;
    state.gamma = 0.0;
    state.sigma2 = 1.0;
    const DesignMatrices design = build_design(data, state, DesignTarget::RhoXiBlock);
    if (design.X_rho_xi.rows() > 0) {
        const Eigen::VectorXd coef = ols_coefficients(design.X_rho_xi, design.Y_rho_xi);
        if (k > 0) {
            state.rho_xi.rho = coef(0);
            state.rho_xi.xi = coef.segment(1, k - 1);
        }
        if (intercept) state.gamma = coef(coef.size() - 1);
        const double ssr =
            (design.Y_rho_xi - design.X_rho_xi.transpose() * coef).squaredNorm();
        state.sigma2 = std::max(ssr / design.Y_rho_xi.size(), 1e-12);
    } else {
        state.sigma2 = std::max(design.Y_rho_xi.squaredNorm() / data.T(), 1e-12);
    }
    return state;
}

}  // namespace detail

PosteriorDraws gibbs_run(const Dataset& data, int k, const McmcConfig& config,
                         std::uint64_t seed, bool intercept) {
    if (k < 1) throw DimensionError("gibbs_run needs order >= 1");
    config.validate();

    Rng rng(seed);
    GibbsState state = detail::initial_state(data, k, intercept);

    PosteriorDraws out;
    out.burn_in = config.burn_in;
    out.thin = config.thin;
    out.seed = seed;
    out.intercept = intercept;
    out.draws.reserve((config.iterations - config.burn_in) / config.thin + 1);

    int consecutive_failures = 0;
    double rb_tail_sum = 0.0;
    double rb_tail_count = 0.0;
    double last_tail_prob = 0.0;
    for (int iter = 0; iter < config.iterations; ++iter) {
        try {
            const ArBlockDraw ar = sample_rho_xi(data, state, rng);
            state.rho_xi = ar.rho_xi;
            state.gamma = ar.gamma;
            last_tail_prob = ar.rho_tail_prob;
            state.beta2 = sample_beta2(data, state, rng);
            state.sigma2 = sample_sigma2(data, state, rng);
            consecutive_failures = 0;
        } catch (const SingularCovariance&) {
            if (++consecutive_failures >= 3)
                throw ChainFailed("three consecutive singular conditionals");
        }
        if (iter >= config.burn_in) {
            rb_tail_sum += last_tail_prob;
            rb_tail_count += 1.0;
            if ((iter - config.burn_in) % config.thin == 0) out.draws.push_back(state);
        }
    }
    out.acceptance_stats["rb_tail_mass"] = rb_tail_sum / rb_tail_count;
    return out;
}

TestResult gibbs_test(const Dataset& data, const RegressionSpec& spec, const McmcConfig& config,
                      std::uint64_t seed) {
    spec.validate();
    if (spec.method != Method::GibbsFixedOrder)
        throw DimensionError("gibbs_test requires method=GibbsFixedOrder");
    const PosteriorDraws draws = gibbs_run(data, *spec.order, config, seed, spec.intercept);

    std::size_t tail = 0;
    double rho_sum = 0.0;
    for (const auto& d : draws.draws) {
        if (d.rho_xi.rho >= 1.0) ++tail;
        rho_sum += d.rho_xi.rho;
    }
    TestResult result;
    result.method = spec.method;
    result.statistic = static_cast<double>(tail) / static_cast<double>(draws.draws.size());
    result.threshold = spec.alpha_level;
    result.verdict = decide(spec.method, result.statistic, result.threshold);
    result.diagnostics["draws"] = static_cast<double>(draws.draws.size());
    result.diagnostics["mean_rho"] = rho_sum / static_cast<double>(draws.draws.size());
    result.diagnostics["order"] = static_cast<double>(*spec.order);
    result.diagnostics["rb_tail_mass"] = draws.acceptance_stats.at("rb_tail_mass");
    return result;
}

}  // namespace bcoint::arp
