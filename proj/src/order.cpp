#include "bcoint/order.hpp"

#include <cmath>

namespace bcoint::order {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double proposal_normaliser(int from, const OrderProposal& proposal) {
    double z = 0.0;
    for (int j = 0; j <= proposal.k_max; ++j) {
        if (j == from) continue;
        z += std::exp(-proposal.lambda_heat * std::abs(j - from));
    }
    return z;
}

struct MassPieces {
    double logmass = 0.0;
    double C = 0.0;
    double logdet_cov = 0.0;  ///< log |2 pi sigma2 (X X')^{-1}|
};

MassPieces mass_pieces(const Dataset& data, int k, const Eigen::VectorXd& beta2, double sigma2,
                       int conditioning, bool intercept) {
    if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be positive");
    arp::GibbsState state;
    state.k = k;
    state.beta2 = beta2;
    state.intercept = intercept;
    const arp::DesignMatrices design =
        arp::build_design_conditioned(data, state, arp::DesignTarget::RhoXiBlock, conditioning);

    const double n_terms = static_cast<double>(design.Y_rho_xi.size());
    const double log_2pi_s2 = kLog2Pi + std::log(sigma2);
    const int rows = static_cast<int>(design.X_rho_xi.rows());

    MassPieces out;
    const double yy = design.Y_rho_xi.squaredNorm();
    if (rows == 0) {
        out.logmass = -0.5 * n_terms * log_2pi_s2 - 0.5 * yy / sigma2;
        return out;
    }
    const Eigen::MatrixXd A = design.X_rho_xi * design.X_rho_xi.transpose();
    const Eigen::VectorXd xy = design.X_rho_xi * design.Y_rho_xi;
    const SpdSolution sol = solve_spd(A, xy);
    out.C = xy.dot(sol.x);
    out.logdet_cov = rows * log_2pi_s2 - sol.logdet;
    out.logmass =
        -0.5 * n_terms * log_2pi_s2 + 0.5 * out.logdet_cov - 0.5 * (yy - out.C) / sigma2;
    return out;
}

}  // namespace

double proposal_mass(int from, int to, const OrderProposal& proposal) {
    if (to == from || to < 0 || to > proposal.k_max) return 0.0;
    return std::exp(-proposal.lambda_heat * std::abs(to - from)) /
           proposal_normaliser(from, proposal);
}

ProposedOrder propose_order(int k, const OrderProposal& proposal, Rng& rng) {
    if (proposal.k_max < 1) throw DegenerateError("order proposal needs k_max >= 1");
    if (k < 0 || k > proposal.k_max) throw DomainError("current order outside {0..k_max}");
    const double z = proposal_normaliser(k, proposal);
    double u = rng.uniform01() * z;
    int pick = -1;
    for (int j = 0; j <= proposal.k_max; ++j) {
        if (j == k) continue;
        u -= std::exp(-proposal.lambda_heat * std::abs(j - k));
        if (u <= 0.0) {
            pick = j;
            break;
        }
    }
    if (pick < 0) pick = proposal.k_max == k ? proposal.k_max - 1 : proposal.k_max;
    ProposedOrder out;
    out.k_new = pick;
    out.q_forward = proposal_mass(k, pick, proposal);
    out.q_backward = proposal_mass(pick, k, proposal);
    return out;
}

double order_conditional_logmass(const Dataset& data, int k, const Eigen::VectorXd& beta2,
                                 double sigma2, int conditioning, bool intercept) {
    return mass_pieces(data, k, beta2, sigma2, conditioning, intercept).logmass;
}

OrderAcceptanceTerms acceptance_terms(const Dataset& data, int k, int kprime,
                                      const Eigen::VectorXd& beta2, double sigma2,
                                      const OrderProposal& proposal,
                                      std::optional<int> conditioning, bool intercept) {
    if (k == kprime) throw DomainError("between-model move needs k != k'");
    const int c = conditioning.value_or(std::max(k, kprime));
    const MassPieces from = mass_pieces(data, k, beta2, sigma2, c, intercept);
    const MassPieces to = mass_pieces(data, kprime, beta2, sigma2, c, intercept);

    OrderAcceptanceTerms out;
    out.C_k = from.C;
    out.C_kprime = to.C;
    out.logdet_k = from.logdet_cov;
    out.logdet_kprime = to.logdet_cov;
    out.q_forward = proposal_mass(k, kprime, proposal);
    out.q_backward = proposal_mass(kprime, k, proposal);
    out.ratio = std::exp(std::log(out.q_backward) - std::log(out.q_forward) + to.logmass -
                         from.logmass);
    return out;
}

double acceptance_ratio(const Dataset& data, int k, int kprime, const Eigen::VectorXd& beta2,
                        double sigma2, const OrderProposal& proposal,
                        std::optional<int> conditioning, bool intercept) {
    return acceptance_terms(data, k, kprime, beta2, sigma2, proposal, conditioning, intercept)
        .ratio;
}

OrderPosterior order_posterior_from_mass(const Eigen::VectorXd& unnormalised) {
    const double total = unnormalised.sum();
    if (!(total > 0.0)) throw DegenerateError("empty order occupancy");
    OrderPosterior out;
    out.mass = unnormalised / total;
    out.mode = 0;
    double mean = 0.0, second = 0.0;
    for (int j = 0; j < out.mass.size(); ++j) {
        if (out.mass(j) > out.mass(out.mode)) out.mode = j;
        mean += j * out.mass(j);
        second += static_cast<double>(j) * j * out.mass(j);
    }
    out.variance = std::max(second - mean * mean, 0.0);
    return out;
}

RjRunResult rjmcmc_run(const Dataset& data, const RegressionSpec& spec,
                       const OrderMcmcConfig& config, std::uint64_t seed) {
    spec.validate();
    if (spec.method != Method::RjMcmc) throw DimensionError("rjmcmc_run requires method=RjMcmc");
    if (spec.k_max < 1) throw DegenerateError("RJ-MCMC needs k_max >= 1");
    config.mcmc.validate();

    const OrderProposal proposal{config.lambda_heat, spec.k_max, false};

    Rng rng(seed);
    const int k0 = std::clamp(config.initial_order, 0, spec.k_max);
    arp::GibbsState state = arp::detail::initial_state(data, k0, spec.intercept);

    RjRunResult out;
    out.draws.burn_in = config.mcmc.burn_in;
    out.draws.thin = config.mcmc.thin;
    out.draws.seed = seed;
    out.draws.intercept = spec.intercept;
    out.draws.draws.reserve((config.mcmc.iterations - config.mcmc.burn_in) / config.mcmc.thin + 1);

    Eigen::VectorXd occupancy = Eigen::VectorXd::Zero(spec.k_max + 1);
    double attempts = 0.0, accepts = 0.0;
    double rb_tail_sum = 0.0, rb_tail_count = 0.0, last_tail_prob = 0.0;
    int consecutive_failures = 0;

    for (int iter = 0; iter < config.mcmc.iterations; ++iter) {
        try {
            // Between-model move; regression block held fixed.
            const ProposedOrder prop = propose_order(state.k, proposal, rng);
            const int c = config.uniform_conditioning ? spec.k_max : std::max(state.k, prop.k_new);
            const OrderAcceptanceTerms terms =
                acceptance_terms(data, state.k, prop.k_new, state.beta2, state.sigma2, proposal,
                                 c, spec.intercept);
            attempts += 1.0;
            if (rng.uniform01() < std::min(1.0, terms.ratio)) {
                accepts += 1.0;
                state.k = prop.k_new;
                if (state.k == 0 && !spec.intercept) {
                    state.rho_xi = arp::RhoXiParams{};
                    state.gamma = 0.0;
                } else {
                    const arp::ArBlockDraw ar = arp::sample_rho_xi(data, state, rng, c);
                    state.rho_xi = ar.rho_xi;
                    state.gamma = ar.gamma;
                }
            }

            // Within-model Gibbs cycle at the current order.
            const int cw = config.uniform_conditioning ? spec.k_max : state.k;
            if (state.k >= 1 || spec.intercept) {
                const arp::ArBlockDraw ar = arp::sample_rho_xi(data, state, rng, cw);
                state.rho_xi = ar.rho_xi;
                state.gamma = ar.gamma;
                last_tail_prob = ar.rho_tail_prob;
            } else {
                last_tail_prob = 0.0;  // k = 0: rho is 0 by convention
            }
            if (!config.freeze_regression) {
                state.beta2 = arp::sample_beta2(data, state, rng, cw);
                state.sigma2 = arp::sample_sigma2(data, state, rng, cw);
            }
            consecutive_failures = 0;
        } catch (const SingularCovariance&) {
            if (++consecutive_failures >= 3)
                throw ChainFailed("three consecutive singular conditionals in RJ-MCMC");
        }
        if (iter >= config.mcmc.burn_in) {
            occupancy(state.k) += 1.0;
            rb_tail_sum += state.k == 0 ? 0.0 : last_tail_prob;
            rb_tail_count += 1.0;
            if ((iter - config.mcmc.burn_in) % config.mcmc.thin == 0)
                out.draws.draws.push_back(state);
        }
    }

    out.draws.acceptance_stats["between_attempts"] = attempts;
    out.draws.acceptance_stats["between_accepts"] = accepts;
    out.draws.acceptance_stats["between_rate"] = attempts > 0.0 ? accepts / attempts : 0.0;
    out.draws.acceptance_stats["rb_tail_mass"] = rb_tail_sum / rb_tail_count;
    out.order_posterior = order_posterior_from_mass(occupancy);
    return out;
}

RjTestResult rjmcmc_test(const Dataset& data, const RegressionSpec& spec,
                         const OrderMcmcConfig& config, std::uint64_t seed) {
    RjTestResult out;
    RjRunResult run = rjmcmc_run(data, spec, config, seed);

    std::size_t tail = 0;
    for (const auto& d : run.draws.draws) {
        const double rho = d.k == 0 ? 0.0 : d.rho_xi.rho;
        if (rho >= 1.0) ++tail;
    }
    out.test.method = spec.method;
    out.test.statistic = static_cast<double>(tail) / static_cast<double>(run.draws.draws.size());
    out.test.threshold = spec.alpha_level;
    out.test.verdict = decide(spec.method, out.test.statistic, out.test.threshold);
    out.test.diagnostics["draws"] = static_cast<double>(run.draws.draws.size());
    out.test.diagnostics["order_mode"] = static_cast<double>(run.order_posterior.mode);
    out.test.diagnostics["order_variance"] = run.order_posterior.variance;
    out.test.diagnostics["between_rate"] = run.draws.acceptance_stats["between_rate"];
    out.test.diagnostics["rb_tail_mass"] = run.draws.acceptance_stats["rb_tail_mass"];
    out.order_posterior = run.order_posterior;
    out.draws = std::move(run.draws);
    return out;
}

}  // namespace bcoint::order
