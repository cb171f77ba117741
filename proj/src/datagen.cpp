#include "bcoint/datagen.hpp"

#include <cmath>

namespace bcoint::datagen {

void GenConfig::validate() const {
    if (T < 8) throw DimensionError("generated series too short");
    if (k_lo < 1 || k_hi < k_lo) throw DimensionError("invalid order range");
    if (p_unit_root < 0.0 || p_unit_root > 1.0) throw DomainError("p_unit_root outside [0,1]");
    if (root_floor <= 0.0 || root_floor >= 1.0) throw DomainError("root_floor outside (0,1)");
    if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be positive");
    if (coef_hi < coef_lo) throw DomainError("empty coefficient interval");
    if (warmup_steps < 0) throw DomainError("negative warmup");
}

Eigen::VectorXd sample_stationary_constrained(int k, double root_floor, Rng& rng) {
    if (k < 1) throw DegenerateError("stationary sampling needs order >= 1");
    constexpr long kMaxAttempts = 1000000;
    for (long attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Eigen::VectorXd phi(k);
        for (int i = 0; i < k; ++i) phi(i) = 1.0 - rng.uniform01();  // (0, 1]
        const arp::ArParams params = arp::ArParams::from_phi(phi);
        double max_root = 0.0;
        bool inside = true;
        for (const auto& root : params.roots) {
            const double mag = std::abs(root);
            max_root = std::max(max_root, mag);
            if (mag >= 1.0) {
                inside = false;
                break;
            }
        }
        if (inside && max_root > root_floor) return phi;
    }
    throw GenerationStalled("no stationary draw accepted in 10^6 attempts");
}

Eigen::VectorXd embed_unit_root(const Eigen::VectorXd& psi) {
    const int k = static_cast<int>(psi.size()) + 1;
    if (k == 1) {
        Eigen::VectorXd phi(1);
        phi(0) = 1.0;
        return phi;
    }
    if (!arp::ArParams::from_phi(psi).is_stationary())
        throw DomainError("difference-process coefficients must be stationary");
    Eigen::VectorXd phi(k);
    phi(0) = 1.0 + psi(0);
    for (int i = 1; i + 1 < k; ++i) phi(i) = psi(i) - psi(i - 1);
    // The last coefficient is -psi_{k-1}; closing the telescoping sum instead
    // keeps sum(phi) at exactly one in floating point.
    double partial = 0.0;
    for (int i = 0; i + 1 < k; ++i) partial += phi(i);
    phi(k - 1) = 1.0 - partial;
    return phi;
}

Eigen::VectorXd simulate_ar(const Eigen::VectorXd& phi, int T, double sigma2, int warmup,
                            Rng& rng) {
    const int k = static_cast<int>(phi.size());
    const int total = T + warmup;
    if (total <= k) throw DimensionError("simulation shorter than the lag order");
    const double sd = std::sqrt(sigma2);
    Eigen::VectorXd path = Eigen::VectorXd::Zero(total);
    for (int t = k; t < total; ++t) {
        double value = sd * rng.normal();
        for (int i = 0; i < k; ++i) value += phi(i) * path(t - 1 - i);
        path(t) = value;
    }
    return path.tail(T);
}

GenInstance generate_instance(const GenConfig& config, Rng& rng) {
    config.validate();

    const bool unit_root = rng.uniform01() < config.p_unit_root;
    const int k = config.k_lo == config.k_hi ? config.k_lo
                                             : rng.uniform_int(config.k_lo, config.k_hi);

    Eigen::VectorXd phi;
    if (unit_root) {
        Eigen::VectorXd psi(0);
        if (k > 1) psi = sample_stationary_constrained(k - 1, config.root_floor, rng);
        phi = embed_unit_root(psi);
    } else {
        phi = sample_stationary_constrained(k, config.root_floor, rng);
    }

    const Eigen::VectorXd r =
        simulate_ar(phi, config.T, config.sigma2, config.warmup_steps, rng);

    Eigen::VectorXd x(config.T);
    double level = 0.0;
    for (int t = 0; t < config.T; ++t) {
        level += rng.normal();
        x(t) = level;
    }

    const double beta2 = rng.uniform(config.coef_lo, config.coef_hi);
    const double alpha = rng.uniform(config.coef_lo, config.coef_hi);

    Eigen::MatrixXd values(config.T, 2);
    values.col(0) = (beta2 * x).array() + alpha + r.array();
    values.col(1) = x;

    GenInstance out{Dataset(std::move(values), {"Y", "X"}, 0),
                    unit_root ? Label::NotCointegrated : Label::Cointegrated, phi, beta2, alpha};
    return out;
}

GenInstance generate_instance_indexed(const GenConfig& config, std::uint64_t index) {
    Rng rng(Rng::derive(config.seed, index));
    return generate_instance(config, rng);
}

}  // namespace bcoint::datagen
