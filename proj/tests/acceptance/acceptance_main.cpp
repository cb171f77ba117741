// Acceptance suite: one runnable criterion per number, each printing a
// single [PASS]/[FAIL]/[SKIP] line. Run `acceptance all` or `acceptance <n>
// [<n> ...] [--cli <path-to-cli>]`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bcoint/ar1.hpp"
#include "bcoint/arp.hpp"
#include "bcoint/classical.hpp"
#include "bcoint/datagen.hpp"
#include "bcoint/harness.hpp"
#include "bcoint/order.hpp"
#include "support/oracles.hpp"

using namespace bcoint;

namespace {

struct Outcome {
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

std::string g_cli_path;

// --------------------------------------------------------------------------
// 1. Reparameterisation round trip and the roots identity, 10^4 draws.
// --------------------------------------------------------------------------
Outcome criterion_1() {
    Rng rng(101);
    double worst_roundtrip = 0.0, worst_identity = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const int k = 1 + rng.uniform_int(0, 5);
        Eigen::VectorXd phi(k);
        for (int i = 0; i < k; ++i) phi(i) = rng.uniform(-2.0, 2.0);

        const Eigen::VectorXd back = arp::rho_xi_to_phi(arp::phi_to_rho_xi(phi));
        worst_roundtrip = std::max(worst_roundtrip, (back - phi).lpNorm<Eigen::Infinity>());

        const arp::ArParams params = arp::ArParams::from_phi(phi);
        const double identity_gap = std::abs(arp::rho_from_roots(params.roots) - phi.sum());
        worst_identity = std::max(worst_identity, identity_gap);
    }
    Outcome out;
    out.pass = worst_roundtrip < 1e-12 && worst_identity < 1e-8;
    std::ostringstream detail;
    detail << "max round-trip gap " << worst_roundtrip << ", max roots-identity gap "
           << worst_identity << " over 10^4 draws, k <= 6";
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------------------
// 2. Closed-form AR(1) posterior vs 3-d brute-force quadrature, 50 datasets.
// --------------------------------------------------------------------------
Outcome criterion_2() {
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(200, -0.95, 0.95);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        Rng rng(5000 + rep);
        const int T = 5;
        Eigen::VectorXd y(T), x(T);
        for (int t = 0; t < T; ++t) {
            y(t) = rng.uniform(-1.0, 1.0);
            x(t) = rng.uniform(-1.0, 1.0);
        }
        Eigen::MatrixXd values(T, 2);
        values.col(0) = y;
        values.col(1) = x;
        const Dataset data(values, {"Y", "X"}, 0);

        Eigen::VectorXd log_closed(grid.size());
        for (int i = 0; i < grid.size(); ++i)
            log_closed(i) = ar1::log_marginal_likelihood(data, grid(i), true,
                                                         ar1::InitialObs::StationaryPrior);
        log_closed.array() -= log_closed.maxCoeff();
        Eigen::VectorXd closed = log_closed.array().exp();
        double total = 0.0;
        for (int i = 0; i + 1 < grid.size(); ++i)
            total += 0.5 * (closed(i) + closed(i + 1)) * (grid(i + 1) - grid(i));
        closed /= total;

        const Eigen::VectorXd brute = oracle::phi_posterior_full_3d(y, x, grid);
        worst = std::max(worst, (closed - brute).lpNorm<Eigen::Infinity>());
    }
    Outcome out;
    out.pass = worst < 1e-4;
    std::ostringstream detail;
    detail << "max sup-norm gap " << worst << " over 50 datasets (T=5, n=2)";
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------------------
// 3. Richardson-extrapolated unit-root likelihood vs near-unit evaluation.
// --------------------------------------------------------------------------
Outcome criterion_3() {
    // The comparison point phi = 1 - 1e-7 sits a Taylor step of
    // |dlogL/dphi| * 1e-7 away from the limit itself, and that slope grows
    // with T; T = 16 keeps it inside the 1e-6 budget so the check measures
    // extrapolation error rather than the step to the comparison point.
    // (The extrapolated limits agree with evaluations at 1 - 1e-9 to ~1e-8,
    // i.e. the tableau error is far below the tolerance.)
    int converged = 0, attempts = 0;
    double worst = 0.0;
    const double phis[4] = {0.5, 0.8, 0.95, 1.0};
    while (converged < 20 && attempts < 60) {
        const int seed = 42 + attempts;
        const Dataset data =
            oracle::coint_pair(seed, 16, phis[attempts % 4], 2.0, 1.5);
        ++attempts;
        double limit;
        try {
            limit = ar1::log_likelihood_at_unit_root(data, true);
        } catch (const LimitDiverged&) {
            continue;
        }
        const double near = ar1::log_marginal_likelihood(data, 1.0 - 1e-7, true,
                                                         ar1::InitialObs::StationaryPrior);
        // |delta log L| is the relative difference of the likelihood values
        worst = std::max(worst, std::abs(limit - near));
        ++converged;
    }
    Outcome out;
    out.pass = converged == 20 && worst < 1e-6;
    std::ostringstream detail;
    detail << "max |delta log L| " << worst << " over " << converged
           << " converged instances (" << attempts << " attempted)";
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------------------
// 4. Gibbs marginal of rho vs the exact grid posterior, T = 12, k = 1.
// --------------------------------------------------------------------------
Outcome criterion_4() {
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(601, -1.0, 2.0);
    double worst = 0.0;
    for (int instance = 0; instance < 5; ++instance) {
        const Dataset data = oracle::coint_pair(700 + instance, 12, 0.5, 2.0, 0.0, 1.0);

        Eigen::VectorXd log_exact(grid.size());
        for (int i = 0; i < grid.size(); ++i)
            log_exact(i) = ar1::log_marginal_likelihood(data, grid(i), false,
                                                        ar1::InitialObs::Conditional);
        log_exact.array() -= log_exact.maxCoeff();
        Eigen::VectorXd exact = log_exact.array().exp();
        double total = 0.0;
        for (int i = 0; i + 1 < grid.size(); ++i)
            total += 0.5 * (exact(i) + exact(i + 1)) * (grid(i + 1) - grid(i));
        exact /= total;

        const arp::PosteriorDraws draws =
            arp::gibbs_run(data, 1, {220000, 20000, 1}, 9000 + instance);
        std::vector<double> rho;
        rho.reserve(draws.draws.size());
        for (const auto& d : draws.draws) rho.push_back(d.rho_xi.rho);

        const double bw = 0.12;
        const Eigen::VectorXd emp =
            oracle::smooth_on_grid(grid, oracle::histogram_density(grid, rho), bw);
        const Eigen::VectorXd ref = oracle::smooth_on_grid(grid, exact, bw);
        worst = std::max(worst, (emp - ref).lpNorm<Eigen::Infinity>());
    }
    Outcome out;
    out.pass = worst < 0.02;
    std::ostringstream detail;
    detail << "max smoothed sup-norm gap " << worst << " over 5 instances at 2x10^5 draws";
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------------------
// 5. Frozen-regression RJ-MCMC occupancy vs enumerated order masses.
// --------------------------------------------------------------------------
Outcome criterion_5() {
    const int k_max = 3;
    const Dataset data = oracle::coint_pair(321, 18, 0.6, 1.2, 0.0, 0.8);

    RegressionSpec spec;
    spec.method = Method::RjMcmc;
    spec.intercept = false;
    spec.k_max = k_max;

    order::OrderMcmcConfig config;
    config.mcmc.iterations = 1010000;
    config.mcmc.burn_in = 10000;
    config.mcmc.thin = 100;
    config.freeze_regression = true;
    config.uniform_conditioning = true;
    config.initial_order = 1;

    const order::RjRunResult run = order::rjmcmc_run(data, spec, config, 55);

    // the chain froze (beta2, sigma2) at the same deterministic OLS start
    const arp::GibbsState frozen = arp::detail::initial_state(data, config.initial_order);
    Eigen::VectorXd logmass(k_max + 1);
    for (int k = 0; k <= k_max; ++k)
        logmass(k) =
            order::order_conditional_logmass(data, k, frozen.beta2, frozen.sigma2, k_max);
    Eigen::VectorXd expected = (logmass.array() - logmass.maxCoeff()).exp();
    expected /= expected.sum();

    const double tv = 0.5 * (run.order_posterior.mass - expected).lpNorm<1>();
    Outcome out;
    out.pass = tv < 0.01;
    std::ostringstream detail;
    detail << "total variation " << tv << " at 10^6 sweeps; enumerated mass (";
    for (int k = 0; k <= k_max; ++k) detail << (k ? " " : "") << expected(k);
    detail << ")";
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------------------
// 6. Model-order study at desk scale.
// --------------------------------------------------------------------------
Outcome criterion_6() {
    harness::StudyConfig config;
    config.k_max = 5;
    config.intercept = true;
    config.workers = 2;

    const auto rows = harness::run_order_study(config, {100, 500, 1000}, 50, 606);
    const harness::OrderStudyRow& at100 = rows[0];
    const harness::OrderStudyRow& at500 = rows[1];
    const harness::OrderStudyRow& at1000 = rows[2];

    int inversions = 0;
    if (at100.mean_variance < at500.mean_variance) ++inversions;
    if (at500.mean_variance < at1000.mean_variance) ++inversions;

    Outcome out;
    out.pass = at500.accuracy_mode >= 0.80 && at500.accuracy_mode > at500.bic_accuracy &&
               inversions <= 1 && at100.failures + at500.failures + at1000.failures == 0;
    std::ostringstream detail;
    detail << "T=500 accuracy " << at500.accuracy_mode << " (BIC " << at500.bic_accuracy
           << "); variance " << at100.mean_variance << " -> " << at500.mean_variance << " -> "
           << at1000.mean_variance << " (" << inversions << " inversion(s)); 50 trials/cell";
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------------------
// 7. ROC direction at desk scale: Bayesian tests beat Engle-Granger.
// --------------------------------------------------------------------------
Outcome criterion_7() {
    harness::StudyConfig config;
    config.gen.T = 200;
    config.gen.k_lo = config.gen.k_hi = 1;
    config.k_max = 5;
    config.intercept = true;
    config.workers = 2;

    const harness::RocStudyResult ar1_study = harness::run_roc_study(
        config, {Method::Ar1Credible, Method::EngleGranger}, 200, 707);
    const double auc_cred = ar1_study.curves.at(Method::Ar1Credible).auc;
    const double auc_eg1 = ar1_study.curves.at(Method::EngleGranger).auc;

    config.gen.k_lo = config.gen.k_hi = 3;
    const harness::RocStudyResult ar3_study = harness::run_roc_study(
        config, {Method::GibbsFixedOrder, Method::EngleGranger}, 200, 808);
    const double auc_gibbs = ar3_study.curves.at(Method::GibbsFixedOrder).auc;
    const double auc_eg3 = ar3_study.curves.at(Method::EngleGranger).auc;

    Outcome out;
    out.pass = auc_cred > auc_eg1 && auc_gibbs > auc_eg3;
    std::ostringstream detail;
    detail << "AR(1): credible AUC " << auc_cred << " vs EG " << auc_eg1 << "; AR(3): Gibbs AUC "
           << auc_gibbs << " vs EG " << auc_eg3 << " (200 trials each)";
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------------------
// 8. Data-generation invariants over 10^4 instances.
// --------------------------------------------------------------------------
Outcome criterion_8() {
    datagen::GenConfig config;
    config.T = 60;
    config.warmup_steps = 50;
    config.k_lo = 1;
    config.k_hi = 3;
    config.seed = 880;

    const int N = 10000;
    int cointegrated = 0, dx_outliers = 0;
    for (int i = 0; i < N; ++i) {
        const datagen::GenInstance inst = datagen::generate_instance_indexed(config, i);
        const arp::ArParams params = arp::ArParams::from_phi(inst.true_phi);
        if (inst.label == datagen::Label::Cointegrated) {
            ++cointegrated;
            double max_root = 0.0;
            for (int j = 0; j < inst.true_phi.size(); ++j)
                if (!(inst.true_phi(j) > 0.0))
                    return {false, false, "non-positive stationary coefficient"};
            for (const auto& root : params.roots) max_root = std::max(max_root, std::abs(root));
            if (!params.is_stationary() || max_root <= 0.8)
                return {false, false, "stationary draw violates the root conditions"};
            if (!(inst.true_phi.sum() < 1.0))
                return {false, false, "stationary coefficient sum is not below one"};
        } else {
            double sum = 0.0;
            for (int j = 0; j < inst.true_phi.size(); ++j) sum += inst.true_phi(j);
            if (sum != 1.0) return {false, false, "unit-root coefficient sum is not exactly one"};
            if (!params.has_unit_root())
                return {false, false, "unit-root instance lacks a unit root"};
            double max_other = 0.0;
            for (const auto& root : params.roots)
                if (std::abs(root - std::complex<double>(1.0, 0.0)) > 1e-8)
                    max_other = std::max(max_other, std::abs(root));
            if (inst.true_phi.size() > 1 && (max_other <= 0.8 || max_other >= 1.0))
                return {false, false, "difference-process roots violate the floor"};
        }
        if (!(inst.true_beta2 >= 0.0 && inst.true_beta2 <= 5.0) ||
            !(inst.true_intercept >= 0.0 && inst.true_intercept <= 5.0))
            return {false, false, "regression truth outside [0, 5]"};

        const Eigen::VectorXd dx = first_differences(inst.data.values().col(1));
        if (std::abs(dx.mean()) > 4.0 / std::sqrt(static_cast<double>(dx.size())))
            ++dx_outliers;
    }
    const double freq = static_cast<double>(cointegrated) / N;

    Outcome out;
    out.pass = std::abs(freq - 0.5) < 0.02 && dx_outliers <= 10;
    std::ostringstream detail;
    detail << "label frequency " << freq << ", " << dx_outliers
           << " regressor-increment 4-sigma outliers over 10^4 instances";
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------------------
// 9. Real-data pipeline: documented, not auto-verified.
// --------------------------------------------------------------------------
Outcome criterion_9() {
    Outcome out;
    out.skipped = true;
    out.pass = true;
    out.detail =
        "real income/consumption and BP/Shell series are not bundled; "
        "run `bcoint test --method rjmcmc` on user CSVs (expected: all / 98% "
        "stationary posterior mass, see README)";
    return out;
}

// --------------------------------------------------------------------------
// 10. Byte-identical artifacts for seeded CLI commands.
// --------------------------------------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_cmd(const std::string& cmd) {
    return std::system((cmd + " > /dev/null 2>&1").c_str());
}

Outcome criterion_10() {
    Outcome out;
    if (g_cli_path.empty()) {
        out.detail = "pass --cli <path> to run the determinism check";
        return out;
    }
    const std::string dir1 = "/tmp/bcoint_acc10_a", dir2 = "/tmp/bcoint_acc10_b";
    run_cmd("rm -rf " + dir1 + " " + dir2);
    run_cmd("mkdir -p " + dir1 + " " + dir2);

    std::vector<std::pair<std::string, std::string>> comparisons;
    for (const std::string& dir : {dir1, dir2}) {
        const std::string base = g_cli_path + " ";
        if (run_cmd(base + "simulate --T 200 --order 2 --seed 11 --output " + dir +
                    "/pair.csv") != 0)
            return {false, false, "simulate failed"};
        if (run_cmd(base + "test --input " + dir + "/pair.csv --method ar1-credible " +
                    "--intercept --seed 3 --output-dir " + dir) != 0)
            return {false, false, "ar1-credible test failed"};
        if (run_cmd(base + "test --input " + dir + "/pair.csv --method rjmcmc --k-max 3 " +
                    "--iterations 3000 --burn-in 500 --seed 5 --output-dir " + dir) != 0)
            return {false, false, "rjmcmc test failed"};
        if (run_cmd(base + "bench-roc --trials 8 --T 80 --order 1 " +
                    "--methods ar1-credible,engle-granger --seed 9 --workers 2 --output-dir " +
                    dir) != 0)
            return {false, false, "bench-roc failed"};
    }
    for (const std::string& name :
         {"pair.csv", "pair.csv.truth", "phi_posterior.csv", "draws.csv", "order_posterior.csv",
          "residual_band.csv", "roc_results.csv", "roc_auc.csv"}) {
        comparisons.emplace_back(dir1 + "/" + name, dir2 + "/" + name);
    }
    for (const auto& [a, b] : comparisons) {
        const std::string left = slurp(a), right = slurp(b);
        if (left.empty()) return {false, false, "missing artifact " + a};
        if (left != right) return {false, false, "artifact differs: " + a};
    }
    out.pass = true;
    out.detail = std::to_string(comparisons.size()) + " artifacts byte-identical across reruns";
    return out;
}

const char* kDescriptions[11] = {
    "",
    "reparameterisation round trip and roots identity",
    "AR(1) closed form vs 3-d brute-force quadrature",
    "unit-root limit vs near-unit evaluation",
    "Gibbs rho marginal vs exact grid posterior",
    "frozen RJ-MCMC occupancy vs enumerated masses",
    "model-order study: RJ-MCMC beats BIC, variance shrinks",
    "ROC study: Bayesian tests beat Engle-Granger",
    "data-generation invariants",
    "real-data pipeline (documented only)",
    "seeded CLI commands produce byte-identical artifacts",
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> requested;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) {
            g_cli_path = argv[++i];
        } else if (arg == "all") {
            for (int c = 1; c <= 10; ++c) requested.push_back(c);
        } else {
            requested.push_back(std::atoi(arg.c_str()));
        }
    }
    if (requested.empty())
        for (int c = 1; c <= 10; ++c) requested.push_back(c);

    int failures = 0;
    for (int criterion : requested) {
        if (criterion < 1 || criterion > 10) {
            std::cerr << "unknown criterion " << criterion << "\n";
            ++failures;
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            switch (criterion) {
                case 1: outcome = criterion_1(); break;
                case 2: outcome = criterion_2(); break;
                case 3: outcome = criterion_3(); break;
                case 4: outcome = criterion_4(); break;
                case 5: outcome = criterion_5(); break;
                case 6: outcome = criterion_6(); break;
                case 7: outcome = criterion_7(); break;
                case 8: outcome = criterion_8(); break;
                case 9: outcome = criterion_9(); break;
                case 10: outcome = criterion_10(); break;
            }
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char* tag = outcome.skipped ? "[SKIP]" : (outcome.pass ? "[PASS]" : "[FAIL]");
        std::printf("%s criterion %d: %s (%s; %.1f s)\n", tag, criterion,
                    kDescriptions[criterion], outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!outcome.pass && !outcome.skipped) ++failures;
    }
    return failures;
}
