#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bcoint/ar1.hpp"
#include "bcoint/classical.hpp"
#include "bcoint/csv.hpp"
#include "bcoint/datagen.hpp"
#include "bcoint/harness.hpp"
#include "bcoint/order.hpp"

namespace {

using namespace bcoint;

constexpr std::uint64_t kDefaultSeed = 20240601;

std::uint64_t default_seed() {
    // BCOINT_SEED overrides the built-in default; an explicit --seed wins.
    if (const char* env = std::getenv("BCOINT_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring unparseable BCOINT_SEED\n";
        }
    }
    return kDefaultSeed;
}

std::string verdict_name(Verdict v) {
    return v == Verdict::Cointegrated ? "cointegrated" : "not-cointegrated";
}

void print_result(const TestResult& result, std::uint64_t seed) {
    std::cout << "Method:    " << method_name(result.method) << "\n"
              << "Verdict:   " << verdict_name(result.verdict) << "\n"
              << "Statistic: " << csv::format_double(result.statistic) << "\n"
              << "Threshold: " << csv::format_double(result.threshold) << "\n\n";
    std::cout << "verdict=" << verdict_name(result.verdict) << "\n"
              << "statistic=" << csv::format_double(result.statistic) << "\n"
              << "threshold=" << csv::format_double(result.threshold) << "\n"
              << "method=" << method_name(result.method) << "\n"
              << "seed=" << seed << "\n";
    for (const auto& [key, value] : result.diagnostics)
        std::cout << "diag." << key << "=" << csv::format_double(value) << "\n";
}

std::string draws_csv(const arp::PosteriorDraws& draws, const std::vector<std::string>& beta_labels,
                      int k_max) {
    std::ostringstream out;
    out << "draw,k,rho";
    for (int i = 1; i < k_max; ++i) out << ",xi" << i;
    if (draws.intercept) out << ",gamma";
    for (const auto& label : beta_labels) out << ",beta_" << label;
    out << ",sigma2\n";
    int index = 0;
    for (const auto& d : draws.draws) {
        // rho is reported as 0 for k = 0 draws (white noise is stationary);
        // xi columns beyond the draw's order are written as 0.
        out << index++ << ',' << d.k << ','
            << csv::format_double(d.k == 0 ? 0.0 : d.rho_xi.rho);
        for (int i = 1; i < k_max; ++i)
            out << ',' << csv::format_double(i - 1 < d.rho_xi.xi.size() ? d.rho_xi.xi(i - 1) : 0.0);
        if (draws.intercept) out << ',' << csv::format_double(d.gamma);
        for (int j = 0; j < d.beta2.size(); ++j) out << ',' << csv::format_double(d.beta2(j));
        out << ',' << csv::format_double(d.sigma2) << '\n';
    }
    return out.str();
}

std::vector<std::string> beta_labels_for(const Dataset& data) {
    std::vector<std::string> labels;
    for (int j = 0; j < data.n(); ++j)
        if (j != data.regressand_index()) labels.push_back(data.labels()[j]);
    return labels;
}

int run_test(const std::string& input, const std::string& regressand, RegressionSpec spec,
             const arp::McmcConfig& mcmc, double lambda_heat, bool uniform_conditioning,
             std::uint64_t seed, const std::string& output_dir) {
    Dataset data = csv::load_csv(input);
    if (!regressand.empty()) data = data.with_regressand(regressand);

    TestResult result;
    switch (spec.method) {
        case Method::Ar1BayesFactor:
            result = ar1::ar1_test(data, spec);
            break;
        case Method::Ar1Credible: {
            result = ar1::ar1_test(data, spec);
            const ar1::PhiPosterior post = ar1::phi_posterior(data, spec.intercept);
            std::ostringstream out;
            out << "phi,density\n";
            for (int i = 0; i < post.grid.size(); ++i)
                out << csv::format_double(post.grid(i)) << ','
                    << csv::format_double(post.density(i)) << '\n';
            csv::atomic_write(output_dir + "/phi_posterior.csv", out.str());
            break;
        }
        case Method::GibbsFixedOrder: {
            result = arp::gibbs_test(data, spec, mcmc, seed);
            const arp::PosteriorDraws draws =
                arp::gibbs_run(data, *spec.order, mcmc, seed, spec.intercept);
            csv::atomic_write(output_dir + "/draws.csv",
                              draws_csv(draws, beta_labels_for(data), *spec.order));
            break;
        }
        case Method::RjMcmc: {
            order::OrderMcmcConfig oc;
            oc.mcmc = mcmc;
            oc.lambda_heat = lambda_heat;
            oc.uniform_conditioning = uniform_conditioning;
            const order::RjTestResult rj = order::rjmcmc_test(data, spec, oc, seed);
            result = rj.test;

            csv::atomic_write(output_dir + "/draws.csv",
                              draws_csv(rj.draws, beta_labels_for(data), spec.k_max));
            std::ostringstream order_out;
            order_out << "k,mass\n";
            for (int k = 0; k < rj.order_posterior.mass.size(); ++k)
                order_out << k << ',' << csv::format_double(rj.order_posterior.mass(k)) << '\n';
            csv::atomic_write(output_dir + "/order_posterior.csv", order_out.str());

            const harness::ResidualBand band = harness::residual_posterior_summary(data, rj.draws);
            std::ostringstream band_out;
            band_out << "t,mean,stddev,lower,upper\n";
            for (int t = 0; t < band.mean.size(); ++t)
                band_out << t << ',' << csv::format_double(band.mean(t)) << ','
                         << csv::format_double(band.stddev(t)) << ','
                         << csv::format_double(band.lower(t)) << ','
                         << csv::format_double(band.upper(t)) << '\n';
            csv::atomic_write(output_dir + "/residual_band.csv", band_out.str());
            break;
        }
        case Method::EngleGranger:
            result = classical::engle_granger_test(data, spec);
            break;
    }
    print_result(result, seed);
    return 0;
}

int run_simulate(const datagen::GenConfig& config, const std::string& output) {
    const datagen::GenInstance instance = datagen::generate_instance_indexed(config, 0);
    csv::atomic_write(output, csv::dataset_to_csv(instance.data));

    std::ostringstream truth;
    truth << "label="
          << (instance.label == datagen::Label::Cointegrated ? "cointegrated"
                                                             : "not-cointegrated")
          << "\nk=" << instance.true_phi.size() << "\nphi=";
    for (int i = 0; i < instance.true_phi.size(); ++i) {
        if (i) truth << ',';
        truth << csv::format_double(instance.true_phi(i));
    }
    truth << "\nbeta2=" << csv::format_double(instance.true_beta2)
          << "\nalpha=" << csv::format_double(instance.true_intercept)
          << "\nseed=" << config.seed << "\n";
    csv::atomic_write(output + ".truth", truth.str());
    std::cout << "wrote " << output << " and " << output << ".truth\n";
    return 0;
}

int run_summarize(const std::string& input) {
    const Dataset table = csv::load_csv(input);
    const auto& labels = table.labels();
    for (int j = 0; j < table.n(); ++j) {
        const Eigen::VectorXd col = table.values().col(j);
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().sum() /
                                    std::max<double>(col.size() - 1, 1));
        std::cout << "col." << labels[j] << ".mean=" << csv::format_double(mean) << "\n"
                  << "col." << labels[j] << ".sd=" << csv::format_double(sd) << "\n";
        if (labels[j] == "rho") {
            const double tail =
                (col.array() >= 1.0).count() / static_cast<double>(col.size());
            std::cout << "tail_mass_rho_ge_1=" << csv::format_double(tail) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian residual-based cointegration testing"};
    app.require_subcommand(1);

    std::string input, output = "instance.csv", output_dir = ".", regressand, method = "rjmcmc";
    std::uint64_t seed = default_seed();
    bool intercept = true;
    int order = 1, k_max = 5;
    double alpha = 0.05, lambda = 1.0;
    bool uniform_conditioning = false;
    arp::McmcConfig mcmc;
    datagen::GenConfig gen;
    int trials = 0, workers = 1;
    bool full_scale = false;
    std::vector<int> t_list;
    std::string methods_csv = "ar1-credible,engle-granger";

    auto* test = app.add_subcommand("test", "run a cointegration test on a CSV file");
    test->add_option("--input", input, "input CSV path")->required();
    test->add_option("--regressand", regressand, "regressand column name (default: first)");
    test->add_option("--method", method, "ar1-bf|ar1-credible|gibbs|rjmcmc|engle-granger");
    test->add_flag("--intercept,!--no-intercept", intercept, "intercept in the regression");
    test->add_option("--order", order, "fixed residual order (gibbs)");
    test->add_option("--k-max", k_max, "maximum residual order");
    test->add_option("--alpha", alpha, "decision threshold");
    test->add_option("--iterations", mcmc.iterations, "MCMC iterations");
    test->add_option("--burn-in", mcmc.burn_in, "MCMC burn-in");
    test->add_option("--thin", mcmc.thin, "MCMC thinning stride");
    test->add_option("--lambda", lambda, "order-proposal heat parameter");
    test->add_flag("--uniform-conditioning", uniform_conditioning,
                   "condition all order masses on the first k-max observations");
    test->add_option("--seed", seed, "RNG seed");
    test->add_option("--output-dir", output_dir, "directory for posterior/draw CSVs");

    auto* simulate = app.add_subcommand("simulate", "write a synthetic benchmark instance");
    simulate->add_option("--T", gen.T, "observation count");
    simulate->add_option("--order", gen.k_lo, "residual order");
    simulate->add_option("--order-max", gen.k_hi, "upper order for uniform draw (default: order)");
    simulate->add_option("--unit-root-prob", gen.p_unit_root, "probability of a unit root");
    simulate->add_option("--root-floor", gen.root_floor, "minimum magnitude of the largest root");
    simulate->add_option("--coef-lo", gen.coef_lo, "regression coefficient lower bound");
    simulate->add_option("--coef-hi", gen.coef_hi, "regression coefficient upper bound");
    simulate->add_option("--sigma2", gen.sigma2, "white-noise variance");
    simulate->add_option("--warmup", gen.warmup_steps, "discarded leading steps");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--output", output, "output CSV path");

    auto* bench_roc = app.add_subcommand("bench-roc", "classification (ROC) study");
    bench_roc->add_option("--trials", trials, "instance count (default 200)");
    bench_roc->add_option("--T", gen.T, "observation count");
    bench_roc->add_option("--order", gen.k_lo, "residual order of the generated instances");
    bench_roc->add_option("--methods", methods_csv, "comma-separated method list");
    bench_roc->add_flag("--intercept,!--no-intercept", intercept, "intercept in the regressions");
    bench_roc->add_option("--k-max", k_max, "maximum residual order");
    bench_roc->add_option("--iterations", mcmc.iterations, "MCMC iterations");
    bench_roc->add_option("--burn-in", mcmc.burn_in, "MCMC burn-in");
    bench_roc->add_option("--seed", seed, "RNG seed");
    bench_roc->add_option("--workers", workers, "worker pool size");
    bench_roc->add_option("--output-dir", output_dir, "report directory");
    bench_roc->add_flag("--full-scale", full_scale, "full-paper scale (2500 trials)");

    auto* bench_order = app.add_subcommand("bench-order", "model-order accuracy study");
    bench_order->add_option("--trials", trials, "trials per length (default 50)");
    bench_order->add_option("--T", t_list, "observation lengths (repeatable)");
    bench_order->add_option("--k-max", k_max, "maximum residual order");
    bench_order->add_option("--iterations", mcmc.iterations, "MCMC iterations");
    bench_order->add_option("--burn-in", mcmc.burn_in, "MCMC burn-in");
    bench_order->add_option("--seed", seed, "RNG seed");
    bench_order->add_option("--workers", workers, "worker pool size");
    bench_order->add_option("--output-dir", output_dir, "report directory");
    bench_order->add_flag("--full-scale", full_scale, "full-paper scale (250 trials)");

    auto* summarize = app.add_subcommand("summarize", "summarise a draws CSV");
    summarize->add_option("--input", input, "draws CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (test->parsed()) {
            RegressionSpec spec;
            spec.method = method_from_name(method);
            spec.intercept = intercept;
            spec.k_max = k_max;
            spec.alpha_level = alpha;
            if (spec.method == Method::GibbsFixedOrder) spec.order = order;
            return run_test(input, regressand, spec, mcmc, lambda, uniform_conditioning, seed,
                            output_dir);
        }
        if (simulate->parsed()) {
            if (simulate->count("--order-max") == 0) gen.k_hi = gen.k_lo;
            gen.seed = seed;
            return run_simulate(gen, output);
        }
        if (bench_roc->parsed()) {
            harness::StudyConfig config;
            config.gen = gen;
            config.gen.k_hi = config.gen.k_lo;
            config.mcmc = mcmc;
            config.k_max = k_max;
            config.intercept = intercept;
            config.workers = workers;
            std::vector<Method> methods;
            std::istringstream stream(methods_csv);
            std::string token;
            while (std::getline(stream, token, ',')) methods.push_back(method_from_name(token));
            const int n_trials = trials > 0 ? trials : (full_scale ? 2500 : 200);
            const harness::RocStudyResult result =
                harness::run_roc_study(config, methods, n_trials, seed);
            harness::write_roc_outputs(output_dir, result);
            for (const auto& [m, curve] : result.curves)
                std::cout << "auc." << method_name(m) << "=" << csv::format_double(curve.auc)
                          << "\n";
            return 0;
        }
        if (bench_order->parsed()) {
            harness::StudyConfig config;
            config.mcmc = mcmc;
            config.k_max = k_max;
            config.intercept = intercept;
            config.workers = workers;
            if (t_list.empty()) t_list = {100, 200, 500, 750, 1000};
            const int n_trials = trials > 0 ? trials : (full_scale ? 250 : 50);
            const auto rows = harness::run_order_study(config, t_list, n_trials, seed);
            harness::write_order_outputs(output_dir, rows);
            for (const auto& row : rows)
                std::cout << "T=" << row.T << " accuracy=" << csv::format_double(row.accuracy_mode)
                          << " variance=" << csv::format_double(row.mean_variance)
                          << " bic=" << csv::format_double(row.bic_accuracy) << "\n";
            return 0;
        }
        if (summarize->parsed()) return run_summarize(input);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
