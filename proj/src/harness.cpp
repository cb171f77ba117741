#include "bcoint/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "bcoint/ar1.hpp"
#include "bcoint/classical.hpp"
#include "bcoint/csv.hpp"

namespace bcoint::harness {

namespace {

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
    workers = std::max(1, workers);
    if (workers == 1 || count < 2) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Ordering statistic, larger = more unit-root-like (less cointegrated).
double method_statistic(Method method, const Dataset& data, const StudyConfig& config,
                        std::uint64_t seed) {
    switch (method) {
        case Method::Ar1BayesFactor: {
            const ar1::BayesFactorResult bf = ar1::bayes_factor(data, config.intercept);
            return bf.log_numerator - bf.log_denominator;  // log K
        }
        case Method::Ar1Credible:
            return ar1::phi_posterior(data, config.intercept).prob_phi_ge_1;
        case Method::GibbsFixedOrder: {
            RegressionSpec spec;
            spec.method = Method::GibbsFixedOrder;
            spec.intercept = config.intercept;
            spec.order = config.gen.k_hi;
            spec.k_max = std::max(config.k_max, config.gen.k_hi);
            // Rao-Blackwellised tail mass: same posterior quantity as the
            // draw fraction with far less Monte Carlo noise in the ranking.
            return arp::gibbs_test(data, spec, config.mcmc, seed)
                .diagnostics.at("rb_tail_mass");
        }
        case Method::RjMcmc: {
            RegressionSpec spec;
            spec.method = Method::RjMcmc;
            spec.intercept = config.intercept;
            spec.k_max = config.k_max;
            order::OrderMcmcConfig oc;
            oc.mcmc = config.mcmc;
            return order::rjmcmc_test(data, spec, oc, seed)
                .test.diagnostics.at("rb_tail_mass");
        }
        case Method::EngleGranger: {
            const classical::OlsFit fit =
                classical::ols(data.y(), data.X(), config.intercept);
            const classical::AdfResult adf = classical::adf_test(
                fit.residuals, config.k_max, 0.05, data.n(), config.intercept);
            return adf.statistic;  // less negative = more unit-root-like
        }
    }
    throw DomainError("unhandled method");
}

}  // namespace

RocCurve roc_from_scores(const std::vector<double>& statistics,
                         const std::vector<bool>& truly_cointegrated) {
    if (statistics.size() != truly_cointegrated.size())
        throw DimensionError("statistic/label length mismatch");
    const int n = static_cast<int>(statistics.size());
    int positives = 0;
    for (bool c : truly_cointegrated) positives += c ? 1 : 0;
    const int negatives = n - positives;
    if (positives == 0 || negatives == 0)
        throw InsufficientData("ROC needs both cointegrated and non-cointegrated instances");

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return statistics[a] < statistics[b]; });

    RocCurve curve;
    curve.evaluated = n;
    curve.thresholds.push_back(-std::numeric_limits<double>::infinity());
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    int tp = 0, fp = 0;
    for (int at = 0; at < n;) {
        const double value = statistics[idx[at]];
        // consume ties together so the sweep is a well-defined step function
        while (at < n && statistics[idx[at]] == value) {
            if (truly_cointegrated[idx[at]]) ++tp;
            else ++fp;
            ++at;
        }
        curve.thresholds.push_back(value);
        curve.tpr.push_back(static_cast<double>(tp) / positives);
        curve.fpr.push_back(static_cast<double>(fp) / negatives);
    }
    double auc = 0.0;
    for (std::size_t i = 1; i < curve.fpr.size(); ++i)
        auc += 0.5 * (curve.tpr[i] + curve.tpr[i - 1]) * (curve.fpr[i] - curve.fpr[i - 1]);
    curve.auc = auc;
    return curve;
}

RocStudyResult run_roc_study(const StudyConfig& config, const std::vector<Method>& methods,
                             int trials, std::uint64_t seed) {
    if (trials < 2) throw InsufficientData("ROC study needs at least two trials");
    if (methods.empty()) throw DimensionError("no methods requested");

    const int n_methods = static_cast<int>(methods.size());
    RocStudyResult result;
    result.trials = trials;
    result.records.resize(static_cast<std::size_t>(trials) * n_methods);

    datagen::GenConfig gen = config.gen;
    gen.seed = seed;

    parallel_for(trials, config.workers, [&](int i) {
        const datagen::GenInstance instance = datagen::generate_instance_indexed(gen, i);
        const bool truth = instance.label == datagen::Label::Cointegrated;
        for (int m = 0; m < n_methods; ++m) {
            InstanceRecord record;
            record.instance = i;
            record.method = methods[m];
            record.truly_cointegrated = truth;
            const std::uint64_t method_seed =
                Rng::derive(seed, static_cast<std::uint64_t>(i) * n_methods + m + 1);
            try {
                record.statistic =
                    method_statistic(methods[m], instance.data, config, method_seed);
            } catch (const Error&) {
                record.failed = true;
            }
            result.records[static_cast<std::size_t>(i) * n_methods + m] = record;
        }
    });

    for (int m = 0; m < n_methods; ++m) {
        std::vector<double> stats;
        std::vector<bool> labels;
        int failures = 0;
        for (int i = 0; i < trials; ++i) {
            const InstanceRecord& rec = result.records[static_cast<std::size_t>(i) * n_methods + m];
            if (rec.failed) {
                ++failures;
                continue;
            }
            stats.push_back(rec.statistic);
            labels.push_back(rec.truly_cointegrated);
        }
        RocCurve curve = roc_from_scores(stats, labels);
        curve.failures = failures;
        result.curves[methods[m]] = std::move(curve);
    }
    return result;
}

std::vector<OrderStudyRow> run_order_study(const StudyConfig& config,
                                           const std::vector<int>& T_list, int trials,
                                           std::uint64_t seed) {
    if (trials < 2) throw InsufficientData("order study needs at least two trials");
    std::vector<OrderStudyRow> rows;
    for (std::size_t ti = 0; ti < T_list.size(); ++ti) {
        datagen::GenConfig gen = config.gen;
        gen.T = T_list[ti];
        gen.k_lo = 1;
        gen.k_hi = 3;
        gen.seed = Rng::derive(seed, 1000003ULL * (ti + 1));

        std::vector<int> rj_hits(trials, 0), bic_hits(trials, 0), failed(trials, 0);
        std::vector<double> variances(trials, 0.0);

        parallel_for(trials, config.workers, [&](int i) {
            const datagen::GenInstance instance = datagen::generate_instance_indexed(gen, i);
            const int true_k = static_cast<int>(instance.true_phi.size());
            try {
                RegressionSpec spec;
                spec.method = Method::RjMcmc;
                spec.intercept = config.intercept;
                spec.k_max = config.k_max;
                order::OrderMcmcConfig oc;
                oc.mcmc = config.mcmc;
                const order::RjRunResult run = order::rjmcmc_run(
                    instance.data, spec, oc, Rng::derive(gen.seed, 7ULL * i + 3));
                rj_hits[i] = run.order_posterior.mode == true_k ? 1 : 0;
                variances[i] = run.order_posterior.variance;

                const classical::OlsFit fit = classical::ols(
                    instance.data.y(), instance.data.X(), config.intercept);
                const classical::AdfResult adf =
                    classical::adf_test(fit.residuals, config.k_max, 0.05,
                                        instance.data.n(), config.intercept);
                bic_hits[i] = adf.selected_lags + 1 == true_k ? 1 : 0;
            } catch (const Error&) {
                failed[i] = 1;
            }
        });

        OrderStudyRow row;
        row.T = T_list[ti];
        int ok = 0;
        for (int i = 0; i < trials; ++i) {
            if (failed[i]) {
                ++row.failures;
                continue;
            }
            ++ok;
            row.accuracy_mode += rj_hits[i];
            row.bic_accuracy += bic_hits[i];
            row.mean_variance += variances[i];
        }
        if (ok == 0) throw NumericalError("every order-study trial failed");
        row.trials = ok;
        row.accuracy_mode /= ok;
        row.bic_accuracy /= ok;
        row.mean_variance /= ok;
        rows.push_back(row);
    }
    return rows;
}

ResidualBand residual_posterior_summary(const Dataset& data, const arp::PosteriorDraws& draws) {
    if (draws.draws.empty()) throw DimensionError("no posterior draws");
    const Eigen::MatrixXd X = data.X();
    const Eigen::VectorXd y = data.y();
    const int m = static_cast<int>(X.cols());
    const double N = static_cast<double>(draws.draws.size());

    Eigen::VectorXd mean_beta = Eigen::VectorXd::Zero(m);
    for (const auto& d : draws.draws) {
        if (d.beta2.size() != m) throw DimensionError("draw dimension mismatch");
        mean_beta += d.beta2;
    }
    mean_beta /= N;
    // centred second pass keeps the variance free of cancellation
    Eigen::MatrixXd cov_beta = Eigen::MatrixXd::Zero(m, m);
    for (const auto& d : draws.draws) {
        const Eigen::VectorXd centred = d.beta2 - mean_beta;
        cov_beta += centred * centred.transpose();
    }
    cov_beta /= std::max(N - 1.0, 1.0);

    ResidualBand band;
    band.mean = y - X * mean_beta;
    band.stddev.resize(data.T());
    for (int t = 0; t < data.T(); ++t) {
        const Eigen::VectorXd w = X.row(t).transpose();
        band.stddev(t) = std::sqrt(std::max(w.dot(cov_beta * w), 0.0));
    }
    band.lower = band.mean - 3.0 * band.stddev;
    band.upper = band.mean + 3.0 * band.stddev;
    return band;
}

void write_roc_outputs(const std::string& dir, const RocStudyResult& result) {
    std::ostringstream records;
    records << "instance,method,statistic,truly_cointegrated,failed\n";
    for (const auto& rec : result.records) {
        records << rec.instance << ',' << method_name(rec.method) << ','
                << csv::format_double(rec.statistic) << ',' << (rec.truly_cointegrated ? 1 : 0)
                << ',' << (rec.failed ? 1 : 0) << '\n';
    }
    csv::atomic_write(dir + "/roc_results.csv", records.str());

    std::ostringstream summary;
    summary << "method,threshold,fpr,tpr\n";
    std::ostringstream aucs;
    aucs << "method,auc,evaluated,failures\n";
    for (const auto& [method, curve] : result.curves) {
        for (std::size_t i = 0; i < curve.fpr.size(); ++i)
            summary << method_name(method) << ',' << csv::format_double(curve.thresholds[i])
                    << ',' << csv::format_double(curve.fpr[i]) << ','
                    << csv::format_double(curve.tpr[i]) << '\n';
        aucs << method_name(method) << ',' << csv::format_double(curve.auc) << ','
             << curve.evaluated << ',' << curve.failures << '\n';

        std::ostringstream plot;
        plot << "# fpr tpr (" << method_name(method) << ")\n";
        for (std::size_t i = 0; i < curve.fpr.size(); ++i)
            plot << csv::format_double(curve.fpr[i]) << ' ' << csv::format_double(curve.tpr[i])
                 << '\n';
        csv::atomic_write(dir + "/roc_" + method_name(method) + ".dat", plot.str());
    }
    csv::atomic_write(dir + "/roc_points.csv", summary.str());
    csv::atomic_write(dir + "/roc_auc.csv", aucs.str());
}

void write_order_outputs(const std::string& dir, const std::vector<OrderStudyRow>& rows) {
    std::ostringstream out;
    out << "T,trials,rjmcmc_accuracy_mode,rjmcmc_mean_variance,bic_accuracy,failures\n";
    for (const auto& row : rows) {
        out << row.T << ',' << row.trials << ',' << csv::format_double(row.accuracy_mode) << ','
            << csv::format_double(row.mean_variance) << ',' << csv::format_double(row.bic_accuracy)
            << ',' << row.failures << '\n';
    }
    csv::atomic_write(dir + "/order_study.csv", out.str());
}

}  // namespace bcoint::harness
