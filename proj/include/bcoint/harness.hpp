#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "bcoint/arp.hpp"
#include "bcoint/core.hpp"
#include "bcoint/datagen.hpp"
#include "bcoint/order.hpp"

namespace bcoint::harness {

/// One classifier's ROC curve. Every method statistic is oriented so larger
/// means "more unit-root-like"; an instance is classified cointegrated when
/// its statistic is at most the swept threshold.
struct RocCurve {
    std::vector<double> thresholds;
    std::vector<double> fpr;
    std::vector<double> tpr;
    double auc = 0.0;
    int evaluated = 0;
    int failures = 0;
};

/// Assemble a ROC curve from per-instance statistics and truth labels.
RocCurve roc_from_scores(const std::vector<double>& statistics,
                         const std::vector<bool>& truly_cointegrated);

struct StudyConfig {
    datagen::GenConfig gen;
    arp::McmcConfig mcmc;
    int k_max = 5;          ///< RJ-MCMC order bound and ADF lag bound
    bool intercept = true;  ///< intercept in every regression, as generated
    int workers = 1;
};

struct InstanceRecord {
    int instance = 0;
    Method method = Method::EngleGranger;
    double statistic = 0.0;
    bool truly_cointegrated = false;
    bool failed = false;
};

struct RocStudyResult {
    std::map<Method, RocCurve> curves;
    std::vector<InstanceRecord> records;  ///< one row per instance per method
    int trials = 0;
};

/// Classification study: generate `trials` labelled instances and sweep each
/// method's ordering statistic. Failed instances are excluded per method and
/// counted, never silently dropped.
RocStudyResult run_roc_study(const StudyConfig& config, const std::vector<Method>& methods,
                             int trials, std::uint64_t seed);

struct OrderStudyRow {
    int T = 0;
    int trials = 0;
    double accuracy_mode = 0.0;   ///< RJ-MCMC posterior mode hit rate
    double mean_variance = 0.0;   ///< mean posterior variance of the order
    double bic_accuracy = 0.0;    ///< ADF-BIC lag selection hit rate
    int failures = 0;
};

/// Model-order study: instances with k uniform on {1..3}, RJ-MCMC posterior
/// mode vs the truth per observation length, plus the BIC baseline run on
/// the stage-1 OLS residuals.
std::vector<OrderStudyRow> run_order_study(const StudyConfig& config,
                                           const std::vector<int>& T_list, int trials,
                                           std::uint64_t seed);

/// Pointwise mean and +-3 standard-deviation band of the residual process
/// y_t - beta2' x_t over the posterior draws.
struct ResidualBand {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

ResidualBand residual_posterior_summary(const Dataset& data, const arp::PosteriorDraws& draws);

// Report emission (CSV plus gnuplot-friendly .dat files).
void write_roc_outputs(const std::string& dir, const RocStudyResult& result);
void write_order_outputs(const std::string& dir, const std::vector<OrderStudyRow>& rows);

}  // namespace bcoint::harness
