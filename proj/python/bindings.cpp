#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bcoint/ar1.hpp"
#include "bcoint/classical.hpp"
#include "bcoint/csv.hpp"
#include "bcoint/datagen.hpp"
#include "bcoint/harness.hpp"
#include "bcoint/order.hpp"

namespace py = pybind11;
using namespace bcoint;

namespace {

RegressionSpec make_spec(const std::string& method, bool intercept, std::optional<int> order,
                         int k_max, double alpha) {
    RegressionSpec spec;
    spec.method = method_from_name(method);
    spec.intercept = intercept;
    spec.order = order;
    spec.k_max = k_max;
    spec.alpha_level = alpha;
    return spec;
}

py::dict result_to_dict(const TestResult& result) {
    py::dict out;
    out["verdict"] = result.verdict == Verdict::Cointegrated ? "cointegrated" : "not-cointegrated";
    out["statistic"] = result.statistic;
    out["threshold"] = result.threshold;
    out["method"] = method_name(result.method);
    py::dict diag;
    for (const auto& [key, value] : result.diagnostics) diag[py::str(key)] = value;
    out["diagnostics"] = diag;
    return out;
}

}  // namespace

PYBIND11_MODULE(bcoint, m) {
    m.doc() = "Bayesian residual-based cointegration testing";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<Eigen::MatrixXd, std::vector<std::string>, int>(), py::arg("values"),
             py::arg("labels") = std::vector<std::string>{}, py::arg("regressand_index") = 0)
        .def_property_readonly("T", &Dataset::T)
        .def_property_readonly("n", &Dataset::n)
        .def_property_readonly("values", &Dataset::values)
        .def_property_readonly("labels", &Dataset::labels)
        .def("y", &Dataset::y)
        .def("X", &Dataset::X)
        .def("with_regressand", &Dataset::with_regressand);

    m.def("load_csv", &csv::load_csv, py::arg("path"));

    m.def(
        "build_residuals",
        [](const Dataset& data, const Eigen::VectorXd& beta2, std::optional<double> intercept) {
            const ResidualSeries rs = build_residuals(data, beta2, intercept);
            return rs.r;
        },
        py::arg("data"), py::arg("beta2"), py::arg("intercept") = std::nullopt);

    m.def("first_differences", &first_differences, py::arg("series"));

    m.def("phi_to_rho_xi", [](const Eigen::VectorXd& phi) {
        const arp::RhoXiParams p = arp::phi_to_rho_xi(phi);
        return std::make_pair(p.rho, p.xi);
    });
    m.def("rho_xi_to_phi", [](double rho, const Eigen::VectorXd& xi) {
        return arp::rho_xi_to_phi({rho, xi});
    });
    m.def("ar_roots", [](const Eigen::VectorXd& phi) {
        return arp::ArParams::from_phi(phi).roots;
    });

    m.def(
        "bayes_factor",
        [](const Dataset& data, bool intercept) {
            const ar1::BayesFactorResult bf = ar1::bayes_factor(data, intercept);
            py::dict out;
            out["K"] = bf.K;
            out["log_numerator"] = bf.log_numerator;
            out["log_denominator"] = bf.log_denominator;
            return out;
        },
        py::arg("data"), py::arg("intercept") = true);

    m.def(
        "phi_posterior",
        [](const Dataset& data, bool intercept, double lo, double hi, int points) {
            const ar1::PhiPosterior post =
                ar1::phi_posterior(data, intercept, {lo, hi, points});
            py::dict out;
            out["grid"] = post.grid;
            out["density"] = post.density;
            out["prob_phi_ge_1"] = post.prob_phi_ge_1;
            out["prob_stationary"] = post.prob_stationary;
            return out;
        },
        py::arg("data"), py::arg("intercept") = true, py::arg("lo") = -1.5, py::arg("hi") = 1.5,
        py::arg("points") = 1001);

    m.def(
        "test",
        [](const Dataset& data, const std::string& method, bool intercept,
           std::optional<int> order, int k_max, double alpha, int iterations, int burn_in,
           int thin, double lambda_heat, std::uint64_t seed) {
            const RegressionSpec spec = make_spec(method, intercept, order, k_max, alpha);
            arp::McmcConfig mcmc{iterations, burn_in, thin};
            switch (spec.method) {
                case Method::Ar1BayesFactor:
                case Method::Ar1Credible:
                    return result_to_dict(ar1::ar1_test(data, spec));
                case Method::GibbsFixedOrder:
                    return result_to_dict(arp::gibbs_test(data, spec, mcmc, seed));
                case Method::RjMcmc: {
                    order::OrderMcmcConfig oc;
                    oc.mcmc = mcmc;
                    oc.lambda_heat = lambda_heat;
                    const order::RjTestResult rj = order::rjmcmc_test(data, spec, oc, seed);
                    py::dict out = result_to_dict(rj.test);
                    out["order_mass"] = rj.order_posterior.mass;
                    out["order_mode"] = rj.order_posterior.mode;
                    return out;
                }
                case Method::EngleGranger:
                    return result_to_dict(classical::engle_granger_test(data, spec));
            }
            throw DomainError("unhandled method");
        },
        py::arg("data"), py::arg("method") = "rjmcmc", py::arg("intercept") = true,
        py::arg("order") = std::nullopt, py::arg("k_max") = 5, py::arg("alpha") = 0.05,
        py::arg("iterations") = 25000, py::arg("burn_in") = 5000, py::arg("thin") = 1,
        py::arg("lambda_heat") = 1.0, py::arg("seed") = 0);

    m.def(
        "gibbs_draws",
        [](const Dataset& data, int order, bool intercept, int iterations, int burn_in, int thin,
           std::uint64_t seed) {
            const arp::PosteriorDraws draws =
                arp::gibbs_run(data, order, {iterations, burn_in, thin}, seed, intercept);
            const int n = static_cast<int>(draws.draws.size());
            Eigen::VectorXd rho(n), gamma(n), sigma2(n);
            Eigen::MatrixXd beta2(n, draws.draws.empty() ? 0 : draws.draws[0].beta2.size());
            for (int i = 0; i < n; ++i) {
                rho(i) = draws.draws[i].rho_xi.rho;
                gamma(i) = draws.draws[i].gamma;
                sigma2(i) = draws.draws[i].sigma2;
                beta2.row(i) = draws.draws[i].beta2.transpose();
            }
            py::dict out;
            out["rho"] = rho;
            out["gamma"] = gamma;
            out["sigma2"] = sigma2;
            out["beta2"] = beta2;
            return out;
        },
        py::arg("data"), py::arg("order") = 1, py::arg("intercept") = false,
        py::arg("iterations") = 25000, py::arg("burn_in") = 5000, py::arg("thin") = 1,
        py::arg("seed") = 0);

    m.def(
        "adf_test",
        [](const Eigen::VectorXd& series, int k_max, double level) {
            const classical::AdfResult adf = classical::adf_test(series, k_max, level);
            py::dict out;
            out["statistic"] = adf.statistic;
            out["selected_lags"] = adf.selected_lags;
            out["pvalue_band"] = adf.pvalue_band;
            out["reject"] = adf.reject;
            return out;
        },
        py::arg("series"), py::arg("k_max") = 5, py::arg("level") = 0.05);

    m.def(
        "simulate_instance",
        [](int T, int order, double p_unit_root, double sigma2, std::uint64_t seed) {
            datagen::GenConfig config;
            config.T = T;
            config.k_lo = config.k_hi = order;
            config.p_unit_root = p_unit_root;
            config.sigma2 = sigma2;
            config.seed = seed;
            const datagen::GenInstance inst = datagen::generate_instance_indexed(config, 0);
            py::dict out;
            out["values"] = inst.data.values();
            out["labels"] = inst.data.labels();
            out["cointegrated"] = inst.label == datagen::Label::Cointegrated;
            out["phi"] = inst.true_phi;
            out["beta2"] = inst.true_beta2;
            out["alpha"] = inst.true_intercept;
            return out;
        },
        py::arg("T") = 500, py::arg("order") = 1, py::arg("p_unit_root") = 0.5,
        py::arg("sigma2") = 1.0, py::arg("seed") = 0);
}
