#include "bcoint/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace bcoint {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex cache_mutex;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(order);
        if (it != cache.end()) {
            nodes = it->second.first;
            weights = it->second.second;
            return;
        }
    }
    if (order < 1) throw NumericalError("quadrature order must be positive");
    std::vector<double> x(order), w(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, Newton on P_order.
        double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[order - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[order - 1 - i] = w[i];
    }
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache[order] = {x, w};
    }
    nodes = std::move(x);
    weights = std::move(w);
}

namespace {

void append_panel(QuadratureGrid& grid, double lo, double hi, const std::vector<double>& gl_nodes,
                  const std::vector<double>& gl_weights) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < gl_nodes.size(); ++i) {
        grid.nodes.push_back(mid + half * gl_nodes[i]);
        grid.weights.push_back(half * gl_weights[i]);
    }
}

}  // namespace

QuadratureGrid make_composite_grid(double a, double b, int panels, int points_per_panel,
                                   int endpoint_depth) {
    if (!(b > a)) throw NumericalError("empty quadrature interval");
    if (panels < 2) panels = 2;  // one refined panel per endpoint
    std::vector<double> gl_nodes, gl_weights;
    gauss_legendre(points_per_panel, gl_nodes, gl_weights);

    QuadratureGrid grid;
    grid.a = a;
    grid.b = b;
    const double w = (b - a) / panels;

    // Left outermost panel, subdivided geometrically towards a.
    double prev = a;
    for (int j = endpoint_depth; j >= 1; --j) {
        const double cut = a + w * std::ldexp(1.0, -j);
        append_panel(grid, prev, cut, gl_nodes, gl_weights);
        prev = cut;
    }
    append_panel(grid, prev, a + w, gl_nodes, gl_weights);

    for (int p = 1; p + 1 < panels; ++p)
        append_panel(grid, a + p * w, a + (p + 1) * w, gl_nodes, gl_weights);

    // Right outermost panel, mirrored subdivision towards b.
    prev = b - w;
    for (int j = 1; j <= endpoint_depth; ++j) {
        const double cut = b - w * std::ldexp(1.0, -j);
        append_panel(grid, prev, cut, gl_nodes, gl_weights);
        prev = cut;
    }
    append_panel(grid, prev, b, gl_nodes, gl_weights);
    return grid;
}

double integrate(const std::function<double(double)>& f, const QuadratureGrid& grid) {
    double total = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const double v = f(grid.nodes[i]);
        if (!std::isfinite(v))
            throw NumericalError("integrand non-finite at node " + fmt(grid.nodes[i]));
        total += grid.weights[i] * v;
    }
    return total;
}

AdaptiveIntegral integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, int max_levels) {
    AdaptiveIntegral out;
    double prev = 0.0;
    int panels = 8;
    for (int level = 0; level < max_levels; ++level, panels *= 2) {
        const QuadratureGrid grid = make_composite_grid(a, b, panels);
        const double value = integrate(f, grid);
        out.value = value;
        out.levels = level;
        out.nodes = static_cast<int>(grid.nodes.size());
        if (level > 0) {
            const double scale = std::max(std::abs(value), std::numeric_limits<double>::min());
            out.rel_change = std::abs(value - prev) / scale;
            if (out.rel_change < rel_tol) {
                out.converged = true;
                return out;
            }
        }
        prev = value;
    }
    return out;
}

AdaptiveIntegral integrate_adaptive_log(const std::function<double(double)>& log_f, double a,
                                        double b, double rel_tol, int max_levels) {
    AdaptiveIntegral out;
    double prev = 0.0;
    int panels = 8;
    for (int level = 0; level < max_levels; ++level, panels *= 2) {
        const QuadratureGrid grid = make_composite_grid(a, b, panels);
        std::vector<double> lf(grid.nodes.size());
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
            lf[i] = log_f(grid.nodes[i]);
            if (std::isnan(lf[i]) || lf[i] == std::numeric_limits<double>::infinity())
                throw NumericalError("log integrand invalid at node " + fmt(grid.nodes[i]));
            peak = std::max(peak, lf[i]);
        }
        double value;
        if (peak == -std::numeric_limits<double>::infinity()) {
            value = peak;  // integrand identically zero
        } else {
            double acc = 0.0;
            for (std::size_t i = 0; i < grid.nodes.size(); ++i)
                acc += grid.weights[i] * std::exp(lf[i] - peak);
            value = peak + std::log(acc);
        }
        out.value = value;
        out.levels = level;
        out.nodes = static_cast<int>(grid.nodes.size());
        if (level > 0) {
            // |delta log| is the relative change of the underlying integral.
            out.rel_change = std::abs(value - prev);
            if (out.rel_change < rel_tol || value == prev) {
                out.converged = true;
                return out;
            }
        }
        prev = value;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial roots
// ---------------------------------------------------------------------------

namespace {

std::complex<double> horner(const std::vector<double>& monic, std::complex<double> z,
                            std::complex<double>* deriv) {
    const int k = static_cast<int>(monic.size());
    std::complex<double> p(1.0, 0.0);
    std::complex<double> dp(0.0, 0.0);
    for (int i = k - 1; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z + monic[i];
    }
    if (deriv) *deriv = dp;
    return p;
}

std::complex<double> polish_root(const std::vector<double>& monic, std::complex<double> z) {
    for (int iter = 0; iter < 8; ++iter) {
        std::complex<double> dp;
        const std::complex<double> p = horner(monic, z, &dp);
        if (std::abs(dp) < 1e-300) break;
        const std::complex<double> step = p / dp;
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    return z;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& monic_coeffs) {
    const int k = static_cast<int>(monic_coeffs.size());
    if (k == 0) throw DegenerateError("polynomial of degree zero has no roots");

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) companion(i, k - 1) = -monic_coeffs[i];
    for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("companion-matrix eigenvalue iteration failed");

    // Polish real roots and the upper half of each conjugate pair, then
    // mirror so pairs are exactly conjugate.
    std::vector<std::complex<double>> roots;
    roots.reserve(k);
    int negative_imag = 0;
    for (int i = 0; i < k; ++i) {
        const std::complex<double> ev = solver.eigenvalues()(i);
        if (ev.imag() < 0.0) {
            ++negative_imag;
            continue;
        }
        std::complex<double> z = polish_root(monic_coeffs, ev);
        if (ev.imag() == 0.0) z = std::complex<double>(z.real(), 0.0);
        roots.push_back(z);
        if (ev.imag() > 0.0) roots.push_back(std::conj(z));
    }
    if (static_cast<int>(roots.size()) != k)
        throw NumericalError("conjugate pairing failed: " + std::to_string(negative_imag) +
                             " unmatched eigenvalues");
    std::sort(roots.begin(), roots.end(), [](const auto& lhs, const auto& rhs) {
        if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
        return lhs.imag() < rhs.imag();
    });
    return roots;
}

// ---------------------------------------------------------------------------
// Linear algebra
// ---------------------------------------------------------------------------

Eigen::LLT<Eigen::MatrixXd> cholesky_spd(const Eigen::MatrixXd& A) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        const double pivot = ldlt.vectorD().minCoeff();
        throw SingularCovariance("matrix not positive definite (smallest pivot " + fmt(pivot) +
                                 ")");
    }
    return llt;
}

SpdSolution solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != A.cols() || A.rows() != b.size())
        throw DimensionError("solve_spd: inconsistent dimensions");
    SpdSolution out;
    if (A.rows() == 0) {
        out.x = Eigen::VectorXd();
        out.logdet = 0.0;
        return out;
    }
    const auto llt = cholesky_spd(A);
    out.x = llt.solve(b);
    out.logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return out;
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance,
                           Rng& rng) {
    if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size())
        throw DimensionError("sample_mvn: inconsistent dimensions");
    const auto llt = cholesky_spd(covariance);
    Eigen::VectorXd z(mean.size());
    for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
    return mean + llt.matrixL() * z;
}

double sample_scaled_inv_chi2(const ScaledInvChi2& params, Rng& rng) {
    if (params.nu <= 0.0 || params.tau2 <= 0.0)
        throw DomainError("scaled-inv-chi2 parameters must be positive");
    const double chi2 = rng.chi_squared(params.nu);
    return params.nu * params.tau2 / chi2;
}

// ---------------------------------------------------------------------------
// Richardson extrapolation
// ---------------------------------------------------------------------------

RichardsonResult richardson_limit(const std::function<double(double)>& f, double eps0,
                                  int levels) {
    if (levels < 2) throw NumericalError("richardson_limit needs at least two levels");
    std::vector<std::vector<double>> tableau(levels);
    std::vector<double> diag(levels);
    for (int j = 0; j < levels; ++j) {
        const double eps = std::ldexp(eps0, -j);
        const double fj = f(eps);
        if (!std::isfinite(fj))
            throw NumericalError("limit evaluation non-finite at eps " + fmt(eps));
        tableau[j].resize(j + 1);
        tableau[j][0] = fj;
        for (int m = 1; m <= j; ++m) {
            const double factor = std::ldexp(1.0, m) - 1.0;
            tableau[j][m] =
                tableau[j][m - 1] + (tableau[j][m - 1] - tableau[j - 1][m - 1]) / factor;
        }
        diag[j] = tableau[j][j];
    }

    int best = 1;
    double best_err = std::abs(diag[1] - diag[0]);
    for (int j = 2; j < levels; ++j) {
        const double err = std::abs(diag[j] - diag[j - 1]);
        if (err <= best_err) {
            best_err = err;
            best = j;
        }
    }
    RichardsonResult out;
    out.limit = diag[best];
    out.error_estimate = best_err;
    out.levels_used = levels;
    if (best_err > 1e-4 * std::max(1.0, std::abs(out.limit)))
        throw LimitDiverged("extrapolation tableau did not settle (best agreement " +
                            fmt(best_err) + ")");
    return out;
}

}  // namespace bcoint
