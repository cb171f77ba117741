#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "bcoint/errors.hpp"
#include "bcoint/rng.hpp"

namespace bcoint {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights of a composite quadrature rule on an open interval
/// (a, b). Weights sum to b - a; all nodes are strictly interior.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
    double b = 0.0;
};

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Composite Gauss-Legendre grid: `panels` uniform panels across (a, b),
/// the two outermost subdivided geometrically towards the endpoints with
/// `endpoint_depth` extra levels. Handles integrands with vanishing or
/// sharply varying behaviour at the interval ends.
QuadratureGrid make_composite_grid(double a, double b, int panels, int points_per_panel = 16,
                                   int endpoint_depth = 20);

/// Weighted sum over the grid. Throws NumericalError (naming the node) if f
/// evaluates non-finite anywhere.
double integrate(const std::function<double(double)>& f, const QuadratureGrid& grid);

struct AdaptiveIntegral {
    double value = 0.0;
    int levels = 0;            ///< refinement doublings performed
    int nodes = 0;             ///< node count of the final grid
    double rel_change = 0.0;   ///< relative change at the last refinement
    bool converged = false;
};

/// Panel-doubling integration of f over (a, b): grids of 8, 16, 32, ...
/// panels until two successive values agree to `rel_tol` relative (1e-9 by
/// default).
AdaptiveIntegral integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-9, int max_levels = 8);

/// Same refinement loop for integrands supplied in log space: returns
/// log of the integral of exp(log_f). Robust to log_f values far below the
/// representable range of exp.
AdaptiveIntegral integrate_adaptive_log(const std::function<double(double)>& log_f, double a,
                                        double b, double rel_tol = 1e-9, int max_levels = 8);

// ---------------------------------------------------------------------------
// Polynomial roots
// ---------------------------------------------------------------------------

/// All complex roots of the monic polynomial
///   z^k + c[k-1] z^{k-1} + ... + c[1] z + c[0],
/// where `monic_coeffs`[i] is the coefficient of z^i (ascending order, the
/// leading 1 implied). Computed from the companion-matrix eigenvalues and
/// polished by a few complex Newton steps; roots are sorted by (real, imag)
/// and complex roots appear in conjugate pairs.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& monic_coeffs);

// ---------------------------------------------------------------------------
// Linear algebra on small dense SPD systems
// ---------------------------------------------------------------------------

struct SpdSolution {
    Eigen::VectorXd x;
    double logdet = 0.0;  ///< log |A|, a byproduct needed by acceptance ratios
};

/// Solve A x = b for symmetric positive definite A via Cholesky. Throws
/// SingularCovariance (reporting the smallest pivot) when the factorization
/// fails.
SpdSolution solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Cholesky factor L with A = L L'. Same failure behaviour as solve_spd.
Eigen::LLT<Eigen::MatrixXd> cholesky_spd(const Eigen::MatrixXd& A);

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Draw from N(mean, covariance). The covariance must be SPD.
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance,
                           Rng& rng);

/// Scaled inverse chi-squared distribution: nu * tau2 / chi2_nu.
struct ScaledInvChi2 {
    double nu = 1.0;
    double tau2 = 1.0;
};

double sample_scaled_inv_chi2(const ScaledInvChi2& params, Rng& rng);

// ---------------------------------------------------------------------------
// Numerical limits
// ---------------------------------------------------------------------------

struct RichardsonResult {
    double limit = 0.0;
    double error_estimate = 0.0;  ///< difference of the two best tableau diagonals
    int levels_used = 0;
};

/// Extrapolate lim_{eps -> 0+} f(eps) from the ladder eps_j = eps0 * 2^{-j},
/// j = 0..levels-1, assuming f admits an expansion in integer powers of eps.
/// Throws NumericalError on non-finite evaluations and LimitDiverged when
/// the tableau fails to settle.
RichardsonResult richardson_limit(const std::function<double(double)>& f, double eps0 = 1e-2,
                                  int levels = 8);

}  // namespace bcoint
