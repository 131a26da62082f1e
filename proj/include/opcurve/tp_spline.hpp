#pragma once

#include <optional>

#include <Eigen/Core>

#include "opcurve/bspline.hpp"

namespace opcurve {

/// Ordered planar samples (x_i, y_i) with strictly increasing abscissae.
struct Dataset {
    Eigen::VectorXd xs;
    Eigen::VectorXd ys;

    Eigen::Index m() const { return xs.size(); }
    double a() const { return xs[0]; }
    double b() const { return xs[xs.size() - 1]; }
};

/// Throws unless the dataset has m >= 4 strictly increasing abscissae.
void check_dataset(const Dataset& d);

/// Weights of the two quadratic penalties: mu scales the derivative-fidelity
/// terms, lambda the second-difference coefficient penalty.
struct RegularizationParams {
    double mu = 0.0;
    double lambda = 0.0;
};

/// Difference quotients derived from the data: slopes at segment midpoints
/// and backward slopes at the nodes (left edge copied from its neighbour).
struct DerivativeData {
    Eigen::VectorXd mid_xs;       // (x_j + x_{j+1})/2, length m-1
    Eigen::VectorXd mid_slopes;   // (y_{j+1} - y_j)/(x_{j+1} - x_j), length m-1
    Eigen::VectorXd node_slopes;  // backward divided differences, length m
};

DerivativeData derivative_data(const Dataset& d);

/// Second-difference matrix of size (n-2) x n with rows (1, -2, 1).
Eigen::MatrixXd second_difference_matrix(Eigen::Index n);

struct TpSystem {
    Eigen::MatrixXd normal;  // B^T B + mu^2 (Phi^T Phi + Psi^T Psi) + lambda^2 D^T D
    Eigen::VectorXd rhs;     // B^T y + mu^2 (Psi^T z + Phi^T dy)
};

/// Assembles the normal equations of the penalized Hermite regression:
///   min ||y - B a||^2 + mu^2 (||Phi a - dy||^2 + ||Psi a - z||^2) + lambda^2 ||D a||^2
/// where B and Phi collocate values/derivatives at the data abscissae and
/// Psi collocates derivatives at the segment midpoints. A precomputed
/// DerivativeData (e.g. with extra slope noise) may be supplied.
TpSystem assemble_tp_system(const Dataset& d, const KnotVector& kv,
                            const RegularizationParams& p,
                            const std::optional<DerivativeData>& dd = std::nullopt);

/// Fits the trajectory-penalized spline by solving the normal equations.
SplineModel fit_tp_spline(const Dataset& d, const KnotVector& kv,
                          const RegularizationParams& p,
                          const std::optional<DerivativeData>& dd = std::nullopt);

/// Hat matrix H = B A(mu, lambda)^{-1} B^T mapping observations to fits.
Eigen::MatrixXd hat_matrix(const Dataset& d, const KnotVector& kv,
                           const RegularizationParams& p,
                           const std::optional<DerivativeData>& dd = std::nullopt);

/// Generalized cross-validation score
///   ((1/m) ||(I - H) y||^2) / (1 - tr(H)/m)^2,
/// normalized by the number of observations m. Throws DegenerateGcv when
/// tr(H)/m >= 1.
double gcv_score(const Dataset& d, const KnotVector& kv,
                 const RegularizationParams& p,
                 const std::optional<DerivativeData>& dd = std::nullopt);

/// Two-stage (mu, lambda) search: coarse logarithmic grid followed by
/// Nelder-Mead refinement from the best cell. Deterministic.
struct GcvSearchConfig {
    double param_min = 1e-6;
    double param_max = 1e2;
    Eigen::Index grid = 12;           // grid points per axis
    Eigen::Index nm_max_evals = 200;  // refinement evaluation budget
    double nm_tol = 1e-6;             // simplex size tolerance (log10 space)
    std::optional<double> fixed_mu;   // pin mu (e.g. 0 for the P-spline)
};

RegularizationParams select_parameters(const Dataset& d, const KnotVector& kv,
                                       const GcvSearchConfig& cfg = {},
                                       const std::optional<DerivativeData>& dd = std::nullopt);

/// Classical penalized regression spline: the mu = 0 special case.
SplineModel fit_p_spline(const Dataset& d, const KnotVector& kv, double lambda);

} // namespace opcurve
