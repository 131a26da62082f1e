#pragma once

#include <vector>

#include <Eigen/Core>

#include "opcurve/errors.hpp"

namespace opcurve {

/// Solves M x = rhs for symmetric positive (semi)definite M via LDLT,
/// falling back to column-pivoted QR when the factorization is unreliable.
/// Throws SingularMatrix when the system cannot be solved to working
/// precision (condition estimate beyond ~1e14).
Eigen::VectorXd solve_spd(const Eigen::Ref<const Eigen::MatrixXd>& M,
                          const Eigen::Ref<const Eigen::VectorXd>& rhs);

/// Multi-right-hand-side variant of solve_spd.
Eigen::MatrixXd solve_spd(const Eigen::Ref<const Eigen::MatrixXd>& M,
                          const Eigen::Ref<const Eigen::MatrixXd>& rhs);

struct LsqSolution {
    Eigen::VectorXd x;
    Eigen::Index rank = 0;
};

/// Minimizes ||M x - y||_2 via QR with column pivoting. Rank-deficient
/// systems return the basic solution with pivoted-out components zeroed;
/// the rank is reported, never thrown.
LsqSolution solve_lsq(const Eigen::Ref<const Eigen::MatrixXd>& M,
                      const Eigen::Ref<const Eigen::VectorXd>& y);

struct KktSolution {
    Eigen::VectorXd primal;
    Eigen::VectorXd multipliers;
    double residual_norm = 0.0;
};

/// Solves min x^T R x subject to A x = b through the saddle system
///   [ 2(R + ridge I)  A^T ] [x ]   [0]
///   [ A               0   ] [nu] = [b].
/// A must have full row rank (checked by pivoted QR with tolerance
/// 1e-10 * ||A||). ridge < 0 selects the default 1e-10 * trace(R)/n.
KktSolution solve_kkt(const Eigen::Ref<const Eigen::MatrixXd>& R,
                      const Eigen::Ref<const Eigen::MatrixXd>& A,
                      const Eigen::Ref<const Eigen::VectorXd>& b,
                      double ridge = -1.0);

struct CgOptions {
    double tol = 1e-10;
    Eigen::Index max_iterations = -1;  // -1 selects 10 n
    bool log_iterates = false;
};

struct CgResult {
    Eigen::VectorXd x;
    double residual = 0.0;  // ||H x - f|| / ||f||
    Eigen::Index iterations = 0;
    bool converged = false;
    std::vector<Eigen::VectorXd> iterates;  // filled when log_iterates is set
};

/// Conjugate gradient for symmetric positive definite H. Non-convergence
/// within the iteration budget is flagged, not thrown.
CgResult conjugate_gradient(const Eigen::Ref<const Eigen::MatrixXd>& H,
                            const Eigen::Ref<const Eigen::VectorXd>& f,
                            const CgOptions& opts = {});

} // namespace opcurve
