#include "opcurve/solvers.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

namespace opcurve {

namespace {

/// Condition estimate from the R factor of a column-pivoted QR.
double qr_condition(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr) {
    const auto diag = qr.matrixR().diagonal().cwiseAbs();
    if (diag.size() == 0) return 0.0;
    const double dmin = diag.minCoeff();
    if (dmin == 0.0) return std::numeric_limits<double>::infinity();
    return diag.maxCoeff() / dmin;
}

} // namespace

Eigen::VectorXd solve_spd(const Eigen::Ref<const Eigen::MatrixXd>& M,
                          const Eigen::Ref<const Eigen::VectorXd>& rhs) {
    if (M.rows() != M.cols() || M.rows() != rhs.size()) {
        throw DimensionError("solve_spd: dimension mismatch");
    }
    const double scale = std::max(rhs.lpNorm<Eigen::Infinity>(), 1.0);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd x = ldlt.solve(rhs);
        if ((M.selfadjointView<Eigen::Lower>() * x - rhs).lpNorm<Eigen::Infinity>() <=
            1e-8 * scale) {
            return x;
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    if (qr_condition(qr) > 1e14) {
        throw SingularMatrix("solve_spd: matrix numerically singular");
    }
    Eigen::VectorXd x = qr.solve(rhs);
    if ((M * x - rhs).lpNorm<Eigen::Infinity>() > 1e-6 * scale) {
        throw SingularMatrix("solve_spd: residual too large after QR fallback");
    }
    return x;
}

Eigen::MatrixXd solve_spd(const Eigen::Ref<const Eigen::MatrixXd>& M,
                          const Eigen::Ref<const Eigen::MatrixXd>& rhs) {
    if (M.rows() != M.cols() || M.rows() != rhs.rows()) {
        throw DimensionError("solve_spd: dimension mismatch");
    }
    const double scale = std::max(rhs.lpNorm<Eigen::Infinity>(), 1.0);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    if (ldlt.info() == Eigen::Success) {
        Eigen::MatrixXd x = ldlt.solve(rhs);
        if ((M.selfadjointView<Eigen::Lower>() * x - rhs).lpNorm<Eigen::Infinity>() <=
            1e-8 * scale) {
            return x;
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    if (qr_condition(qr) > 1e14) {
        throw SingularMatrix("solve_spd: matrix numerically singular");
    }
    Eigen::MatrixXd x = qr.solve(rhs);
    if ((M * x - rhs).lpNorm<Eigen::Infinity>() > 1e-6 * scale) {
        throw SingularMatrix("solve_spd: residual too large after QR fallback");
    }
    return x;
}

LsqSolution solve_lsq(const Eigen::Ref<const Eigen::MatrixXd>& M,
                      const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (M.rows() < 1 || M.rows() != y.size()) {
        throw DimensionError("solve_lsq: dimension mismatch");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    LsqSolution out;
    out.rank = qr.rank();
    out.x = qr.solve(y);
    return out;
}

KktSolution solve_kkt(const Eigen::Ref<const Eigen::MatrixXd>& R,
                      const Eigen::Ref<const Eigen::MatrixXd>& A,
                      const Eigen::Ref<const Eigen::VectorXd>& b,
                      double ridge) {
    const Eigen::Index n = R.rows();
    const Eigen::Index c = A.rows();
    if (R.cols() != n || A.cols() != n || b.size() != c) {
        throw DimensionError("solve_kkt: dimension mismatch");
    }
    if (c > n) {
        throw DimensionError("solve_kkt: more constraints than unknowns");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> aqr(A.transpose());
    aqr.setThreshold(1e-10);
    if (aqr.rank() < c) {
        throw RankDeficientConstraints("solve_kkt: constraint matrix is row rank deficient");
    }

    if (ridge < 0.0) {
        ridge = 1e-10 * R.trace() / static_cast<double>(n);
    }

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + c, n + c);
    K.topLeftCorner(n, n) = 2.0 * R;
    K.topLeftCorner(n, n).diagonal().array() += 2.0 * ridge;
    K.topRightCorner(n, c) = A.transpose();
    K.bottomLeftCorner(c, n) = A;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) {
        throw SingularKkt("solve_kkt: saddle system singular despite ridge");
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + c);
    rhs.tail(c) = b;
    const Eigen::VectorXd sol = lu.solve(rhs);

    KktSolution out;
    out.primal = sol.head(n);
    out.multipliers = sol.tail(c);
    const double stat = (K.topLeftCorner(n, n) * out.primal +
                         A.transpose() * out.multipliers)
                            .lpNorm<Eigen::Infinity>();
    const double feas = (A * out.primal - b).lpNorm<Eigen::Infinity>();
    out.residual_norm = std::max(stat, feas);
    return out;
}

CgResult conjugate_gradient(const Eigen::Ref<const Eigen::MatrixXd>& H,
                            const Eigen::Ref<const Eigen::VectorXd>& f,
                            const CgOptions& opts) {
    const Eigen::Index n = H.rows();
    if (H.cols() != n || f.size() != n) {
        throw DimensionError("conjugate_gradient: dimension mismatch");
    }
    if (!(opts.tol > 0.0)) {
        throw DimensionError("conjugate_gradient: tolerance must be positive");
    }
    const Eigen::Index maxiter =
        opts.max_iterations < 0 ? 10 * n : opts.max_iterations;
    const double fnorm = f.norm();

    CgResult out;
    out.x = Eigen::VectorXd::Zero(n);
    if (fnorm == 0.0) {
        out.converged = true;
        return out;
    }

    Eigen::VectorXd r = f;  // residual for x = 0
    Eigen::VectorXd p = r;
    double rs = r.squaredNorm();
    if (opts.log_iterates) out.iterates.push_back(out.x);
    for (Eigen::Index it = 0; it < maxiter; ++it) {
        const Eigen::VectorXd Hp = H * p;
        const double alpha = rs / p.dot(Hp);
        out.x += alpha * p;
        r -= alpha * Hp;
        out.iterations = it + 1;
        if (opts.log_iterates) out.iterates.push_back(out.x);
        const double rs_next = r.squaredNorm();
        if (std::sqrt(rs_next) <= opts.tol * fnorm) {
            out.converged = true;
            rs = rs_next;
            break;
        }
        p = r + (rs_next / rs) * p;
        rs = rs_next;
    }
    out.residual = (H * out.x - f).norm() / fnorm;
    if (out.residual <= opts.tol) out.converged = true;
    return out;
}

} // namespace opcurve
