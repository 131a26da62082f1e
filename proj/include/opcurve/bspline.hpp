#pragma once

#include <Eigen/Core>

#include "opcurve/errors.hpp"

namespace opcurve {

/// Augmented uniform knot sequence for a cubic B-spline space of dimension n
/// on [a, b]. Stores n+4 knots: three below a and three above b continue the
/// uniform spacing h = (b-a)/(n-3), with knots[3] == a and knots[n] == b.
struct KnotVector {
    Eigen::VectorXd knots;
    Eigen::Index n = 0;
    double h = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Builds the augmented uniform knot set spanning a cubic spline space of
/// dimension n over [a, b].
///
/// Throws DomainError if b <= a and DimensionError if n < 4.
KnotVector build_knots(double a, double b, Eigen::Index n);

/// Values of the (at most) four basis functions active at one point.
/// values[r] belongs to basis function first + r.
struct BasisValues {
    Eigen::Index first = 0;
    Eigen::Vector4d values = Eigen::Vector4d::Zero();
};

/// Evaluates the active cubic B-splines, or their first or second
/// derivatives, at x in [a, b] via the triangular recurrence.
BasisValues eval_basis(const KnotVector& kv, double x, int deriv = 0);

/// Collocation matrix: row i holds the basis (or derivative) values at
/// xs[i], scattered into the n columns. At most 4 nonzeros per row.
Eigen::MatrixXd collocation(const KnotVector& kv,
                            const Eigen::Ref<const Eigen::VectorXd>& xs,
                            int deriv = 0);

/// Gram matrix of second derivatives, R_kj = int_a^b B_k'' B_j'' dx.
/// Each knot interval is integrated with the 3-point Gauss-Legendre rule,
/// which is exact for the piecewise-quadratic integrand. R is symmetric
/// positive semidefinite; its null space is spanned by coefficient vectors
/// that reproduce linear polynomials.
Eigen::MatrixXd gram_second_derivative(const KnotVector& kv);

/// A spline in the space spanned by a knot vector: s(x) = sum_j coeffs[j] B_j(x).
struct SplineModel {
    KnotVector knots;
    Eigen::VectorXd coeffs;

    double eval(double x, int deriv = 0) const;
    double domain_min() const { return knots.a; }
    double domain_max() const { return knots.b; }
};

/// Evaluates the spline (deriv = 0) or one of its first two derivatives.
double eval_spline(const SplineModel& model, double x, int deriv = 0);

/// Pointwise evaluation over a vector of abscissae.
Eigen::VectorXd eval_spline(const SplineModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& xs,
                            int deriv = 0);

} // namespace opcurve
