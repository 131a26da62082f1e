#include "opcurve/op_spline.hpp"

#include <cmath>

#include <Eigen/QR>

#include "opcurve/solvers.hpp"

namespace opcurve {

Eigen::Index default_constraint_count(Eigen::Index n) {
    return (n - 2) / 2;
}

Eigen::Index default_refinement_count(Eigen::Index n) {
    return 4 * n;
}

void check_offset_spec(const OffsetSpec& spec, Eigen::Index n) {
    if (!(spec.tau > 0.0)) {
        throw ZeroRadius("offset spec: tau must be positive");
    }
    if (2 * spec.q < 4 || 2 * spec.q > n) {
        throw DimensionError("offset spec: need 4 <= 2q <= n");
    }
    if (spec.p < spec.q) {
        throw DimensionError("offset spec: p must be >= q");
    }
}

Eigen::VectorXd uniform_interior_abscissae(const KnotVector& kv, Eigen::Index count) {
    if (count < 2) {
        throw DimensionError("uniform_interior_abscissae: need at least 2 points");
    }
    const double lo = kv.a + 0.5 * kv.h;
    const double hi = kv.b - 0.5 * kv.h;
    return Eigen::VectorXd::LinSpaced(count, lo, hi);
}

ConstraintSystem build_constraints(const CurveView& g, const OffsetSpec& spec,
                                   const KnotVector& kv_f) {
    check_offset_spec(spec, kv_f.n);
    const double s = side_sign(spec.side);

    ConstraintSystem cs;
    cs.generator_xs = uniform_interior_abscissae(kv_f, spec.q);
    const OffsetAbscissae oa = offset_abscissae(g, cs.generator_xs, spec.tau, spec.side);
    cs.offset_xs = oa.values;
    for (Eigen::Index i = 0; i < cs.offset_xs.size(); ++i) {
        if (cs.offset_xs[i] < kv_f.a || cs.offset_xs[i] > kv_f.b) {
            throw DomainError("build_constraints: offset abscissa leaves the spline domain");
        }
    }

    const Eigen::Index q = spec.q;
    cs.A.resize(2 * q, kv_f.n);
    cs.b.resize(2 * q);
    cs.A.topRows(q) = collocation(kv_f, cs.offset_xs, 0);
    cs.A.bottomRows(q) = collocation(kv_f, cs.offset_xs, 1);
    for (Eigen::Index j = 0; j < q; ++j) {
        const double gp = g(cs.generator_xs[j], 1);
        cs.b[j] = g(cs.generator_xs[j], 0) + s * spec.tau / std::sqrt(1.0 + gp * gp);
        cs.b[q + j] = gp;
    }
    cs.value_rows = q;
    cs.tangent_rows = q;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cs.A.transpose());
    qr.setThreshold(1e-10);
    if (qr.rank() < 2 * q) {
        throw RankDeficientConstraints("build_constraints: dependent constraint rows");
    }
    return cs;
}

ConstraintSystem build_constraints(const SplineModel& g, const OffsetSpec& spec,
                                   const KnotVector& kv_f) {
    return build_constraints(curve_view(g), spec, kv_f);
}

SplineModel fit_op_spline(const CurveView& g, const OffsetSpec& spec,
                          const KnotVector& kv_f) {
    const ConstraintSystem cs = build_constraints(g, spec, kv_f);
    const Eigen::MatrixXd R = gram_second_derivative(kv_f);
    const KktSolution sol = solve_kkt(R, cs.A, cs.b);
    SplineModel f;
    f.knots = kv_f;
    f.coeffs = sol.primal;
    return f;
}

SplineModel fit_op_spline(const SplineModel& g, const OffsetSpec& spec,
                          const KnotVector& kv_f) {
    return fit_op_spline(curve_view(g), spec, kv_f);
}

} // namespace opcurve
