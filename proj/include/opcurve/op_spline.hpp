#pragma once

#include <Eigen/Core>

#include "opcurve/offset_geometry.hpp"

namespace opcurve {

/// Geometry and sampling sizes of one offset construction: distance tau,
/// side, number of constraint abscissae q and of refinement abscissae p.
struct OffsetSpec {
    double tau = 0.1;
    OffsetSide side = OffsetSide::exterior;
    Eigen::Index q = 0;
    Eigen::Index p = 0;
};

/// q = floor((n-2)/2): leaves slack so the KKT system stays nonsingular.
Eigen::Index default_constraint_count(Eigen::Index n);

/// p = 4n uniform refinement samples.
Eigen::Index default_refinement_count(Eigen::Index n);

/// Throws unless tau > 0, 4 <= 2q <= n and p >= q.
void check_offset_spec(const OffsetSpec& spec, Eigen::Index n);

/// count uniform abscissae in [a + h/2, b - h/2]; the margin keeps offset
/// images inside the domain for moderate tau * slope.
Eigen::VectorXd uniform_interior_abscissae(const KnotVector& kv, Eigen::Index count);

/// Equality constraints of the offset spline: the first q rows collocate
/// values at the offset abscissae, the last q rows collocate derivatives
/// (the tangent-parallelism condition in its reduced scalar form
/// f'(x_o) = g'(xbar)).
struct ConstraintSystem {
    Eigen::MatrixXd A;  // 2q x n
    Eigen::VectorXd b;  // 2q
    Eigen::Index value_rows = 0;    // rows [0, value_rows)
    Eigen::Index tangent_rows = 0;  // rows [value_rows, value_rows + tangent_rows)
    Eigen::VectorXd generator_xs;   // xbar
    Eigen::VectorXd offset_xs;      // x_o
};

ConstraintSystem build_constraints(const CurveView& g, const OffsetSpec& spec,
                                   const KnotVector& kv_f);
ConstraintSystem build_constraints(const SplineModel& g, const OffsetSpec& spec,
                                   const KnotVector& kv_f);

/// Offset spline of minimal bending energy: solves
///   min beta^T R beta  s.t.  A beta = b
/// with R the second-derivative Gram matrix on kv_f.
SplineModel fit_op_spline(const CurveView& g, const OffsetSpec& spec,
                          const KnotVector& kv_f);
SplineModel fit_op_spline(const SplineModel& g, const OffsetSpec& spec,
                          const KnotVector& kv_f);

} // namespace opcurve
