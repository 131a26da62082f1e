#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "opcurve/bspline.hpp"

namespace opcurve {

/// Type-erased view of a Cartesian curve y = g(x): value/derivative
/// evaluation plus its domain. Lets the offset machinery run on spline
/// models and on other C^2 curves (e.g. the interpolating cubic baseline).
struct CurveView {
    std::function<double(double, int)> eval;
    double a = 0.0;
    double b = 0.0;

    double operator()(double x, int deriv = 0) const { return eval(x, deriv); }
};

/// View of a spline model. The view references the model; keep it alive.
CurveView curve_view(const SplineModel& model);

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Which side of the generator an offset lies on. Exterior pairs the
/// upward normal (+tau vertical component) with the '-' abscissa branch;
/// interior is the mirror.
enum class OffsetSide { interior, exterior };

/// +1 for exterior, -1 for interior.
inline double side_sign(OffsetSide side) {
    return side == OffsetSide::exterior ? 1.0 : -1.0;
}

inline const char* side_name(OffsetSide side) {
    return side == OffsetSide::exterior ? "exterior" : "interior";
}

/// Unit normal (-g'(x), 1)/sqrt(1 + g'(x)^2) of the graph of g at x.
PlanarPoint unit_normal(const CurveView& g, double x);
PlanarPoint unit_normal(const SplineModel& g, double x);

/// Curvature k = g''/(1 + g'^2)^{3/2} of the graph of g at x.
double curvature(const CurveView& g, double x);
double curvature(const SplineModel& g, double x);

/// The point of the theoretical offset generated at signed distance tau:
/// (x, g(x)) displaced by tau along the unit normal. Throws ZeroRadius
/// when tau = 0.
PlanarPoint theoretical_offset(const CurveView& g, double x, double tau);
PlanarPoint theoretical_offset(const SplineModel& g, double x, double tau);

/// Curvature of the offset at the corresponding point, k/|1 + tau k|.
/// Throws CuspSingularity when |1 + tau k| < 1e-12.
double offset_curvature(double k, double tau);

enum class CuspKind { ordinary, degenerate };

/// A root of 1 + tau k(x) located by the cusp scan.
struct CuspReport {
    double location = 0.0;
    CuspKind kind = CuspKind::ordinary;
    double curvature = 0.0;
    double curvature_derivative = 0.0;
};

/// Scans 1 + tau k(x) on a uniform grid and bisects every sign change down
/// to an interval of 1e-10. Roots are classified ordinary/degenerate by a
/// finite-difference estimate of k' (threshold 1e-6) and returned sorted by
/// location. Tangency roots without a sign change are not detected.
std::vector<CuspReport> detect_cusps(const CurveView& g, double tau,
                                     Eigen::Index grid_size = 512);
std::vector<CuspReport> detect_cusps(const SplineModel& g, double tau,
                                     Eigen::Index grid_size = 512);

/// Abscissae of the offset points with per-point domain check.
struct OffsetAbscissae {
    Eigen::VectorXd values;
    std::vector<Eigen::Index> out_of_domain;  // indices whose image leaves [a, b]
};

/// Maps generator abscissae to offset abscissae,
///   x_o = x -/+ tau g'(x)/sqrt(1 + g'(x)^2)
/// ('-' for exterior, '+' for interior); tau must be positive. Points whose
/// image leaves the generator domain are flagged, not rejected.
OffsetAbscissae offset_abscissae(const CurveView& g,
                                 const Eigen::Ref<const Eigen::VectorXd>& xs,
                                 double tau, OffsetSide side);
OffsetAbscissae offset_abscissae(const SplineModel& g,
                                 const Eigen::Ref<const Eigen::VectorXd>& xs,
                                 double tau, OffsetSide side);

} // namespace opcurve
