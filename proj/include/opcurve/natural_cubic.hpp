#pragma once

#include <Eigen/Core>

#include "opcurve/offset_geometry.hpp"
#include "opcurve/tp_spline.hpp"

namespace opcurve {

/// C^2 interpolating cubic spline with natural boundary conditions
/// (vanishing second derivative at both ends).
class NaturalCubicSpline {
public:
    NaturalCubicSpline(Eigen::VectorXd xs, Eigen::VectorXd ys);

    double eval(double x, int deriv = 0) const;
    double domain_min() const { return xs_[0]; }
    double domain_max() const { return xs_[xs_.size() - 1]; }

private:
    Eigen::VectorXd xs_;
    Eigen::VectorXd ys_;
    Eigen::VectorXd second_;  // second derivatives at the nodes
};

/// Interpolates the dataset; requires m >= 3.
NaturalCubicSpline natural_cubic_interpolant(const Dataset& d);

/// View adapter for the offset machinery. References the spline.
CurveView curve_view(const NaturalCubicSpline& s);

} // namespace opcurve
