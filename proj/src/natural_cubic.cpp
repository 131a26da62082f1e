#include "opcurve/natural_cubic.hpp"

#include <algorithm>
#include <cmath>

namespace opcurve {

NaturalCubicSpline::NaturalCubicSpline(Eigen::VectorXd xs, Eigen::VectorXd ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const Eigen::Index m = xs_.size();
    if (m < 3 || ys_.size() != m) {
        throw DimensionError("natural cubic spline: need at least 3 samples");
    }
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
        if (!(xs_[i] < xs_[i + 1])) {
            throw DomainError("natural cubic spline: abscissae must be strictly increasing");
        }
    }

    // Tridiagonal system for the interior second derivatives (Thomas solve);
    // natural conditions pin the boundary ones to zero.
    second_ = Eigen::VectorXd::Zero(m);
    const Eigen::Index k = m - 2;
    Eigen::VectorXd diag(k), upper(k), rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double h0 = xs_[i + 1] - xs_[i];
        const double h1 = xs_[i + 2] - xs_[i + 1];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((ys_[i + 2] - ys_[i + 1]) / h1 - (ys_[i + 1] - ys_[i]) / h0);
    }
    for (Eigen::Index i = 1; i < k; ++i) {
        const double lower = xs_[i + 1] - xs_[i];  // subdiagonal equals h_i
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (k > 0) {
        second_[k] = rhs[k - 1] / diag[k - 1];
        for (Eigen::Index i = k - 1; i >= 1; --i) {
            second_[i] = (rhs[i - 1] - upper[i - 1] * second_[i + 1]) / diag[i - 1];
        }
    }
}

double NaturalCubicSpline::eval(double x, int deriv) const {
    const Eigen::Index m = xs_.size();
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max({std::abs(xs_[0]), std::abs(xs_[m - 1]), 1.0});
    if (x < xs_[0] - slack || x > xs_[m - 1] + slack) {
        throw DomainError("natural cubic spline: evaluation outside the data range");
    }
    x = std::clamp(x, xs_[0], xs_[m - 1]);

    const double* lo = std::upper_bound(xs_.data(), xs_.data() + m, x);
    Eigen::Index i = std::clamp<Eigen::Index>(lo - xs_.data() - 1, 0, m - 2);
    const double h = xs_[i + 1] - xs_[i];
    const double u = xs_[i + 1] - x;
    const double v = x - xs_[i];
    const double ma = second_[i];
    const double mb = second_[i + 1];

    switch (deriv) {
        case 0:
            return (ma * u * u * u + mb * v * v * v) / (6.0 * h) +
                   (ys_[i] / h - ma * h / 6.0) * u + (ys_[i + 1] / h - mb * h / 6.0) * v;
        case 1:
            return (-ma * u * u + mb * v * v) / (2.0 * h) +
                   (ys_[i + 1] - ys_[i]) / h - (mb - ma) * h / 6.0;
        case 2:
            return (ma * u + mb * v) / h;
        default:
            throw DimensionError("natural cubic spline: derivative order must be 0, 1 or 2");
    }
}

NaturalCubicSpline natural_cubic_interpolant(const Dataset& d) {
    return NaturalCubicSpline(d.xs, d.ys);
}

CurveView curve_view(const NaturalCubicSpline& s) {
    CurveView v;
    v.eval = [&s](double x, int deriv) { return s.eval(x, deriv); };
    v.a = s.domain_min();
    v.b = s.domain_max();
    return v;
}

} // namespace opcurve
