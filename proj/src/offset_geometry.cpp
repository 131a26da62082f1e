#include "opcurve/offset_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace opcurve {

CurveView curve_view(const SplineModel& model) {
    CurveView v;
    v.eval = [&model](double x, int deriv) { return eval_spline(model, x, deriv); };
    v.a = model.domain_min();
    v.b = model.domain_max();
    return v;
}

namespace {

void check_in_domain(const CurveView& g, double x, const char* who) {
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max({std::abs(g.a), std::abs(g.b), 1.0});
    if (x < g.a - slack || x > g.b + slack) {
        throw DomainError(std::string(who) + ": x outside curve domain");
    }
}

} // namespace

PlanarPoint unit_normal(const CurveView& g, double x) {
    check_in_domain(g, x, "unit_normal");
    const double gp = g(x, 1);
    const double denom = std::sqrt(1.0 + gp * gp);
    return {-gp / denom, 1.0 / denom};
}

PlanarPoint unit_normal(const SplineModel& g, double x) {
    return unit_normal(curve_view(g), x);
}

double curvature(const CurveView& g, double x) {
    check_in_domain(g, x, "curvature");
    const double gp = g(x, 1);
    const double gpp = g(x, 2);
    const double one_p = 1.0 + gp * gp;
    return gpp / (one_p * std::sqrt(one_p));
}

double curvature(const SplineModel& g, double x) {
    return curvature(curve_view(g), x);
}

PlanarPoint theoretical_offset(const CurveView& g, double x, double tau) {
    if (tau == 0.0) {
        throw ZeroRadius("theoretical_offset: tau must be nonzero");
    }
    check_in_domain(g, x, "theoretical_offset");
    const PlanarPoint n = unit_normal(g, x);
    return {x + tau * n.x, g(x, 0) + tau * n.y};
}

PlanarPoint theoretical_offset(const SplineModel& g, double x, double tau) {
    return theoretical_offset(curve_view(g), x, tau);
}

double offset_curvature(double k, double tau) {
    const double denom = std::abs(1.0 + tau * k);
    if (denom < 1e-12) {
        throw CuspSingularity("offset_curvature: evaluation at a cusp");
    }
    return k / denom;
}

std::vector<CuspReport> detect_cusps(const CurveView& g, double tau,
                                     Eigen::Index grid_size) {
    if (tau == 0.0) {
        throw ZeroRadius("detect_cusps: tau must be nonzero");
    }
    if (grid_size < 16) {
        throw DimensionError("detect_cusps: grid_size must be >= 16");
    }

    auto phi = [&](double x) { return 1.0 + tau * curvature(g, x); };

    const double step = (g.b - g.a) / static_cast<double>(grid_size - 1);
    Eigen::VectorXd grid(grid_size), vals(grid_size);
    for (Eigen::Index i = 0; i < grid_size; ++i) {
        grid[i] = (i == grid_size - 1) ? g.b : g.a + step * static_cast<double>(i);
        vals[i] = phi(grid[i]);
    }

    std::vector<double> roots;
    for (Eigen::Index i = 0; i + 1 < grid_size; ++i) {
        if (vals[i] == 0.0) {
            roots.push_back(grid[i]);
            continue;
        }
        if (vals[i] * vals[i + 1] < 0.0) {
            double lo = grid[i], hi = grid[i + 1];
            double flo = vals[i];
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double fm = phi(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (flo * fm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
    }
    if (vals[grid_size - 1] == 0.0) roots.push_back(grid[grid_size - 1]);

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double l, double r) { return r - l < 1e-9; }),
                roots.end());

    std::vector<CuspReport> out;
    const double fd_step = step / 100.0;
    for (double r : roots) {
        CuspReport rep;
        rep.location = r;
        rep.curvature = curvature(g, r);
        const double xl = std::max(g.a, r - fd_step);
        const double xr = std::min(g.b, r + fd_step);
        rep.curvature_derivative = (curvature(g, xr) - curvature(g, xl)) / (xr - xl);
        rep.kind = std::abs(rep.curvature_derivative) > 1e-6 ? CuspKind::ordinary
                                                             : CuspKind::degenerate;
        out.push_back(rep);
    }
    return out;
}

std::vector<CuspReport> detect_cusps(const SplineModel& g, double tau,
                                     Eigen::Index grid_size) {
    return detect_cusps(curve_view(g), tau, grid_size);
}

OffsetAbscissae offset_abscissae(const CurveView& g,
                                 const Eigen::Ref<const Eigen::VectorXd>& xs,
                                 double tau, OffsetSide side) {
    if (!(tau > 0.0)) {
        throw ZeroRadius("offset_abscissae: tau must be positive");
    }
    const double s = side_sign(side);
    OffsetAbscissae out;
    out.values.resize(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
        check_in_domain(g, xs[i], "offset_abscissae");
        const double gp = g(xs[i], 1);
        out.values[i] = xs[i] - s * tau * gp / std::sqrt(1.0 + gp * gp);
        if (out.values[i] < g.a || out.values[i] > g.b) {
            out.out_of_domain.push_back(i);
        }
    }
    return out;
}

OffsetAbscissae offset_abscissae(const SplineModel& g,
                                 const Eigen::Ref<const Eigen::VectorXd>& xs,
                                 double tau, OffsetSide side) {
    return offset_abscissae(curve_view(g), xs, tau, side);
}

} // namespace opcurve
