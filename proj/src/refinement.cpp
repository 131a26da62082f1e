#include "opcurve/refinement.hpp"

#include <cmath>

#include "opcurve/solvers.hpp"

namespace opcurve {

OffsetSamples offset_samples(const SplineModel& f, const CurveView& g,
                             const OffsetSpec& spec) {
    check_offset_spec(spec, f.knots.n);

    const Eigen::VectorXd all_xs = uniform_interior_abscissae(f.knots, spec.p);
    const OffsetAbscissae oa = offset_abscissae(g, all_xs, spec.tau, spec.side);

    // Keep only samples whose offset image stays evaluable on f.
    std::vector<Eigen::Index> keep;
    OffsetSamples out;
    for (Eigen::Index i = 0; i < all_xs.size(); ++i) {
        if (oa.values[i] >= f.knots.a && oa.values[i] <= f.knots.b) {
            keep.push_back(i);
        } else {
            out.dropped.push_back(i);
        }
    }
    out.sample_xs.resize(static_cast<Eigen::Index>(keep.size()));
    out.offset_xs.resize(static_cast<Eigen::Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) {
        out.sample_xs[static_cast<Eigen::Index>(i)] = all_xs[keep[i]];
        out.offset_xs[static_cast<Eigen::Index>(i)] = oa.values[keep[i]];
    }
    return out;
}

RefinementResult refine_tangents(const SplineModel& f, const CurveView& g,
                                 const OffsetSpec& spec) {
    OffsetSamples samples = offset_samples(f, g, spec);

    RefinementResult out;
    out.sample_xs = std::move(samples.sample_xs);
    out.offset_xs = std::move(samples.offset_xs);
    out.dropped = std::move(samples.dropped);
    const Eigen::Index p = out.sample_xs.size();

    Eigen::VectorXd slopes(p);
    for (Eigen::Index i = 0; i < p; ++i) slopes[i] = g(out.sample_xs[i], 1);
    const double norm = slopes.norm();
    out.tangents = norm > 0.0 ? Eigen::VectorXd(slopes / norm)
                              : Eigen::VectorXd(Eigen::VectorXd::Zero(p));

    out.eta = Eigen::VectorXd::Zero(p);
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < p; ++i) {
        if (std::abs(out.tangents[i]) <= 1e-10) {
            out.degenerate.push_back(i);
        } else {
            active.push_back(i);
        }
    }
    if (active.empty()) {
        return out;
    }

    const Eigen::Index na = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(na, na);
    Eigen::VectorXd rhs(na);
    for (Eigen::Index i = 0; i < na; ++i) {
        const Eigen::Index j = active[i];
        const double t = out.tangents[j];
        H(i, i) = t * t;
        rhs[i] = t * eval_spline(f, out.offset_xs[j], 1);
    }
    const CgResult cg = conjugate_gradient(H, rhs);
    for (Eigen::Index i = 0; i < na; ++i) {
        out.eta[active[i]] = cg.x[i];
    }
    out.cg_residual = cg.residual;
    out.converged = cg.converged;
    return out;
}

RefinementResult refine_tangents(const SplineModel& f, const SplineModel& g,
                                 const OffsetSpec& spec) {
    return refine_tangents(f, curve_view(g), spec);
}

std::vector<Eigen::Index> orientation_report(const RefinementResult& result) {
    std::vector<Eigen::Index> flipped;
    for (Eigen::Index i = 0; i < result.eta.size(); ++i) {
        if (result.eta[i] < 0.0) flipped.push_back(i);
    }
    return flipped;
}

} // namespace opcurve
