#include "opcurve/bi_offset.hpp"

#include <cmath>
#include <vector>

#include "opcurve/solvers.hpp"

namespace opcurve {

Eigen::VectorXd reconstruction_abscissae(const RefinementResult& r,
                                         const OffsetSpec& spec) {
    if (!(spec.tau > 0.0)) {
        throw ZeroRadius("reconstruction_abscissae: tau must be positive");
    }
    const double s = side_sign(spec.side);
    Eigen::VectorXd out(r.sample_xs.size());
    for (Eigen::Index j = 0; j < out.size(); ++j) {
        const double w = r.eta[j] * r.tangents[j];
        out[j] = r.sample_xs[j] - s * spec.tau * w / std::sqrt(1.0 + w * w);
    }
    return out;
}

BiOffsetResult fit_bi_offset(const Eigen::Ref<const Eigen::VectorXd>& targets,
                             const Eigen::Ref<const Eigen::VectorXd>& abscissae,
                             const KnotVector& kv_h) {
    if (targets.size() != abscissae.size()) {
        throw DimensionError("fit_bi_offset: targets and abscissae lengths differ");
    }
    const Eigen::MatrixXd B = collocation(kv_h, abscissae, 0);
    const LsqSolution sol = solve_lsq(B, targets);

    BiOffsetResult out;
    out.model.knots = kv_h;
    out.model.coeffs = sol.x;
    out.abscissae = abscissae;
    out.fit_xs = abscissae;
    out.targets = targets;
    out.rank = sol.rank;
    out.underdetermined = abscissae.size() < kv_h.n;
    out.rms_fit = targets.size() > 0
                      ? std::sqrt((B * sol.x - targets).squaredNorm() /
                                  static_cast<double>(targets.size()))
                      : 0.0;
    return out;
}

namespace {

/// Shared reconstruction: sample f on the offset at abscissae shifted by
/// the slope estimates w, project each sample back across the offset gap,
/// and fit the reconstruction through the projected points.
BiOffsetResult reconstruct_impl(const SplineModel& f,
                                const Eigen::Ref<const Eigen::VectorXd>& sample_xs,
                                const Eigen::Ref<const Eigen::VectorXd>& w,
                                const OffsetSpec& spec, const KnotVector& kv_h,
                                bool used_refinement) {
    const double s = side_sign(spec.side);
    std::vector<double> kept_fit, kept_target, kept_offset;
    kept_fit.reserve(sample_xs.size());
    for (Eigen::Index j = 0; j < sample_xs.size(); ++j) {
        const double scale = std::sqrt(1.0 + w[j] * w[j]);
        const double xo = sample_xs[j] - s * spec.tau * w[j] / scale;
        if (xo < f.knots.a || xo > f.knots.b) continue;
        kept_offset.push_back(xo);
        kept_fit.push_back(sample_xs[j]);
        kept_target.push_back(eval_spline(f, xo, 0) - s * spec.tau / scale);
    }
    const Eigen::Index count = static_cast<Eigen::Index>(kept_fit.size());
    const Eigen::VectorXd fit_xs = Eigen::Map<const Eigen::VectorXd>(kept_fit.data(), count);
    const Eigen::VectorXd targets = Eigen::Map<const Eigen::VectorXd>(kept_target.data(), count);

    BiOffsetResult out = fit_bi_offset(targets, fit_xs, kv_h);
    out.abscissae = Eigen::Map<const Eigen::VectorXd>(kept_offset.data(), count);
    out.used_refinement = used_refinement;
    return out;
}

} // namespace

BiOffsetResult reconstruct_bi_offset(const SplineModel& f, const RefinementResult& r,
                                     const OffsetSpec& spec, const KnotVector& kv_h) {
    const Eigen::VectorXd w = r.eta.cwiseProduct(r.tangents);
    return reconstruct_impl(f, r.sample_xs, w, spec, kv_h, true);
}

BiOffsetResult fit_bi_offset_unrefined(const SplineModel& f, const CurveView& g,
                                       const OffsetSpec& spec, const KnotVector& kv_h) {
    const OffsetSamples samples = offset_samples(f, g, spec);
    Eigen::VectorXd w(samples.sample_xs.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        w[j] = eval_spline(f, samples.offset_xs[j], 1);
    }
    return reconstruct_impl(f, samples.sample_xs, w, spec, kv_h, false);
}

BiOffsetResult fit_bi_offset_unrefined(const SplineModel& f, const SplineModel& g,
                                       const OffsetSpec& spec, const KnotVector& kv_h) {
    return fit_bi_offset_unrefined(f, curve_view(g), spec, kv_h);
}

double mse(const SplineModel& model, const Eigen::Ref<const Eigen::VectorXd>& ref_xs,
           const Eigen::Ref<const Eigen::VectorXd>& ref_ys) {
    if (ref_xs.size() != ref_ys.size()) {
        throw DimensionError("mse: reference lengths differ");
    }
    if (ref_xs.size() == 0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ref_xs.size(); ++i) {
        const double diff = eval_spline(model, ref_xs[i], 0) - ref_ys[i];
        acc += diff * diff;
    }
    return acc / static_cast<double>(ref_xs.size());
}

} // namespace opcurve
