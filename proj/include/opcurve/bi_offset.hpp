#pragma once

#include <Eigen/Core>

#include "opcurve/refinement.hpp"

namespace opcurve {

/// Reconstruction of the generator from one of its offsets.
struct BiOffsetResult {
    SplineModel model;          // the fitted reconstruction h
    Eigen::VectorXd abscissae;  // offset-side sampling abscissae
    Eigen::VectorXd fit_xs;     // back-projected abscissae where h is collocated
    Eigen::VectorXd targets;    // reconstructed ordinates paired with fit_xs
    double rms_fit = 0.0;
    Eigen::Index rank = 0;
    bool underdetermined = false;  // fewer samples than basis functions
    bool used_refinement = false;
};

/// Sampling abscissae on the offset curve derived from the refined slopes
/// w_j = eta_j * t_j:
///   x_o[j] = sample_xs[j] - s * tau * w_j / sqrt(1 + w_j^2),
/// s = +1 when reconstructing from the exterior offset, -1 from the
/// interior. The map is globally defined since |w/sqrt(1+w^2)| < 1.
Eigen::VectorXd reconstruction_abscissae(const RefinementResult& r,
                                         const OffsetSpec& spec);

/// Least-squares spline through (abscissae[j], targets[j]): gamma minimizes
/// ||B(abscissae) gamma - targets||_2. Rank deficiency is reported, not
/// thrown; fewer samples than basis functions sets the underdetermined flag.
BiOffsetResult fit_bi_offset(const Eigen::Ref<const Eigen::VectorXd>& targets,
                             const Eigen::Ref<const Eigen::VectorXd>& abscissae,
                             const KnotVector& kv_h);

/// Full reconstruction from a refined offset: samples f at the
/// reconstruction abscissae, projects each sample back along the refined
/// normal direction by tau, and fits h through the projected points.
BiOffsetResult reconstruct_bi_offset(const SplineModel& f, const RefinementResult& r,
                                     const OffsetSpec& spec, const KnotVector& kv_h);

/// Reconstruction bypassing the refinement: the slope estimate at each
/// offset sample is read directly from f' instead of eta * t.
BiOffsetResult fit_bi_offset_unrefined(const SplineModel& f, const CurveView& g,
                                       const OffsetSpec& spec, const KnotVector& kv_h);
BiOffsetResult fit_bi_offset_unrefined(const SplineModel& f, const SplineModel& g,
                                       const OffsetSpec& spec, const KnotVector& kv_h);

/// Mean squared deviation of the model from reference samples.
double mse(const SplineModel& model, const Eigen::Ref<const Eigen::VectorXd>& ref_xs,
           const Eigen::Ref<const Eigen::VectorXd>& ref_ys);

} // namespace opcurve
