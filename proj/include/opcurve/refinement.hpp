#pragma once

#include <vector>

#include <Eigen/Core>

#include "opcurve/op_spline.hpp"

namespace opcurve {

/// Tangent scalings eta making the offset derivative proportional, with
/// consistent orientation, to the generator tangent samples:
///   f'(offset_xs[j]) ~ eta[j] * tangents[j],
/// tangents[j] = g'(sample_xs[j]) / ||g'(sample_xs)||_2.
struct RefinementResult {
    Eigen::VectorXd eta;
    Eigen::VectorXd sample_xs;  // kept generator abscissae
    Eigen::VectorXd offset_xs;  // their offset images
    Eigen::VectorXd tangents;   // normalized tangent components t_j
    std::vector<Eigen::Index> degenerate;  // |t_j| <= 1e-10; eta_j forced to 0
    std::vector<Eigen::Index> dropped;     // samples whose offset image left the domain
    double cg_residual = 0.0;
    bool converged = true;
};

/// The uniform refinement sample set and its offset images, restricted to
/// samples whose image stays inside the offset spline's domain.
struct OffsetSamples {
    Eigen::VectorXd sample_xs;
    Eigen::VectorXd offset_xs;
    std::vector<Eigen::Index> dropped;
};

OffsetSamples offset_samples(const SplineModel& f, const CurveView& g,
                             const OffsetSpec& spec);

/// Solves min_eta ||f'(offset_xs) - T eta||_2^2 (T = diag(tangents)) with
/// conjugate gradient on the normal equations T^T T eta = T^T f'(offset_xs).
/// Degenerate components are excluded from the system and flagged.
RefinementResult refine_tangents(const SplineModel& f, const CurveView& g,
                                 const OffsetSpec& spec);
RefinementResult refine_tangents(const SplineModel& f, const SplineModel& g,
                                 const OffsetSpec& spec);

/// Indices where the scaling is negative, i.e. the offset tangent opposes
/// the generator tangent. Empty means orientations are consistent.
std::vector<Eigen::Index> orientation_report(const RefinementResult& result);

} // namespace opcurve
