#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opcurve/bi_offset.hpp"
#include "opcurve/io.hpp"
#include "opcurve/natural_cubic.hpp"
#include "opcurve/svg.hpp"

namespace opcurve {

/// How far the run goes: generator fit only, offsets, or the full
/// reconstruction experiment.
enum class PipelineStage { fit, offset, bioffset };

struct PipelineConfig {
    std::string input = "p1";  // builtin name (p1 | p2 | line) or CSV path
    Eigen::Index m = -1;       // builtin sample count; -1 = per-builtin default
    Eigen::Index n = -1;       // basis dimension; -1 = round(0.3 m) clamped
    std::vector<double> taus = {0.1, 0.3, 0.5, 0.7};
    std::vector<OffsetSide> sides = {OffsetSide::interior, OffsetSide::exterior};
    double noise_sigma = 0.0;
    bool relative_noise = false;     // sigma scales |y_i|
    double deriv_noise_sigma = 0.0;  // extra noise on the slope data
    std::uint64_t seed = 0;
    Eigen::Index q = -1;  // constraint abscissae; -1 = floor((n-2)/2)
    Eigen::Index p = -1;  // refinement abscissae; -1 = 4n
    GcvSearchConfig gcv;
    std::string output_dir = ".";
    Eigen::Index curve_samples = 512;
    Eigen::Index cusp_grid = 512;
    bool with_baselines = true;
    PipelineStage stage = PipelineStage::bioffset;
};

/// Builds one of the named synthetic datasets with optional seeded Gaussian
/// noise on the ordinates. m = -1 selects the per-builtin default count.
Dataset generate_test_dataset(const std::string& name, Eigen::Index m, double sigma,
                              std::uint64_t seed, bool relative_noise = false);

/// True if the name denotes a builtin test function.
bool is_builtin_dataset(const std::string& name);

/// Noise-free value of a builtin test function.
double builtin_truth(const std::string& name, double x);

/// Per-model results of one (tau, side) cell.
struct ModelCellResult {
    std::string model;  // "tp" | "pspline" | "spline"
    bool ok = false;
    std::string error;                  // set when a stage failed
    Eigen::Index cusp_count = 0;        // cusps of the theoretical offset
    bool op_regular = false;            // offset spline free of cusps
    Eigen::Index orientation_flips = 0; // negative refinement scalings
    double mse_model_refined = std::numeric_limits<double>::quiet_NaN();
    double mse_model_unrefined = std::numeric_limits<double>::quiet_NaN();
    double mse_data_refined = std::numeric_limits<double>::quiet_NaN();
    double mse_data_unrefined = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> mse_truth_refined;    // builtin inputs only
    std::optional<double> mse_truth_unrefined;
};

struct CellResult {
    double tau = 0.0;
    OffsetSide side = OffsetSide::exterior;
    std::vector<ModelCellResult> models;
};

struct ExperimentReport {
    RegularizationParams tp_params;
    double pspline_lambda = 0.0;
    std::vector<CellResult> cells;
};

/// Everything a run produces: the report, the fitted generators and the
/// sampled curves ready for CSV/SVG export.
struct PipelineOutput {
    ExperimentReport report;
    Dataset data;
    KnotVector kv;
    SplineModel tp_model;
    std::optional<SplineModel> pspline_model;
    std::optional<NaturalCubicSpline> interp_model;
    std::vector<NamedCurve> curves;
    std::vector<PlanarPoint> data_points;
};

/// Runs the configured stages over every (tau, side) cell. A failure inside
/// one cell is recorded there; remaining cells still run. Deterministic for
/// a fixed config (including the seed).
PipelineOutput run_pipeline(const PipelineConfig& cfg);

/// Report rows in the CSV column layout.
std::vector<ReportRow> report_rows(const ExperimentReport& report);

/// Writes curves.csv, report.csv and plot.svg into the output directory.
void export_outputs(const PipelineOutput& out, const std::string& dir);

} // namespace opcurve
