#include "opcurve/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "opcurve/op_spline.hpp"

namespace opcurve {

namespace {

struct Builtin {
    double a, b;
    Eigen::Index default_m;
    double (*fn)(double);
};

double p1_fn(double x) { return std::abs(std::sin(x) * std::cos(2.0 * x)); }
double p2_fn(double x) { return std::abs(std::sin(x)); }
double line_fn(double x) { return 0.7 * x + 1.0; }

const Builtin* find_builtin(const std::string& name) {
    static const Builtin p1{0.0, 2.0 * M_PI, 47, p1_fn};
    static const Builtin p2{-4.0, 4.0, 51, p2_fn};
    static const Builtin line{0.0, 5.0, 30, line_fn};
    if (name == "p1") return &p1;
    if (name == "p2") return &p2;
    if (name == "line") return &line;
    return nullptr;
}

} // namespace

bool is_builtin_dataset(const std::string& name) {
    return find_builtin(name) != nullptr;
}

double builtin_truth(const std::string& name, double x) {
    const Builtin* b = find_builtin(name);
    if (!b) {
        throw UnknownTestFunction("unknown test function: " + name);
    }
    return b->fn(x);
}

Dataset generate_test_dataset(const std::string& name, Eigen::Index m, double sigma,
                              std::uint64_t seed, bool relative_noise) {
    const Builtin* b = find_builtin(name);
    if (!b) {
        throw UnknownTestFunction("unknown test function: " + name);
    }
    if (m < 0) m = b->default_m;
    if (m < 4) {
        throw DimensionError("generate_test_dataset: m must be >= 4");
    }
    Dataset d;
    d.xs = Eigen::VectorXd::LinSpaced(m, b->a, b->b);
    d.ys.resize(m);
    const CounterRng rng{seed};
    for (Eigen::Index i = 0; i < m; ++i) {
        const double y = b->fn(d.xs[i]);
        double noise = 0.0;
        if (sigma > 0.0) {
            noise = sigma * rng.normal(static_cast<std::uint64_t>(i));
            if (relative_noise) noise *= std::abs(y);
        }
        d.ys[i] = y + noise;
    }
    return d;
}

namespace {

/// Basis dimension default: 30% of the sample count, clamped.
Eigen::Index auto_basis_dimension(Eigen::Index m) {
    const Eigen::Index n = static_cast<Eigen::Index>(std::lround(0.3 * static_cast<double>(m)));
    return std::clamp<Eigen::Index>(n, std::min<Eigen::Index>(8, m), m);
}

/// Offset displacement sign seen by the cusp condition: the exterior offset
/// displaces by +tau along the normal, the interior by -tau.
double signed_tau(double tau, OffsetSide side) {
    return side_sign(side) * tau;
}

struct GeneratorEntry {
    std::string name;
    CurveView view;
};

ModelCellResult run_cell_model(const GeneratorEntry& gen, const OffsetSpec& spec,
                               const PipelineConfig& cfg, const Dataset& data,
                               const KnotVector& kv, const Eigen::VectorXd& grid_xs,
                               bool stop_after_offset) {
    ModelCellResult res;
    res.model = gen.name;
    try {
        const double st = signed_tau(spec.tau, spec.side);
        res.cusp_count =
            static_cast<Eigen::Index>(detect_cusps(gen.view, st, cfg.cusp_grid).size());

        const SplineModel f = fit_op_spline(gen.view, spec, kv);
        res.op_regular = detect_cusps(f, st, cfg.cusp_grid).empty();
        if (stop_after_offset) {
            res.ok = true;
            return res;
        }

        const RefinementResult r = refine_tangents(f, gen.view, spec);
        res.orientation_flips = static_cast<Eigen::Index>(orientation_report(r).size());

        const BiOffsetResult ref = reconstruct_bi_offset(f, r, spec, kv);
        const BiOffsetResult unref = fit_bi_offset_unrefined(f, gen.view, spec, kv);

        Eigen::VectorXd gen_ys(grid_xs.size());
        for (Eigen::Index i = 0; i < grid_xs.size(); ++i) gen_ys[i] = gen.view(grid_xs[i], 0);
        res.mse_model_refined = mse(ref.model, grid_xs, gen_ys);
        res.mse_model_unrefined = mse(unref.model, grid_xs, gen_ys);
        res.mse_data_refined = mse(ref.model, data.xs, data.ys);
        res.mse_data_unrefined = mse(unref.model, data.xs, data.ys);
        if (is_builtin_dataset(cfg.input)) {
            Eigen::VectorXd truth_ys(grid_xs.size());
            for (Eigen::Index i = 0; i < grid_xs.size(); ++i) {
                truth_ys[i] = builtin_truth(cfg.input, grid_xs[i]);
            }
            res.mse_truth_refined = mse(ref.model, grid_xs, truth_ys);
            res.mse_truth_unrefined = mse(unref.model, grid_xs, truth_ys);
        }
        res.ok = true;
    } catch (const Error& e) {
        res.error = e.what();
    }
    return res;
}

NamedCurve sample_curve(const std::string& name, const CurveView& view,
                        const Eigen::VectorXd& grid_xs) {
    NamedCurve c;
    c.name = name;
    c.xs = grid_xs;
    c.ys.resize(grid_xs.size());
    for (Eigen::Index i = 0; i < grid_xs.size(); ++i) c.ys[i] = view(grid_xs[i], 0);
    return c;
}

std::string cell_tag(double tau, OffsetSide side) {
    return std::string("tau") + format_short(tau) + "_" + side_name(side);
}

} // namespace

PipelineOutput run_pipeline(const PipelineConfig& cfg) {
    for (double tau : cfg.taus) {
        if (!(tau > 0.0)) {
            throw ZeroRadius("pipeline: every tau must be positive");
        }
    }
    if (cfg.sides.empty()) {
        throw DimensionError("pipeline: at least one side required");
    }

    PipelineOutput out;
    if (is_builtin_dataset(cfg.input)) {
        out.data = generate_test_dataset(cfg.input, cfg.m, cfg.noise_sigma, cfg.seed,
                                         cfg.relative_noise);
    } else {
        out.data = read_dataset_csv(cfg.input);
    }
    check_dataset(out.data);

    const Eigen::Index n = cfg.n > 0 ? cfg.n : auto_basis_dimension(out.data.m());
    out.kv = build_knots(out.data.a(), out.data.b(), n);

    // Optional extra slope noise; drawn from a counter range disjoint from
    // the ordinate noise.
    std::optional<DerivativeData> dd;
    if (cfg.deriv_noise_sigma > 0.0) {
        DerivativeData base = derivative_data(out.data);
        const CounterRng rng{cfg.seed};
        const std::uint64_t shift = 1ULL << 32;
        for (Eigen::Index i = 0; i < base.mid_slopes.size(); ++i) {
            base.mid_slopes[i] +=
                cfg.deriv_noise_sigma * rng.normal(shift + static_cast<std::uint64_t>(i));
        }
        for (Eigen::Index i = 0; i < base.node_slopes.size(); ++i) {
            base.node_slopes[i] +=
                cfg.deriv_noise_sigma * rng.normal(2 * shift + static_cast<std::uint64_t>(i));
        }
        dd = std::move(base);
    }

    out.report.tp_params = select_parameters(out.data, out.kv, cfg.gcv, dd);
    out.tp_model = fit_tp_spline(out.data, out.kv, out.report.tp_params, dd);

    std::vector<GeneratorEntry> generators;
    generators.push_back({"tp", curve_view(out.tp_model)});
    if (cfg.with_baselines) {
        GcvSearchConfig ps_cfg = cfg.gcv;
        ps_cfg.fixed_mu = 0.0;
        out.report.pspline_lambda = select_parameters(out.data, out.kv, ps_cfg).lambda;
        out.pspline_model = fit_p_spline(out.data, out.kv, out.report.pspline_lambda);
        out.interp_model.emplace(natural_cubic_interpolant(out.data));
        generators.push_back({"pspline", curve_view(*out.pspline_model)});
        generators.push_back({"spline", curve_view(*out.interp_model)});
    }

    const Eigen::VectorXd grid_xs =
        Eigen::VectorXd::LinSpaced(cfg.curve_samples, out.data.a(), out.data.b());

    out.data_points.reserve(out.data.m());
    for (Eigen::Index i = 0; i < out.data.m(); ++i) {
        out.data_points.push_back({out.data.xs[i], out.data.ys[i]});
    }
    for (const GeneratorEntry& gen : generators) {
        out.curves.push_back(sample_curve(gen.name, gen.view, grid_xs));
    }

    if (cfg.stage == PipelineStage::fit) {
        return out;
    }

    const Eigen::Index q = cfg.q > 0 ? cfg.q : default_constraint_count(n);
    const Eigen::Index p = cfg.p > 0 ? cfg.p : default_refinement_count(n);
    const bool offsets_only = cfg.stage == PipelineStage::offset;

    for (double tau : cfg.taus) {
        for (OffsetSide side : cfg.sides) {
            const OffsetSpec spec{tau, side, q, p};
            CellResult cell;
            cell.tau = tau;
            cell.side = side;
            for (const GeneratorEntry& gen : generators) {
                cell.models.push_back(run_cell_model(gen, spec, cfg, out.data, out.kv,
                                                     grid_xs, offsets_only));
            }
            out.report.cells.push_back(std::move(cell));

            // Exported curves for the primary generator's cell: theoretical
            // offset, offset spline and both reconstructions.
            try {
                const std::string tag = cell_tag(tau, side);
                const CurveView tp_view = curve_view(out.tp_model);
                NamedCurve theory;
                theory.name = "offset_theory_" + tag;
                theory.xs.resize(grid_xs.size());
                theory.ys.resize(grid_xs.size());
                for (Eigen::Index i = 0; i < grid_xs.size(); ++i) {
                    const PlanarPoint pt =
                        theoretical_offset(tp_view, grid_xs[i], signed_tau(tau, side));
                    theory.xs[i] = pt.x;
                    theory.ys[i] = pt.y;
                }
                out.curves.push_back(std::move(theory));

                const SplineModel f = fit_op_spline(tp_view, spec, out.kv);
                out.curves.push_back(sample_curve("op_" + tag, curve_view(f), grid_xs));
                if (!offsets_only) {
                    const RefinementResult r = refine_tangents(f, tp_view, spec);
                    const BiOffsetResult ref = reconstruct_bi_offset(f, r, spec, out.kv);
                    const BiOffsetResult unref =
                        fit_bi_offset_unrefined(f, tp_view, spec, out.kv);
                    out.curves.push_back(
                        sample_curve("bo_ref_" + tag, curve_view(ref.model), grid_xs));
                    out.curves.push_back(
                        sample_curve("bo_unref_" + tag, curve_view(unref.model), grid_xs));
                }
            } catch (const Error&) {
                // cell errors are already recorded in the report
            }
        }
    }
    return out;
}

std::vector<ReportRow> report_rows(const ExperimentReport& report) {
    std::vector<ReportRow> rows;
    for (const CellResult& cell : report.cells) {
        for (const ModelCellResult& m : cell.models) {
            for (bool refined : {true, false}) {
                ReportRow row;
                row.tau = cell.tau;
                row.side = side_name(cell.side);
                row.model = m.model;
                row.refined = refined;
                row.mse = refined ? m.mse_model_refined : m.mse_model_unrefined;
                row.cusps = m.cusp_count;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void export_outputs(const PipelineOutput& out, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + dir);
    }
    write_curves_csv(dir + "/curves.csv", out.curves);
    write_report_csv(dir + "/report.csv", report_rows(out.report));
    render_svg(out.curves, out.data_points, dir + "/plot.svg");
}

} // namespace opcurve
