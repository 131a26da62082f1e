#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opcurve/pipeline.hpp"

namespace {

using opcurve::OffsetSide;
using opcurve::PipelineConfig;
using opcurve::PipelineStage;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

OffsetSide parse_side(const std::string& s) {
    if (s == "interior") return OffsetSide::interior;
    if (s == "exterior") return OffsetSide::exterior;
    throw CLI::ValidationError("side must be 'interior' or 'exterior', got '" + s + "'");
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw CLI::ValidationError("expected a boolean, got '" + s + "'");
}

/// Flat key = value (or key: value) file; '#' starts a comment.
void apply_config_file(const std::string& path, PipelineConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw CLI::ValidationError("cannot open config file: " + path);
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t sep = line.find('=');
        if (sep == std::string::npos) sep = line.find(':');
        if (sep == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw CLI::ValidationError(path + ":" + std::to_string(lineno) +
                                           ": expected 'key = value'");
            }
            continue;
        }
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        const std::string key = trim(line.substr(0, sep));
        const std::string val = trim(line.substr(sep + 1));
        if (key.empty() || val.empty()) continue;

        if (key == "input") {
            cfg.input = val;
        } else if (key == "m") {
            cfg.m = std::stol(val);
        } else if (key == "n") {
            cfg.n = std::stol(val);
        } else if (key == "q") {
            cfg.q = std::stol(val);
        } else if (key == "p") {
            cfg.p = std::stol(val);
        } else if (key == "taus") {
            cfg.taus.clear();
            for (const std::string& t : split_list(val)) cfg.taus.push_back(std::stod(t));
        } else if (key == "sides") {
            cfg.sides.clear();
            for (const std::string& t : split_list(val)) cfg.sides.push_back(parse_side(t));
        } else if (key == "noise_sigma") {
            cfg.noise_sigma = std::stod(val);
        } else if (key == "relative_noise") {
            cfg.relative_noise = parse_bool(val);
        } else if (key == "deriv_noise_sigma") {
            cfg.deriv_noise_sigma = std::stod(val);
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "output_dir") {
            cfg.output_dir = val;
        } else if (key == "curve_samples") {
            cfg.curve_samples = std::stol(val);
        } else if (key == "cusp_grid") {
            cfg.cusp_grid = std::stol(val);
        } else if (key == "with_baselines") {
            cfg.with_baselines = parse_bool(val);
        } else if (key == "gcv_grid") {
            cfg.gcv.grid = std::stol(val);
        } else if (key == "gcv_min") {
            cfg.gcv.param_min = std::stod(val);
        } else if (key == "gcv_max") {
            cfg.gcv.param_max = std::stod(val);
        } else if (key == "gcv_nm_evals") {
            cfg.gcv.nm_max_evals = std::stol(val);
        } else if (key == "gcv_nm_tol") {
            cfg.gcv.nm_tol = std::stod(val);
        } else {
            throw CLI::ValidationError(path + ":" + std::to_string(lineno) +
                                       ": unknown key '" + key + "'");
        }
    }
}

void print_summary(const opcurve::PipelineOutput& out, const PipelineConfig& cfg) {
    std::printf("fit: n=%ld, mu=%s, lambda=%s\n", static_cast<long>(out.kv.n),
                opcurve::format_short(out.report.tp_params.mu).c_str(),
                opcurve::format_short(out.report.tp_params.lambda).c_str());
    if (out.pspline_model) {
        std::printf("baseline pspline: lambda=%s\n",
                    opcurve::format_short(out.report.pspline_lambda).c_str());
    }
    std::printf("outputs: %s/{curves.csv, report.csv, plot.svg}\n", cfg.output_dir.c_str());
}

void print_table(const opcurve::ExperimentReport& report) {
    std::printf("%-6s %-9s %-8s %-9s %-14s %-14s %s\n", "tau", "side", "model", "refined",
                "mse(model)", "mse(data)", "cusps");
    for (const opcurve::CellResult& cell : report.cells) {
        for (const opcurve::ModelCellResult& m : cell.models) {
            for (bool refined : {true, false}) {
                std::printf("%-6s %-9s %-8s %-9s %-14.6e %-14.6e %ld",
                            opcurve::format_short(cell.tau).c_str(),
                            opcurve::side_name(cell.side), m.model.c_str(),
                            refined ? "yes" : "no",
                            refined ? m.mse_model_refined : m.mse_model_unrefined,
                            refined ? m.mse_data_refined : m.mse_data_unrefined,
                            static_cast<long>(m.cusp_count));
                if (!m.ok) std::printf("  [error: %s]", m.error.c_str());
                std::printf("\n");
            }
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regularized planar offset curves: penalized spline fit, "
                 "singularity-free offsets and trajectory reconstruction"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    std::string config_path;
    std::vector<double> cli_taus;
    std::string cli_sides;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", cfg.input,
                        "builtin dataset (p1 | p2 | line) or CSV file with x,y columns");
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("--out", cfg.output_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "noise seed");
        sub->add_option("--tau", cli_taus, "offset distance (repeatable)");
        sub->add_option("--sides", cli_sides, "comma list of interior,exterior");
        sub->add_option("--n", cfg.n, "basis dimension (default: 30% of m)");
        sub->add_option("--m", cfg.m, "builtin sample count");
        sub->add_option("--q", cfg.q, "constraint abscissa count");
        sub->add_option("--p", cfg.p, "refinement abscissa count");
        sub->add_option("--sigma", cfg.noise_sigma, "ordinate noise standard deviation");
        sub->add_flag("--relative-noise", cfg.relative_noise, "noise scales with |y|");
        sub->add_option("--deriv-sigma", cfg.deriv_noise_sigma, "slope-data noise");
        sub->add_option("--curve-samples", cfg.curve_samples, "points per exported curve");
        sub->add_option("--cusp-grid", cfg.cusp_grid, "cusp scan grid size");
        return sub;
    };

    CLI::App* fit = add_common(app.add_subcommand("fit", "fit the penalized generator spline"));
    CLI::App* offset =
        add_common(app.add_subcommand("offset", "fit generator and offset splines"));
    CLI::App* bioffset = add_common(app.add_subcommand(
        "bioffset", "full reconstruction pipeline for the penalized spline"));
    CLI::App* pipeline = add_common(app.add_subcommand(
        "pipeline", "full experiment: all models, offsets and reconstructions"));
    CLI::App* compare = add_common(
        app.add_subcommand("compare", "run the full experiment and print the MSE table"));

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = fit->parsed()        ? fit
                           : offset->parsed()   ? offset
                           : bioffset->parsed() ? bioffset
                           : pipeline->parsed() ? pipeline
                                                : compare;
        if (!config_path.empty()) {
            // precedence: defaults < config file < explicit command-line flags
            PipelineConfig filecfg;
            apply_config_file(config_path, filecfg);
            if (!active->count("input")) cfg.input = filecfg.input;
            if (!active->count("--out")) cfg.output_dir = filecfg.output_dir;
            if (!active->count("--seed")) cfg.seed = filecfg.seed;
            if (!active->count("--n")) cfg.n = filecfg.n;
            if (!active->count("--m")) cfg.m = filecfg.m;
            if (!active->count("--q")) cfg.q = filecfg.q;
            if (!active->count("--p")) cfg.p = filecfg.p;
            if (!active->count("--sigma")) cfg.noise_sigma = filecfg.noise_sigma;
            if (!active->count("--relative-noise")) cfg.relative_noise = filecfg.relative_noise;
            if (!active->count("--deriv-sigma")) cfg.deriv_noise_sigma = filecfg.deriv_noise_sigma;
            if (!active->count("--curve-samples")) cfg.curve_samples = filecfg.curve_samples;
            if (!active->count("--cusp-grid")) cfg.cusp_grid = filecfg.cusp_grid;
            cfg.gcv = filecfg.gcv;
            cfg.with_baselines = filecfg.with_baselines;
            cfg.taus = filecfg.taus;
            cfg.sides = filecfg.sides;
        }
        if (!cli_taus.empty()) cfg.taus = cli_taus;
        if (!cli_sides.empty()) {
            cfg.sides.clear();
            for (const std::string& s : split_list(cli_sides)) cfg.sides.push_back(parse_side(s));
        }

        if (fit->parsed()) {
            cfg.stage = PipelineStage::fit;
        } else if (offset->parsed()) {
            cfg.stage = PipelineStage::offset;
        } else if (bioffset->parsed()) {
            cfg.stage = PipelineStage::bioffset;
            cfg.with_baselines = false;
        } else {
            cfg.stage = PipelineStage::bioffset;
        }

        const opcurve::PipelineOutput out = opcurve::run_pipeline(cfg);
        opcurve::export_outputs(out, cfg.output_dir);
        print_summary(out, cfg);
        if (compare->parsed() || pipeline->parsed()) {
            print_table(out.report);
        }

        for (const opcurve::CellResult& cell : out.report.cells) {
            for (const opcurve::ModelCellResult& m : cell.models) {
                if (!m.ok) {
                    std::fprintf(stderr, "numerical failure in cell tau=%s %s (%s): %s\n",
                                 opcurve::format_short(cell.tau).c_str(),
                                 opcurve::side_name(cell.side), m.model.c_str(),
                                 m.error.c_str());
                    return 2;
                }
            }
        }
        return 0;
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const opcurve::ParseError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const opcurve::UnknownTestFunction& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const opcurve::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const opcurve::Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
}
