#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "opcurve/tp_spline.hpp"

namespace opcurve {

/// Shortest decimal form of x that still round-trips (17 significant digits).
std::string format_full(double x);

/// Compact decimal form for labels and series names.
std::string format_short(double x);

/// A named polyline; xs and ys have equal length.
struct NamedCurve {
    std::string name;
    Eigen::VectorXd xs;
    Eigen::VectorXd ys;
};

/// One line of the experiment report CSV.
struct ReportRow {
    double tau = 0.0;
    std::string side;
    std::string model;
    bool refined = false;
    double mse = std::numeric_limits<double>::quiet_NaN();
    Eigen::Index cusps = 0;
};

/// Reads a two-column CSV "x,y" (header optional) with strictly increasing x.
Dataset read_dataset_csv(const std::string& path);

/// Writes curves as "x,y,series" rows at full precision.
void write_curves_csv(const std::string& path, const std::vector<NamedCurve>& curves);

/// Writes the experiment report with header "tau,side,model,refined,mse,cusps".
void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);

/// Deterministic counter-based generator: the same (seed, counter) pair
/// always yields the same draw, independent of call order.
struct CounterRng {
    std::uint64_t seed = 0;

    /// Uniform draw in (0, 1).
    double uniform(std::uint64_t counter) const;

    /// Standard normal draw (Box-Muller over two uniform draws).
    double normal(std::uint64_t counter) const;
};

} // namespace opcurve
