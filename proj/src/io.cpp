#include "opcurve/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace opcurve {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

namespace {

bool parse_double(const std::string& tok, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        return pos == tok.size();
    } catch (...) {
        return false;
    }
}

} // namespace

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open dataset file: " + path);
    }
    std::vector<double> xs, ys;
    std::string line;
    Eigen::Index lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;

        std::stringstream ss(trimmed);
        std::string xa, ya;
        if (!std::getline(ss, xa, ',') || !std::getline(ss, ya, ',')) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected two comma-separated columns");
        }
        double x, y;
        if (!parse_double(xa, x) || !parse_double(ya, y)) {
            if (lineno == 1 && xs.empty()) continue;  // header line
            throw ParseError(path + ":" + std::to_string(lineno) + ": not a number");
        }
        if (!xs.empty() && !(x > xs.back())) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": abscissae must be strictly increasing");
        }
        xs.push_back(x);
        ys.push_back(y);
    }
    Dataset d;
    d.xs = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    d.ys = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    check_dataset(d);
    return d;
}

void write_curves_csv(const std::string& path, const std::vector<NamedCurve>& curves) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) {
        throw IoError("cannot write curves file: " + path);
    }
    out << "x,y,series\n";
    for (const NamedCurve& c : curves) {
        for (Eigen::Index i = 0; i < c.xs.size(); ++i) {
            out << format_full(c.xs[i]) << ',' << format_full(c.ys[i]) << ',' << c.name << '\n';
        }
    }
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write report file: " + path);
    }
    out << "tau,side,model,refined,mse,cusps\n";
    for (const ReportRow& r : rows) {
        out << format_full(r.tau) << ',' << r.side << ',' << r.model << ','
            << (r.refined ? "true" : "false") << ',' << format_full(r.mse) << ','
            << r.cusps << '\n';
    }
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

namespace {

/// splitmix64 finalizer; a bijective scramble of the 64-bit counter space.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

double CounterRng::uniform(std::uint64_t counter) const {
    const std::uint64_t bits = mix(mix(seed) ^ mix(counter + 0x632be59bd9b4e019ULL));
    // 53 random bits into (0, 1); the half-ulp shift keeps the draw nonzero.
    return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double CounterRng::normal(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace opcurve
