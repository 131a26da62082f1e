#include "opcurve/tp_spline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "opcurve/solvers.hpp"

namespace opcurve {

void check_dataset(const Dataset& d) {
    if (d.xs.size() != d.ys.size()) {
        throw DimensionError("dataset: xs and ys lengths differ");
    }
    if (d.m() < 4) {
        throw DimensionError("dataset: at least 4 samples required");
    }
    for (Eigen::Index i = 0; i + 1 < d.m(); ++i) {
        if (!(d.xs[i] < d.xs[i + 1])) {
            throw DomainError("dataset: abscissae must be strictly increasing");
        }
    }
}

DerivativeData derivative_data(const Dataset& d) {
    check_dataset(d);
    const Eigen::Index m = d.m();
    DerivativeData dd;
    dd.mid_xs.resize(m - 1);
    dd.mid_slopes.resize(m - 1);
    dd.node_slopes.resize(m);
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
        dd.mid_xs[j] = 0.5 * (d.xs[j] + d.xs[j + 1]);
        dd.mid_slopes[j] = (d.ys[j + 1] - d.ys[j]) / (d.xs[j + 1] - d.xs[j]);
    }
    for (Eigen::Index j = 1; j < m; ++j) {
        dd.node_slopes[j] = (d.ys[j] - d.ys[j - 1]) / (d.xs[j] - d.xs[j - 1]);
    }
    dd.node_slopes[0] = dd.node_slopes[1];
    return dd;
}

Eigen::MatrixXd second_difference_matrix(Eigen::Index n) {
    if (n < 3) {
        throw DimensionError("second_difference_matrix: n must be >= 3");
    }
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n - 2, n);
    for (Eigen::Index i = 0; i < n - 2; ++i) {
        D(i, i) = 1.0;
        D(i, i + 1) = -2.0;
        D(i, i + 2) = 1.0;
    }
    return D;
}

TpSystem assemble_tp_system(const Dataset& d, const KnotVector& kv,
                            const RegularizationParams& p,
                            const std::optional<DerivativeData>& dd) {
    check_dataset(d);
    const DerivativeData data = dd ? *dd : derivative_data(d);

    const Eigen::MatrixXd B = collocation(kv, d.xs, 0);
    const Eigen::MatrixXd Phi = collocation(kv, d.xs, 1);
    const Eigen::MatrixXd Psi = collocation(kv, data.mid_xs, 1);
    const Eigen::MatrixXd D = second_difference_matrix(kv.n);

    const double mu2 = p.mu * p.mu;
    const double lam2 = p.lambda * p.lambda;

    TpSystem sys;
    sys.normal = B.transpose() * B +
                 mu2 * (Phi.transpose() * Phi + Psi.transpose() * Psi) +
                 lam2 * D.transpose() * D;
    sys.rhs = B.transpose() * d.ys +
              mu2 * (Psi.transpose() * data.mid_slopes +
                     Phi.transpose() * data.node_slopes);
    return sys;
}

SplineModel fit_tp_spline(const Dataset& d, const KnotVector& kv,
                          const RegularizationParams& p,
                          const std::optional<DerivativeData>& dd) {
    const TpSystem sys = assemble_tp_system(d, kv, p, dd);
    SplineModel model;
    model.knots = kv;
    model.coeffs = solve_spd(sys.normal, sys.rhs);
    return model;
}

Eigen::MatrixXd hat_matrix(const Dataset& d, const KnotVector& kv,
                           const RegularizationParams& p,
                           const std::optional<DerivativeData>& dd) {
    const TpSystem sys = assemble_tp_system(d, kv, p, dd);
    const Eigen::MatrixXd B = collocation(kv, d.xs, 0);
    return B * solve_spd(sys.normal, Eigen::MatrixXd(B.transpose()));
}

double gcv_score(const Dataset& d, const KnotVector& kv,
                 const RegularizationParams& p,
                 const std::optional<DerivativeData>& dd) {
    const Eigen::MatrixXd H = hat_matrix(d, kv, p, dd);
    const double m = static_cast<double>(d.m());
    const double edf = H.trace() / m;
    if (edf >= 1.0) {
        throw DegenerateGcv("gcv_score: effective degrees of freedom exhaust the data");
    }
    const double rss = (d.ys - H * d.ys).squaredNorm() / m;
    const double denom = 1.0 - edf;
    return rss / (denom * denom);
}

namespace {

/// Nelder-Mead in 1 or 2 dimensions with standard coefficients. Stops when
/// the evaluation budget is spent or the simplex collapses below tol.
/// Records the best point ever evaluated.
struct NelderMead {
    std::function<double(const Eigen::VectorXd&)> f;
    Eigen::Index max_evals;
    double tol;

    Eigen::VectorXd best_x;
    double best_f = std::numeric_limits<double>::infinity();
    Eigen::Index evals = 0;

    double eval(const Eigen::VectorXd& x) {
        if (evals >= max_evals) return std::numeric_limits<double>::infinity();
        ++evals;
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
        return v;
    }

    void run(std::vector<Eigen::VectorXd> simplex) {
        const size_t k = simplex.size();  // dim + 1
        std::vector<double> fv(k);
        for (size_t i = 0; i < k; ++i) fv[i] = eval(simplex[i]);

        while (evals < max_evals) {
            // Order by value; ties broken by lexicographic comparison of the
            // points so the iteration is fully deterministic.
            std::vector<size_t> idx(k);
            for (size_t i = 0; i < k; ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(), [&](size_t l, size_t r) {
                if (fv[l] != fv[r]) return fv[l] < fv[r];
                for (Eigen::Index c = 0; c < simplex[l].size(); ++c) {
                    if (simplex[l][c] != simplex[r][c]) return simplex[l][c] < simplex[r][c];
                }
                return false;
            });
            std::vector<Eigen::VectorXd> s2(k);
            std::vector<double> f2(k);
            for (size_t i = 0; i < k; ++i) {
                s2[i] = simplex[idx[i]];
                f2[i] = fv[idx[i]];
            }
            simplex.swap(s2);
            fv.swap(f2);

            double spread = 0.0;
            for (size_t i = 1; i < k; ++i) {
                spread = std::max(spread, (simplex[i] - simplex[0]).lpNorm<Eigen::Infinity>());
            }
            if (spread < tol) break;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(simplex[0].size());
            for (size_t i = 0; i + 1 < k; ++i) centroid += simplex[i];
            centroid /= static_cast<double>(k - 1);

            const Eigen::VectorXd& worst = simplex[k - 1];
            const Eigen::VectorXd xr = centroid + (centroid - worst);
            const double fr = eval(xr);
            if (fr < fv[0]) {
                const Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst);
                const double fe = eval(xe);
                if (fe < fr) {
                    simplex[k - 1] = xe;
                    fv[k - 1] = fe;
                } else {
                    simplex[k - 1] = xr;
                    fv[k - 1] = fr;
                }
            } else if (fr < fv[k - 2]) {
                simplex[k - 1] = xr;
                fv[k - 1] = fr;
            } else {
                const Eigen::VectorXd xc = centroid + 0.5 * (worst - centroid);
                const double fc = eval(xc);
                if (fc < fv[k - 1]) {
                    simplex[k - 1] = xc;
                    fv[k - 1] = fc;
                } else {
                    for (size_t i = 1; i < k; ++i) {
                        simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
                        fv[i] = eval(simplex[i]);
                    }
                }
            }
        }
    }
};

} // namespace

RegularizationParams select_parameters(const Dataset& d, const KnotVector& kv,
                                       const GcvSearchConfig& cfg,
                                       const std::optional<DerivativeData>& dd) {
    check_dataset(d);
    if (cfg.grid < 2 || !(cfg.param_max > cfg.param_min) || !(cfg.param_min > 0)) {
        throw DimensionError("select_parameters: invalid search configuration");
    }
    const double lmin = std::log10(cfg.param_min);
    const double lmax = std::log10(cfg.param_max);
    const double lstep = (lmax - lmin) / static_cast<double>(cfg.grid - 1);

    // Degenerate cells score +inf and are skipped by the argmin.
    auto score_at = [&](double mu, double lambda) -> double {
        try {
            const double s = gcv_score(d, kv, RegularizationParams{mu, lambda}, dd);
            return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
        } catch (const DegenerateGcv&) {
            return std::numeric_limits<double>::infinity();
        } catch (const SingularMatrix&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    const bool two_dim = !cfg.fixed_mu.has_value();
    double best = std::numeric_limits<double>::infinity();
    double best_lmu = 0.0, best_llam = 0.0;
    for (Eigen::Index i = 0; i < (two_dim ? cfg.grid : 1); ++i) {
        const double lmu = lmin + static_cast<double>(i) * lstep;
        const double mu = two_dim ? std::pow(10.0, lmu) : *cfg.fixed_mu;
        for (Eigen::Index j = 0; j < cfg.grid; ++j) {
            const double llam = lmin + static_cast<double>(j) * lstep;
            const double s = score_at(mu, std::pow(10.0, llam));
            if (s < best) {
                best = s;
                best_lmu = lmu;
                best_llam = llam;
            }
        }
    }
    if (!std::isfinite(best)) {
        throw AllDegenerate("select_parameters: every grid cell has an undefined score");
    }

    // Map log10 coordinates back to parameters, clamped so the refinement
    // cannot wander into overflow territory.
    auto clamp_log = [](double v) { return std::clamp(v, -12.0, 6.0); };

    NelderMead nm;
    nm.max_evals = cfg.nm_max_evals;
    nm.tol = cfg.nm_tol;
    if (two_dim) {
        nm.f = [&](const Eigen::VectorXd& x) {
            return score_at(std::pow(10.0, clamp_log(x[0])), std::pow(10.0, clamp_log(x[1])));
        };
        const double delta = 0.5 * lstep;
        Eigen::Vector2d v0(best_lmu, best_llam);
        Eigen::Vector2d v1(best_lmu + delta, best_llam);
        Eigen::Vector2d v2(best_lmu, best_llam + delta);
        nm.run({v0, v1, v2});
        return RegularizationParams{std::pow(10.0, clamp_log(nm.best_x[0])),
                                    std::pow(10.0, clamp_log(nm.best_x[1]))};
    }
    const double mu = *cfg.fixed_mu;
    nm.f = [&](const Eigen::VectorXd& x) {
        return score_at(mu, std::pow(10.0, clamp_log(x[0])));
    };
    Eigen::VectorXd v0(1), v1(1);
    v0 << best_llam;
    v1 << best_llam + 0.5 * lstep;
    nm.run({v0, v1});
    return RegularizationParams{mu, std::pow(10.0, clamp_log(nm.best_x[0]))};
}

SplineModel fit_p_spline(const Dataset& d, const KnotVector& kv, double lambda) {
    return fit_tp_spline(d, kv, RegularizationParams{0.0, lambda});
}

} // namespace opcurve
