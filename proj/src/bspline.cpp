#include "opcurve/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace opcurve {

namespace {

/// Domain check with a few-ulp slack so that uniform grids whose last point
/// rounds past b are still accepted; x is clamped back into [a, b].
double checked_clamp(const KnotVector& kv, double x, const char* who) {
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max({std::abs(kv.a), std::abs(kv.b), 1.0});
    if (x < kv.a - slack || x > kv.b + slack) {
        throw DomainError(std::string(who) + ": x=" + std::to_string(x) +
                          " outside [" + std::to_string(kv.a) + ", " +
                          std::to_string(kv.b) + "]");
    }
    return std::clamp(x, kv.a, kv.b);
}

} // namespace

KnotVector build_knots(double a, double b, Eigen::Index n) {
    if (!(b > a)) {
        throw DomainError("build_knots: b must exceed a");
    }
    if (n < 4) {
        throw DimensionError("build_knots: basis dimension n must be >= 4");
    }
    KnotVector kv;
    kv.n = n;
    kv.a = a;
    kv.b = b;
    kv.h = (b - a) / static_cast<double>(n - 3);
    kv.knots.resize(n + 4);
    for (Eigen::Index s = 0; s < n + 4; ++s) {
        kv.knots[s] = a + static_cast<double>(s - 3) * kv.h;
    }
    // Pin the domain endpoints exactly; the spacing stays uniform to 1 ulp.
    kv.knots[3] = a;
    kv.knots[n] = b;
    return kv;
}

BasisValues eval_basis(const KnotVector& kv, double x, int deriv) {
    x = checked_clamp(kv, x, "eval_basis");
    const Eigen::VectorXd& t = kv.knots;
    const Eigen::Index n = kv.n;

    // Knot span k with t[k] <= x < t[k+1]; the last interval is closed at b.
    Eigen::Index k = 3 + static_cast<Eigen::Index>(std::floor((x - kv.a) / kv.h));
    k = std::clamp<Eigen::Index>(k, 3, n - 1);

    // Triangular recurrence, keeping the order-2 and order-3 stages for the
    // derivative formulas. After stage j, N[r] = B_{k-j+r, j+1}(x).
    double N[4] = {1.0, 0.0, 0.0, 0.0};
    double ord2[2] = {0.0, 0.0};
    double ord3[3] = {0.0, 0.0, 0.0};
    double left[4], right[4];
    for (int j = 1; j <= 3; ++j) {
        left[j] = x - t[k + 1 - j];
        right[j] = t[k + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = N[r] / (right[r + 1] + left[j - r]);
            N[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        N[j] = saved;
        if (j == 1) {
            ord2[0] = N[0];
            ord2[1] = N[1];
        } else if (j == 2) {
            ord3[0] = N[0];
            ord3[1] = N[1];
            ord3[2] = N[2];
        }
    }

    BasisValues out;
    out.first = k - 3;
    if (deriv == 0) {
        for (int r = 0; r < 4; ++r) out.values[r] = N[r];
        return out;
    }

    // Order-3 values by index: B_{i,3} nonzero for i in [k-2, k].
    auto b3 = [&](Eigen::Index i) -> double {
        const Eigen::Index r = i - (k - 2);
        return (r >= 0 && r <= 2) ? ord3[r] : 0.0;
    };
    // Order-2 values: B_{i,2} nonzero for i in [k-1, k].
    auto b2 = [&](Eigen::Index i) -> double {
        const Eigen::Index r = i - (k - 1);
        return (r >= 0 && r <= 1) ? ord2[r] : 0.0;
    };
    // First derivative of an order-3 basis function.
    auto db3 = [&](Eigen::Index i) -> double {
        return 2.0 * (b2(i) / (t[i + 2] - t[i]) - b2(i + 1) / (t[i + 3] - t[i + 1]));
    };

    if (deriv == 1) {
        for (int r = 0; r < 4; ++r) {
            const Eigen::Index i = k - 3 + r;
            out.values[r] =
                3.0 * (b3(i) / (t[i + 3] - t[i]) - b3(i + 1) / (t[i + 4] - t[i + 1]));
        }
        return out;
    }
    if (deriv == 2) {
        for (int r = 0; r < 4; ++r) {
            const Eigen::Index i = k - 3 + r;
            out.values[r] =
                3.0 * (db3(i) / (t[i + 3] - t[i]) - db3(i + 1) / (t[i + 4] - t[i + 1]));
        }
        return out;
    }
    throw DimensionError("eval_basis: derivative order must be 0, 1 or 2");
}

Eigen::MatrixXd collocation(const KnotVector& kv,
                            const Eigen::Ref<const Eigen::VectorXd>& xs,
                            int deriv) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(xs.size(), kv.n);
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
        const BasisValues bv = eval_basis(kv, xs[i], deriv);
        for (int r = 0; r < 4; ++r) {
            M(i, bv.first + r) = bv.values[r];
        }
    }
    return M;
}

Eigen::MatrixXd gram_second_derivative(const KnotVector& kv) {
    // 3-point Gauss-Legendre nodes and weights on [-1, 1].
    static const double gl_x[3] = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
    static const double gl_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

    const Eigen::Index n = kv.n;
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index s = 3; s < n; ++s) {
        const double lo = kv.knots[s];
        const double hi = kv.knots[s + 1];
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (int q = 0; q < 3; ++q) {
            const BasisValues bv = eval_basis(kv, mid + half * gl_x[q], 2);
            const double w = half * gl_w[q];
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    R(bv.first + i, bv.first + j) += w * bv.values[i] * bv.values[j];
                }
            }
        }
    }
    return R;
}

double SplineModel::eval(double x, int deriv) const {
    return eval_spline(*this, x, deriv);
}

double eval_spline(const SplineModel& model, double x, int deriv) {
    if (model.coeffs.size() != model.knots.n) {
        throw DimensionError("eval_spline: coefficient count does not match basis dimension");
    }
    const BasisValues bv = eval_basis(model.knots, x, deriv);
    return model.coeffs.segment<4>(bv.first).dot(bv.values);
}

Eigen::VectorXd eval_spline(const SplineModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& xs,
                            int deriv) {
    Eigen::VectorXd out(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
        out[i] = eval_spline(model, xs[i], deriv);
    }
    return out;
}

} // namespace opcurve
