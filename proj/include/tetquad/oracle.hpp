#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tetquad/detail/value_ops.hpp"
#include "tetquad/rules.hpp"
#include "tetquad/singular.hpp"

namespace tetquad {

namespace detail {

/// Smallest denominator q <= 64 with alpha * q integral, if any.
inline std::optional<int> rational_denominator(double alpha) {
    for (int q = 1; q <= 64; ++q) {
        const double r = alpha * q;
        if (std::abs(r - std::round(r)) <= 1e-9 * q) return q;
    }
    return std::nullopt;
}

}  // namespace detail

/// Reference value for the integral of f(x)/R^alpha by the Duffy route:
/// the tetrahedron is mapped onto the unit cube through
///   x(u, v, w) = x0 + u [ (x1-x0) + v ((x2-x1) + w (x3-x2)) ],
/// whose Jacobian u^2 v |6V| cancels the singularity.  With the
/// singularity at a vertex a single such element covers the tetrahedron
/// exactly once, so no decomposition is needed.  The radial factor
/// u^(2-alpha) is made polynomial by the substitution u = s^q for rational
/// alpha = p/q; irrational alpha is rejected.  Used only as an oracle,
/// never in the production path.
template <typename F>
detail::integrand_value_t<F> duffy_reference(const Tetrahedron& tet, F&& f, double alpha,
                                             int order) {
    using V = detail::integrand_value_t<F>;
    if (order < 1 || order > 32)
        throw std::invalid_argument("duffy_reference: order must be in [1, 32]");
    const auto q = detail::rational_denominator(alpha);
    if (!q)
        throw std::invalid_argument(
            "duffy_reference: alpha must be rational for the Duffy transformation");
    const int p = static_cast<int>(std::round(alpha * *q));
    const int m = 3 * *q - p - 1;  // s-exponent after u = s^q
    if (m < 0) throw std::invalid_argument("duffy_reference: alpha must be < 3");

    const Vec3 e1 = tet.nodes[1] - tet.nodes[0];
    const Vec3 e2 = tet.nodes[2] - tet.nodes[1];
    const Vec3 e3 = tet.nodes[3] - tet.nodes[2];
    const double jac6v = std::abs(dot(e1, cross(e2, e3)));
    if (jac6v == 0.0) throw std::domain_error("duffy_reference: degenerate tetrahedron");

    const auto unit = affine_map(gauss_legendre(order), 0.0, 1.0);
    const int n = order;

    V acc{};
    for (int a = 0; a < n; ++a) {
        const double s = unit.nodes[static_cast<size_t>(a)];
        const double u = std::pow(s, *q);
        const double radial = *q * detail::int_pow(s, m) * unit.weights[static_cast<size_t>(a)];
        for (int b = 0; b < n; ++b) {
            const double v = unit.nodes[static_cast<size_t>(b)];
            const double wv = v * unit.weights[static_cast<size_t>(b)];
            for (int c = 0; c < n; ++c) {
                const double w = unit.nodes[static_cast<size_t>(c)];
                const Vec3 face = e1 + (e2 + e3 * w) * v;
                const Vec3 x = tet.nodes[0] + face * u;
                const double r_face = norm(face);
                const double weight = radial * wv * unit.weights[static_cast<size_t>(c)] * jac6v /
                                      std::pow(r_face, alpha);
                detail::accumulate(acc, weight, f(x));
            }
        }
    }
    return acc;
}

template <typename F>
auto duffy_reference(const Tetrahedron& tet, const SingularIntegrand<F>& g, int order) {
    return duffy_reference(tet, g.f, g.spec.alpha, order);
}

/// Least-squares fit of an error sequence to the model eps = A n^(-a n),
/// i.e. log eps = log A - a n log n.
struct ConvergenceFit {
    double A = 0.0;
    double a = 0.0;
    std::vector<double> residuals;  // natural-log deviations, fitted points only
};

/// Fit (A, a) over the points with eps above the 1e-13 floor; at least
/// three such points are required.
inline ConvergenceFit fit_convergence(const std::vector<std::pair<int, double>>& points) {
    constexpr double kFloor = 1e-13;
    std::vector<double> s, y;
    for (const auto& [n, eps] : points) {
        if (n < 1) throw std::invalid_argument("fit_convergence: rule length must be >= 1");
        if (eps > kFloor) {
            s.push_back(n * std::log(static_cast<double>(n)));
            y.push_back(std::log(eps));
        }
    }
    if (s.size() < 3)
        throw std::invalid_argument("fit_convergence: need at least 3 points above the floor");

    const double m = static_cast<double>(s.size());
    double ss = 0, sy = 0, sss = 0, ssy = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        ss += s[i];
        sy += y[i];
        sss += s[i] * s[i];
        ssy += s[i] * y[i];
    }
    const double denom = m * sss - ss * ss;
    if (denom == 0.0) throw std::invalid_argument("fit_convergence: degenerate abscissae");
    const double slope = (m * ssy - ss * sy) / denom;
    const double intercept = (sy - slope * ss) / m;

    ConvergenceFit fit;
    fit.a = -slope;
    fit.A = std::exp(intercept);
    fit.residuals.resize(s.size());
    for (size_t i = 0; i < s.size(); ++i) fit.residuals[i] = y[i] - (intercept + slope * s[i]);
    return fit;
}

/// Relative-error table for the monomial family I_ijk, i+j+k <= n_max,
/// against an independent reference: the Duffy oracle at order 32 when
/// alpha is rational, otherwise a length-20 run of the spherical method
/// itself (the self-reference used for alpha = 3 - 1/pi).
struct MonomialSuiteRow {
    int order = 0;
    long long evaluations = 0;
    double eps_rel = 0.0;
};

struct MonomialSuiteResult {
    std::vector<MonomialSuiteRow> rows;
    std::vector<double> reference;  // J_ijk in lexicographic (i, j, k) order
    bool duffy_reference_used = false;
};

namespace detail {

template <typename Fn>
void for_each_monomial(int n_max, Fn&& fn) {
    for (int i = 0; i <= n_max; ++i)
        for (int j = 0; i + j <= n_max; ++j)
            for (int k = 0; i + j + k <= n_max; ++k) fn(i, j, k);
}

}  // namespace detail

inline MonomialSuiteResult monomial_suite(const Tetrahedron& tet, int n_max, double alpha,
                                          const std::vector<int>& orders) {
    if (n_max < 0 || n_max > 8) throw std::invalid_argument("monomial_suite: n_max out of range");
    const SingularitySpec spec = SingularitySpec::from_alpha(alpha);

    MonomialSuiteResult out;
    out.duffy_reference_used = detail::rational_denominator(alpha).has_value();

    double j000 = 0.0;
    if (out.duffy_reference_used) {
        detail::for_each_monomial(n_max, [&](int i, int j, int k) {
            out.reference.push_back(duffy_reference(tet, MonomialIntegrand{i, j, k}, alpha, 32));
        });
        j000 = duffy_reference(tet, MonomialIntegrand{0, 0, 0}, alpha, 32);
    } else {
        const SingularRules ref_rules = make_singular_rules(20, spec);
        detail::for_each_monomial(n_max, [&](int i, int j, int k) {
            out.reference.push_back(integrate_monomial(tet, i, j, k, spec, ref_rules).value);
        });
        j000 = integrate_monomial(tet, 0, 0, 0, spec, ref_rules).value;
    }
    if (j000 == 0.0) throw std::domain_error("monomial_suite: vanishing J_000 normalization");

    for (int order : orders) {
        const SingularRules rules = make_singular_rules(order, spec);
        MonomialSuiteRow row;
        row.order = order;
        size_t idx = 0;
        detail::for_each_monomial(n_max, [&](int i, int j, int k) {
            const auto r = integrate_monomial(tet, i, j, k, spec, rules);
            row.evaluations += r.evaluations;
            row.eps_rel =
                std::max(row.eps_rel, std::abs(r.value - out.reference[idx]) / std::abs(j000));
            ++idx;
        });
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace tetquad
