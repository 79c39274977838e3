#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "tetquad/detail/value_ops.hpp"
#include "tetquad/geometry.hpp"
#include "tetquad/rules.hpp"

namespace tetquad {

/// Decomposition of the singularity exponent: 1/R^alpha is integrated as
/// rho^(n+gamma) after the change to spherical coordinates, with
/// n + gamma = 2 - alpha, integer n >= 0 and gamma in (-1, 1].  gamma
/// becomes the weight exponent of the radial Gauss-Jacobi rule; gamma == 0
/// selects a plain Legendre rule.
struct SingularitySpec {
    double alpha = 0.0;
    int n = 2;
    double gamma = 0.0;

    /// Split alpha into n + gamma = 2 - alpha.  Integer alpha maps to
    /// gamma = 0; otherwise n = max(0, floor(2 - alpha)), which keeps
    /// rho^n a nonnegative integer power and puts gamma in (-1, 0) for
    /// alpha in (2, 3), matching the gamma = 1/pi - 1 choice used for
    /// alpha = 3 - 1/pi.
    static SingularitySpec from_alpha(double alpha) {
        if (!(alpha < 3.0))
            throw std::invalid_argument("SingularitySpec: alpha must be < 3 (integrable)");
        const double two_minus = 2.0 - alpha;
        const double rounded = std::round(two_minus);
        SingularitySpec s;
        s.alpha = alpha;
        if (std::abs(two_minus - rounded) <= 1e-12 && rounded >= 0.0) {
            s.n = static_cast<int>(rounded);
            s.gamma = 0.0;
        } else {
            s.n = std::max(0, static_cast<int>(std::floor(two_minus)));
            s.gamma = two_minus - s.n;
        }
        return s;
    }

    bool legendre_radial() const { return gamma == 0.0; }
};

/// Integrand f(x)/R^alpha with smooth numerator f; f may return a double,
/// a Vec3, or a std::array<double, N>.
template <typename F>
struct SingularIntegrand {
    F f;
    SingularitySpec spec;
};

template <typename F>
SingularIntegrand(F, SingularitySpec) -> SingularIntegrand<F>;

/// Rule triplet for the theta, phi, rho directions of Algorithm 1.
struct SingularRules {
    QuadratureRule1D theta;
    QuadratureRule1D phi;
    QuadratureRule1D rho;
};

inline SingularRules make_singular_rules(int n_theta, int n_phi, int n_rho,
                                         const SingularitySpec& spec) {
    return {gauss_legendre(n_theta), gauss_legendre(n_phi),
            spec.legendre_radial() ? gauss_legendre(n_rho) : gauss_jacobi(n_rho, spec.gamma)};
}

inline SingularRules make_singular_rules(int n, const SingularitySpec& spec) {
    return make_singular_rules(n, n, n, spec);
}

/// Rule lengths per direction plus a running count of integrand
/// evaluations; one pass over a leaf tetrahedron spends exactly
/// n_theta * n_phi * n_rho evaluations.
struct QuadratureBudget {
    int n_theta = 0, n_phi = 0, n_rho = 0;
    long long evaluations = 0;

    static QuadratureBudget of(const SingularRules& rules) {
        return {rules.theta.size(), rules.phi.size(), rules.rho.size(), 0};
    }
    long long per_pass() const {
        return static_cast<long long>(n_theta) * n_phi * n_rho;
    }
};

template <typename V>
struct IntegrationResult {
    V value{};
    long long evaluations = 0;
};

template <typename V>
struct AdaptiveResult {
    V value{};
    long long evaluations = 0;
    double discrepancy = 0.0;  // sum of accepted split-test discrepancies
};

/// Thrown when the adaptive scheme hits max_depth with unconverged leaves.
class AdaptiveUnconvergedError : public std::runtime_error {
public:
    AdaptiveUnconvergedError(std::string msg, double worst, long long evals)
        : std::runtime_error(std::move(msg)), worst_discrepancy(worst), evaluations(evals) {}
    double worst_discrepancy;
    long long evaluations;
};

namespace detail {

inline double int_pow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

template <typename F>
using integrand_value_t = std::remove_cvref_t<std::invoke_result_t<F&, const Vec3&>>;

/// Core of Algorithm 1, operating on an already-transformed tetrahedron.
template <typename F>
integrand_value_t<F> integrate_reference(const ReferenceTet& ref, F&& f,
                                         const SingularitySpec& spec, const SingularRules& rules) {
    using V = integrand_value_t<F>;
    const double theta23 = theta_extent(ref);
    const double theta_bar = 0.5 * theta23;
    const double dtheta = 0.5 * theta23;
    const double gp1 = spec.gamma + 1.0;

    V acc{};
    for (int i = 0; i < rules.theta.size(); ++i) {
        const double theta = theta_bar + dtheta * rules.theta.nodes[static_cast<size_t>(i)];
        const double wt = rules.theta.weights[static_cast<size_t>(i)];
        const PhiLimits lim = phi_limits(ref, theta);
        const double phi_bar = 0.5 * (lim.phi_a + lim.phi_b);
        const double dphi = 0.5 * (lim.phi_b - lim.phi_a);
        const double ct = std::cos(theta), st = std::sin(theta);

        for (int j = 0; j < rules.phi.size(); ++j) {
            const double phi = phi_bar + dphi * rules.phi.nodes[static_cast<size_t>(j)];
            const double wp = rules.phi.weights[static_cast<size_t>(j)];
            const double sp = std::sin(phi), cp = std::cos(phi);
            const double rho_max = rho_limit(lim, phi);
            const double w_ij =
                dtheta * dphi * wt * wp * sp * std::pow(0.5 * rho_max, gp1);

            for (int k = 0; k < rules.rho.size(); ++k) {
                const double rho =
                    rho_max * 0.5 * (1.0 + rules.rho.nodes[static_cast<size_t>(k)]);
                const Vec3 y{rho * ct * sp, rho * st * sp, rho * cp};
                const Vec3 x = ref.origin + row_times(y, ref.rotation);
                const V fv = f(x);
                if (!all_finite(fv))
                    throw std::runtime_error("integrate_singular: non-finite integrand at (" +
                                             std::to_string(x.x) + ", " + std::to_string(x.y) +
                                             ", " + std::to_string(x.z) + ")");
                accumulate(acc, w_ij * rules.rho.weights[static_cast<size_t>(k)] *
                                    int_pow(rho, spec.n),
                           fv);
            }
        }
    }
    return acc;
}

}  // namespace detail

/// Tensor-product evaluation of the integral of f(x)/R^alpha over a
/// tetrahedron with the singularity at node 0, per the spherical-coordinate
/// scheme: sweep theta over [0, theta23], phi between the edge
/// intersections, rho to the far face, with rho^gamma absorbed by the
/// radial Jacobi rule.
template <typename F>
IntegrationResult<detail::integrand_value_t<F>> integrate_singular(const Tetrahedron& tet, F&& f,
                                                                   const SingularitySpec& spec,
                                                                   const SingularRules& rules) {
    if (spec.legendre_radial()) {
        if (rules.rho.kind != RuleKind::legendre)
            throw std::invalid_argument("integrate_singular: gamma = 0 needs a Legendre rho rule");
    } else {
        if (rules.rho.kind != RuleKind::jacobi || rules.rho.gamma != spec.gamma)
            throw std::invalid_argument(
                "integrate_singular: rho rule must be Jacobi with the spec's gamma");
    }
    const ReferenceTet ref = to_reference_orientation(tet);
    auto value = detail::integrate_reference(ref, std::forward<F>(f), spec, rules);
    return {value, static_cast<long long>(rules.theta.size()) * rules.phi.size() *
                       rules.rho.size()};
}

template <typename F>
auto integrate_singular(const Tetrahedron& tet, const SingularIntegrand<F>& g,
                        const SingularRules& rules) {
    return integrate_singular(tet, g.f, g.spec, rules);
}

/// Adaptive refinement of integrate_singular.  Each node is accepted when
/// the estimate on its tetrahedron agrees with the sum over its four
/// children within the node's tolerance (max norm across components); the
/// tolerance is divided by 4 among children so the accepted discrepancies
/// sum to at most tol.  Throws AdaptiveUnconvergedError if max_depth split
/// generations do not suffice.
template <typename F>
AdaptiveResult<detail::integrand_value_t<F>> integrate_adaptive(const Tetrahedron& tet, F&& f,
                                                                const SingularitySpec& spec,
                                                                const SingularRules& rules,
                                                                double tol, int max_depth = 12) {
    using V = detail::integrand_value_t<F>;
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol must be positive");
    if (max_depth < 1) throw std::invalid_argument("integrate_adaptive: max_depth must be >= 1");

    struct Node {
        Tetrahedron tet;
        V value;
        double tol;
        int depth;
    };

    const long long per_pass =
        static_cast<long long>(rules.theta.size()) * rules.phi.size() * rules.rho.size();

    long long evaluations = per_pass;
    std::vector<Node> work;
    work.push_back({tet, detail::integrate_reference(to_reference_orientation(tet),
                                                     std::forward<F>(f), spec, rules),
                    tol, 0});

    V total{};
    double discrepancy = 0.0;
    double worst_unconverged = 0.0;

    while (!work.empty()) {
        Node node = std::move(work.back());
        work.pop_back();

        const auto children = split_tetrahedron(node.tet);
        std::array<V, 4> child_values;
        V child_sum{};
        for (int c = 0; c < 4; ++c) {
            child_values[static_cast<size_t>(c)] = detail::integrate_reference(
                to_reference_orientation(children[static_cast<size_t>(c)]), f, spec, rules);
            evaluations += per_pass;
            detail::add_into(child_sum, child_values[static_cast<size_t>(c)]);
        }

        const double disc = detail::sub_max_abs(node.value, child_sum);
        if (disc <= node.tol) {
            detail::add_into(total, child_sum);
            discrepancy += disc;
        } else if (node.depth + 1 >= max_depth) {
            detail::add_into(total, child_sum);
            worst_unconverged = std::max(worst_unconverged, disc);
        } else {
            for (int c = 0; c < 4; ++c)
                work.push_back({children[static_cast<size_t>(c)],
                                child_values[static_cast<size_t>(c)], 0.25 * node.tol,
                                node.depth + 1});
        }
    }

    if (worst_unconverged > 0.0)
        throw AdaptiveUnconvergedError(
            "integrate_adaptive: max_depth reached with unconverged leaves (worst discrepancy " +
                std::to_string(worst_unconverged) + ")",
            worst_unconverged, evaluations);
    return {total, evaluations, discrepancy};
}

template <typename F>
auto integrate_adaptive(const Tetrahedron& tet, const SingularIntegrand<F>& g,
                        const SingularRules& rules, double tol, int max_depth = 12) {
    return integrate_adaptive(tet, g.f, g.spec, rules, tol, max_depth);
}

/// Monomial integrand x^i y^j z^k in global coordinates.
struct MonomialIntegrand {
    int i = 0, j = 0, k = 0;
    double operator()(const Vec3& p) const {
        return detail::int_pow(p.x, i) * detail::int_pow(p.y, j) * detail::int_pow(p.z, k);
    }
};

/// Convenience wrapper: integral of x^i y^j z^k / R^alpha over the
/// tetrahedron.
inline IntegrationResult<double> integrate_monomial(const Tetrahedron& tet, int i, int j, int k,
                                                    const SingularitySpec& spec,
                                                    const SingularRules& rules) {
    if (i < 0 || j < 0 || k < 0 || i + j + k > 8)
        throw std::invalid_argument("integrate_monomial: need nonnegative i, j, k with sum <= 8");
    return integrate_singular(tet, MonomialIntegrand{i, j, k}, spec, rules);
}

}  // namespace tetquad
