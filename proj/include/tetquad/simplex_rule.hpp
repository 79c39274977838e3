#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "tetquad/detail/value_ops.hpp"
#include "tetquad/geometry.hpp"

namespace tetquad {

/// Fixed quadrature rule on the reference tetrahedron, stored in
/// barycentric coordinates.  Weights sum to the reference volume 1/6 and
/// the rule integrates all polynomials of total degree <= degree exactly.
/// Grundmann-Moller rules carry negative weights for degree >= 3.
struct FixedTetRule {
    int degree = 0;
    std::vector<std::array<double, 4>> barycentric;  // (l0, l1, l2, l3)
    std::vector<double> weights;

    int size() const { return static_cast<int>(weights.size()); }
};

/// Grundmann-Moller simplex rule of odd degree d = 2s+1 on the
/// tetrahedron: points at barycentric ((2b+1)/(d+3-2i)) over all b with
/// |b| <= s-i, weights (-1)^i 2^(-2s) (d+3-2i)^d / (i! (d+3-i)!).
inline FixedTetRule fixed_tet_rule(int degree) {
    if (degree < 1 || degree > 15 || degree % 2 == 0)
        throw std::invalid_argument("fixed_tet_rule: degree must be odd and in [1, 15]");
    const int s = (degree - 1) / 2;
    const int d = degree;

    std::array<double, 32> fact{};
    fact[0] = 1.0;
    for (size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<double>(i);

    FixedTetRule rule;
    rule.degree = degree;
    for (int i = 0; i <= s; ++i) {
        const int denom = d + 3 - 2 * i;
        double w = std::pow(2.0, -2 * s) * std::pow(static_cast<double>(denom), d) /
                   (fact[static_cast<size_t>(i)] * fact[static_cast<size_t>(d + 3 - i)]);
        if (i % 2 == 1) w = -w;

        const int k = s - i;
        for (int b1 = 0; b1 <= k; ++b1)
            for (int b2 = 0; b1 + b2 <= k; ++b2)
                for (int b3 = 0; b1 + b2 + b3 <= k; ++b3) {
                    const double l1 = (2.0 * b1 + 1.0) / denom;
                    const double l2 = (2.0 * b2 + 1.0) / denom;
                    const double l3 = (2.0 * b3 + 1.0) / denom;
                    rule.barycentric.push_back({1.0 - l1 - l2 - l3, l1, l2, l3});
                    rule.weights.push_back(w);
                }
    }
    return rule;
}

/// Integrate a callable over a physical tetrahedron with a fixed rule.
/// Points map affinely through the barycentric coordinates; weights are
/// scaled by |6V| so that constants integrate to the element volume.
template <typename F>
auto apply_fixed_rule(const FixedTetRule& rule, const Tetrahedron& tet, F&& f) {
    using V = std::remove_cvref_t<std::invoke_result_t<F&, const Vec3&>>;
    const double jac = 6.0 * tet.volume();
    V acc{};
    for (size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& l = rule.barycentric[q];
        const Vec3 x = tet.nodes[0] * l[0] + tet.nodes[1] * l[1] + tet.nodes[2] * l[2] +
                       tet.nodes[3] * l[3];
        detail::accumulate(acc, rule.weights[q] * jac, f(x));
    }
    return acc;
}

}  // namespace tetquad
