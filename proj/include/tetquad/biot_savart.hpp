#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tetquad/detail/parallel.hpp"
#include "tetquad/mesh.hpp"
#include "tetquad/simplex_rule.hpp"
#include "tetquad/singular.hpp"

namespace tetquad {

struct BiotSavartOptions {
    int n_theta = 3, n_phi = 3, n_rho = 3;  // singular rule lengths
    bool singular_correction = true;        // false: fixed rule everywhere
    bool analytic_vorticity = false;        // sample `field` instead of interpolating
    std::function<Vec3(const Vec3&)> field; // required when analytic_vorticity
    int threads = 1;
};

namespace detail {

/// Spherical-scheme integral over one mesh element with the singularity at
/// node 0.  The sweep needs the element's vertex cone to stay within a
/// half-space of azimuth, which a mesh element may violate for the default
/// node labels; the cyclic relabelings of nodes 1-3 change the reference
/// plane, so try those first and split the element when none is
/// admissible (children subtend smaller cones).
template <typename G>
Vec3 singular_element_integral(const Tetrahedron& tet, G&& g, const SingularitySpec& spec,
                               const SingularRules& rules, int depth = 0) {
    for (int rot = 0; rot < 3; ++rot) {
        const Tetrahedron t{{tet.nodes[0], tet.nodes[static_cast<size_t>(1 + rot)],
                             tet.nodes[static_cast<size_t>(1 + (rot + 1) % 3)],
                             tet.nodes[static_cast<size_t>(1 + (rot + 2) % 3)]}};
        try {
            return integrate_singular(t, g, spec, rules).value;
        } catch (const std::domain_error&) {
        }
    }
    if (depth >= 8)
        throw std::domain_error(
            "biot_savart: element not integrable by the spherical sweep after 8 splits");
    Vec3 acc{};
    for (const auto& child : split_tetrahedron(tet))
        acc += singular_element_integral(child, g, spec, rules, depth + 1);
    return acc;
}

/// Barycentric coordinates (l1, l2, l3) of x within a tetrahedron, from a
/// precomputed edge-matrix inverse.
struct BarycentricSolver {
    Mat3 inv;  // maps (x - x0) to (l1, l2, l3), as a column solve
    Vec3 x0;

    static BarycentricSolver of(const Tetrahedron& tet) {
        Mat3 edges;  // columns are the edge vectors
        for (int c = 0; c < 3; ++c) {
            const Vec3 e = tet.nodes[static_cast<size_t>(c) + 1] - tet.nodes[0];
            edges(0, c) = e.x;
            edges(1, c) = e.y;
            edges(2, c) = e.z;
        }
        return {solve3(edges, Mat3::identity()), tet.nodes[0]};
    }

    std::array<double, 4> coords(const Vec3& x) const {
        const Vec3 d = x - x0;
        const double l1 = inv(0, 0) * d.x + inv(0, 1) * d.y + inv(0, 2) * d.z;
        const double l2 = inv(1, 0) * d.x + inv(1, 1) * d.y + inv(1, 2) * d.z;
        const double l3 = inv(2, 0) * d.x + inv(2, 1) * d.y + inv(2, 2) * d.z;
        return {1.0 - l1 - l2 - l3, l1, l2, l3};
    }
};

}  // namespace detail

/// Velocity induced by the mesh's vorticity field at the given targets:
///   u(x) = -(1/4pi) sum_tets int (x - y) x omega(y) / R^3 dV.
///
/// Far contributions use the fixed simplex rule with omega interpolated
/// linearly from the nodal samples.  A tetrahedron having the target as a
/// vertex is integrated by the spherical scheme with that vertex reordered
/// to the singular slot: the kernel is written g(y)/R^2 with the bounded
/// numerator g = (x - y) x omega(y) / R, since 1/R^3 itself exceeds the
/// integrable range.  Targets must coincide with a mesh node or lie
/// outside every element: a target strictly interior to an element has a
/// non-integrable kernel there and is rejected.
inline std::vector<Vec3> biot_savart(const TetMesh& mesh, std::span<const Vec3> targets,
                                     const FixedTetRule& rule, const BiotSavartOptions& opt) {
    if (mesh.nodes.empty() || mesh.tets.empty())
        throw std::invalid_argument("biot_savart: empty mesh");
    if (mesh.vorticity.size() != mesh.nodes.size())
        throw std::invalid_argument("biot_savart: vorticity not sampled at every node");
    if (opt.analytic_vorticity && !opt.field)
        throw std::invalid_argument("biot_savart: analytic_vorticity needs a field");

    const int n_targets = static_cast<int>(targets.size());
    const int n_tets = static_cast<int>(mesh.tets.size());

    // Mesh scale for coincidence tests.
    double scale = 0.0;
    for (const auto& p : mesh.nodes)
        scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    const double coincide_tol = 1e-12 * std::max(scale, 1.0);

    // Targets that sit on mesh nodes.
    std::vector<int> target_node(static_cast<size_t>(n_targets), -1);
    for (int t = 0; t < n_targets; ++t) {
        const Vec3& x = targets[static_cast<size_t>(t)];
        for (int i = 0; i < static_cast<int>(mesh.nodes.size()); ++i) {
            if (norm(mesh.nodes[static_cast<size_t>(i)] - x) <= coincide_tol) {
                target_node[static_cast<size_t>(t)] = i;
                break;
            }
        }
    }

    // Reject targets interior to an element they are not a vertex of.
    for (int ti = 0; ti < n_tets; ++ti) {
        const auto& conn = mesh.tets[static_cast<size_t>(ti)];
        const Tetrahedron tet = mesh.tetrahedron(ti);
        Vec3 lo = tet.nodes[0], hi = tet.nodes[0];
        for (int c = 1; c < 4; ++c) {
            lo = {std::min(lo.x, tet.nodes[static_cast<size_t>(c)].x),
                  std::min(lo.y, tet.nodes[static_cast<size_t>(c)].y),
                  std::min(lo.z, tet.nodes[static_cast<size_t>(c)].z)};
            hi = {std::max(hi.x, tet.nodes[static_cast<size_t>(c)].x),
                  std::max(hi.y, tet.nodes[static_cast<size_t>(c)].y),
                  std::max(hi.z, tet.nodes[static_cast<size_t>(c)].z)};
        }
        const auto solver = detail::BarycentricSolver::of(tet);
        for (int t = 0; t < n_targets; ++t) {
            const int node = target_node[static_cast<size_t>(t)];
            if (node == conn[0] || node == conn[1] || node == conn[2] || node == conn[3]) continue;
            const Vec3& x = targets[static_cast<size_t>(t)];
            const double pad = 1e-9 * std::max(scale, 1.0);
            if (x.x < lo.x - pad || x.x > hi.x + pad || x.y < lo.y - pad || x.y > hi.y + pad ||
                x.z < lo.z - pad || x.z > hi.z + pad)
                continue;
            const auto l = solver.coords(x);
            if (l[0] >= -1e-12 && l[1] >= -1e-12 && l[2] >= -1e-12 && l[3] >= -1e-12)
                throw std::domain_error("biot_savart: target " + std::to_string(t) +
                                        " lies inside element " + std::to_string(ti) +
                                        " without being one of its vertices");
        }
    }

    // Far field: fixed rule, looped tet-major so each element's quadrature
    // data is built once and reused for every target.  Chunk partials are
    // reduced in a fixed order, so results do not depend on thread count.
    const int chunks = std::min(n_tets, 128);
    std::vector<std::vector<Vec3>> partial(static_cast<size_t>(chunks),
                                           std::vector<Vec3>(static_cast<size_t>(n_targets)));
    const int npts = rule.size();

    detail::run_chunked(chunks, opt.threads, [&](int chunk) {
        auto& acc = partial[static_cast<size_t>(chunk)];
        const int t_begin = static_cast<int>(static_cast<long long>(chunk) * n_tets / chunks);
        const int t_end = static_cast<int>(static_cast<long long>(chunk + 1) * n_tets / chunks);
        std::vector<Vec3> qp(static_cast<size_t>(npts));
        std::vector<Vec3> qw(static_cast<size_t>(npts));  // omega * weight * |6V|
        for (int ti = t_begin; ti < t_end; ++ti) {
            const auto& conn = mesh.tets[static_cast<size_t>(ti)];
            const Tetrahedron tet = mesh.tetrahedron(ti);
            const double jac = 6.0 * tet.volume();
            for (int q = 0; q < npts; ++q) {
                const auto& l = rule.barycentric[static_cast<size_t>(q)];
                const Vec3 x = tet.nodes[0] * l[0] + tet.nodes[1] * l[1] + tet.nodes[2] * l[2] +
                               tet.nodes[3] * l[3];
                qp[static_cast<size_t>(q)] = x;
                Vec3 w;
                if (opt.analytic_vorticity) {
                    w = opt.field(x);
                } else {
                    w = mesh.vorticity[static_cast<size_t>(conn[0])] * l[0] +
                        mesh.vorticity[static_cast<size_t>(conn[1])] * l[1] +
                        mesh.vorticity[static_cast<size_t>(conn[2])] * l[2] +
                        mesh.vorticity[static_cast<size_t>(conn[3])] * l[3];
                }
                qw[static_cast<size_t>(q)] = w * (rule.weights[static_cast<size_t>(q)] * jac);
            }
            for (int t = 0; t < n_targets; ++t) {
                const int node = target_node[static_cast<size_t>(t)];
                const bool incident = opt.singular_correction &&
                                      (node == conn[0] || node == conn[1] || node == conn[2] ||
                                       node == conn[3]);
                if (incident) continue;
                const Vec3& x = targets[static_cast<size_t>(t)];
                Vec3 sum{};
                for (int q = 0; q < npts; ++q) {
                    const Vec3 d = x - qp[static_cast<size_t>(q)];
                    const double r2 = dot(d, d);
                    const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
                    sum += cross(d, qw[static_cast<size_t>(q)]) * inv_r3;
                }
                acc[static_cast<size_t>(t)] += sum;
            }
        }
    });

    std::vector<Vec3> result(static_cast<size_t>(n_targets));
    for (int c = 0; c < chunks; ++c)
        for (int t = 0; t < n_targets; ++t)
            result[static_cast<size_t>(t)] += partial[static_cast<size_t>(c)][static_cast<size_t>(t)];

    // Near field: spherical singular quadrature on elements incident to a
    // node target, with alpha = 2 and the remaining 1/R folded into g.
    if (opt.singular_correction) {
        const SingularitySpec spec = SingularitySpec::from_alpha(2.0);
        const SingularRules rules = make_singular_rules(opt.n_theta, opt.n_phi, opt.n_rho, spec);
        for (int t = 0; t < n_targets; ++t) {
            const int node = target_node[static_cast<size_t>(t)];
            if (node < 0) continue;
            const Vec3& x = targets[static_cast<size_t>(t)];
            for (int ti = 0; ti < n_tets; ++ti) {
                const auto& conn = mesh.tets[static_cast<size_t>(ti)];
                int slot = -1;
                for (int c = 0; c < 4; ++c)
                    if (conn[static_cast<size_t>(c)] == node) slot = c;
                if (slot < 0) continue;

                Tetrahedron tet = mesh.tetrahedron(ti);
                std::array<int, 4> perm_conn = conn;
                std::swap(tet.nodes[0], tet.nodes[static_cast<size_t>(slot)]);
                std::swap(perm_conn[0], perm_conn[static_cast<size_t>(slot)]);

                const auto solver = detail::BarycentricSolver::of(tet);
                const std::array<Vec3, 4> wn = {
                    mesh.vorticity[static_cast<size_t>(perm_conn[0])],
                    mesh.vorticity[static_cast<size_t>(perm_conn[1])],
                    mesh.vorticity[static_cast<size_t>(perm_conn[2])],
                    mesh.vorticity[static_cast<size_t>(perm_conn[3])]};
                const auto g = [&](const Vec3& y) -> Vec3 {
                    const Vec3 d = x - y;
                    const double r = norm(d);
                    Vec3 w;
                    if (opt.analytic_vorticity) {
                        w = opt.field(y);
                    } else {
                        const auto l = solver.coords(y);
                        w = wn[0] * l[0] + wn[1] * l[1] + wn[2] * l[2] + wn[3] * l[3];
                    }
                    return cross(d, w) / r;
                };
                result[static_cast<size_t>(t)] +=
                    detail::singular_element_integral(tet, g, spec, rules);
            }
        }
    }

    for (auto& u : result) u *= -1.0 / (4.0 * M_PI);
    return result;
}

}  // namespace tetquad
