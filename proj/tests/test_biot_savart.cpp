#include <gtest/gtest.h>

#include <cmath>

#include "../tools/lattice_mesh.hpp"
#include "tetquad/biot_savart.hpp"
#include "tetquad/oracle.hpp"
#include "tetquad/ring.hpp"

using namespace tetquad;

namespace {

// Small symmetric lattice for structural tests.
TetMesh small_lattice() {
    tools::LatticeSpec spec;
    spec.fine_pitch = 0.5;
    spec.line_samples = 5;
    spec.random_diagonals = false;
    return tools::make_ring_lattice(spec);
}

// Independent far-field value: 50^3-point tensor Gauss-Legendre on the
// cube map of the element (plain affine-collapse map, no singular
// machinery shared with the paths under test).
Vec3 brute_force_far(const Tetrahedron& tet, const Vec3& target, const Vec3& omega) {
    const auto gl = affine_map(gauss_legendre(50), 0.0, 1.0);
    const Vec3 e1 = tet.nodes[1] - tet.nodes[0];
    const Vec3 e2 = tet.nodes[2] - tet.nodes[1];
    const Vec3 e3 = tet.nodes[3] - tet.nodes[2];
    const double jac = std::abs(dot(e1, cross(e2, e3)));
    Vec3 acc{};
    for (size_t a = 0; a < gl.nodes.size(); ++a)
        for (size_t b = 0; b < gl.nodes.size(); ++b)
            for (size_t c = 0; c < gl.nodes.size(); ++c) {
                const double u = gl.nodes[a], v = gl.nodes[b], w = gl.nodes[c];
                const Vec3 x = tet.nodes[0] + (e1 + (e2 + e3 * w) * v) * u;
                const Vec3 d = target - x;
                const double r = norm(d);
                acc += cross(d, omega) *
                       (u * u * v * jac * gl.weights[a] * gl.weights[b] * gl.weights[c] /
                        (r * r * r));
            }
    return acc;
}

}  // namespace

TEST(BiotSavart, ZeroVorticityGivesZeroVelocity) {
    TetMesh mesh = small_lattice();
    // vorticity already zero-initialized
    const std::vector<Vec3> targets{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    const auto u = biot_savart(mesh, targets, fixed_tet_rule(3), {});
    for (const auto& v : u) {
        EXPECT_EQ(v.x, 0.0);
        EXPECT_EQ(v.y, 0.0);
        EXPECT_EQ(v.z, 0.0);
    }
}

TEST(BiotSavart, FarFieldMatchesBruteForce) {
    const Tetrahedron tet{{Vec3{0, 0, 0}, Vec3{0.2, 0, 0}, Vec3{0, 0.3, 0}, Vec3{0, 0, 0.25}}};
    const Vec3 target{3.0, 2.0, 1.5};  // ~12 diameters away
    const Vec3 omega{0.4, -0.3, 0.7};
    const Vec3 fixed = apply_fixed_rule(fixed_tet_rule(13), tet, [&](const Vec3& y) {
        const Vec3 d = target - y;
        const double r = norm(d);
        return cross(d, omega) / (r * r * r);
    });
    const Vec3 gold = brute_force_far(tet, target, omega);
    EXPECT_LT(norm(fixed - gold), 1e-6 * norm(gold));
}

TEST(BiotSavart, SingularPathConsistentWithAdaptive) {
    const Tetrahedron tet{{Vec3{0, 0, 0}, Vec3{0.3, 0, 0}, Vec3{0, 0.3, 0}, Vec3{0.1, 0.1, 0.3}}};
    const Vec3 target = tet.nodes[0];
    const Vec3 omega{0.2, -0.5, 1.0};
    const auto g = [&](const Vec3& y) {
        const Vec3 d = target - y;
        return cross(d, omega) / norm(d);
    };
    const auto spec = SingularitySpec::from_alpha(2.0);
    const auto fixed = integrate_singular(tet, g, spec, make_singular_rules(16, spec));
    const auto adaptive = integrate_adaptive(tet, g, spec, make_singular_rules(8, spec), 1e-10);
    EXPECT_LT(detail::sub_max_abs(fixed.value, adaptive.value), 1e-9);
}

TEST(BiotSavart, MirrorSymmetryOnSymmetricMesh) {
    TetMesh mesh = small_lattice();
    const RingSpec ring;
    sample_vorticity(mesh, [&](const Vec3& x) { return ring_vorticity(ring, x); });
    const std::vector<Vec3> targets{{1.0, 0.0, 0.5}, {1.0, 0.0, -0.5}};
    BiotSavartOptions opt;
    opt.threads = 2;
    const auto u = biot_savart(mesh, targets, fixed_tet_rule(5), opt);
    EXPECT_NEAR(u[0].z, u[1].z, 1e-3);
    EXPECT_NEAR(u[0].x, -u[1].x, 1e-3);
}

TEST(BiotSavart, RejectsInteriorNonVertexTarget) {
    TetMesh mesh = small_lattice();
    const RingSpec ring;
    sample_vorticity(mesh, [&](const Vec3& x) { return ring_vorticity(ring, x); });
    const std::vector<Vec3> targets{{1.01, 0.02, 0.13}};
    EXPECT_THROW(biot_savart(mesh, targets, fixed_tet_rule(3), {}), std::domain_error);
}

TEST(BiotSavart, RejectsUnsampledVorticity) {
    TetMesh mesh = small_lattice();
    mesh.vorticity.clear();
    const std::vector<Vec3> targets{{1.0, 0.0, 0.0}};
    EXPECT_THROW(biot_savart(mesh, targets, fixed_tet_rule(3), {}), std::invalid_argument);
}

TEST(BiotSavart, ThreadCountDoesNotChangeResult) {
    TetMesh mesh = small_lattice();
    const RingSpec ring;
    sample_vorticity(mesh, [&](const Vec3& x) { return ring_vorticity(ring, x); });
    const std::vector<Vec3> targets{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.5}};
    BiotSavartOptions one, four;
    one.threads = 1;
    four.threads = 4;
    const auto a = biot_savart(mesh, targets, fixed_tet_rule(5), one);
    const auto b = biot_savart(mesh, targets, fixed_tet_rule(5), four);
    for (size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].x, b[i].x);
        EXPECT_EQ(a[i].y, b[i].y);
        EXPECT_EQ(a[i].z, b[i].z);
    }
}
