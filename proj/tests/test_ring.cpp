#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "tetquad/ring.hpp"

using namespace tetquad;

TEST(Elliptic, ZeroModulus) {
    const auto ke = elliptic_ke(0.0);
    EXPECT_NEAR(ke.K, M_PI_2, 1e-15);
    EXPECT_NEAR(ke.E, M_PI_2, 1e-15);
}

TEST(Elliptic, UnitModulus) {
    EXPECT_DOUBLE_EQ(elliptic_e(1.0), 1.0);
    EXPECT_THROW(elliptic_ke(1.0), std::domain_error);
    EXPECT_THROW(elliptic_ke(1.5), std::domain_error);
    EXPECT_THROW(elliptic_ke(-0.1), std::invalid_argument);
}

TEST(Elliptic, MatchesSeriesOracle) {
    for (double k = 0.1; k < 0.95; k += 0.1) {
        const auto ke = elliptic_ke(k);
        const auto gold = testsupport::elliptic_series(k);
        EXPECT_NEAR(ke.K, gold.K, 1e-12 * gold.K) << "k=" << k;
        EXPECT_NEAR(ke.E, gold.E, 1e-12 * gold.E) << "k=" << k;
    }
}

TEST(Elliptic, LegendreRelation) {
    for (double k = 0.1; k < 0.95; k += 0.1) {
        const double kp = std::sqrt(1.0 - k * k);
        const auto ke = elliptic_ke(k);
        const auto kec = elliptic_ke(kp);
        const double rel = ke.E * kec.K + kec.E * ke.K - ke.K * kec.K;
        EXPECT_NEAR(rel, M_PI_2, 1e-12) << "k=" << k;
    }
}

TEST(RingVorticity, CartesianEmbedding) {
    const RingSpec spec;
    const Vec3 w = ring_vorticity(spec, {0.0, 1.0, 0.0});  // theta = pi/2 on the core line
    EXPECT_NEAR(w.x, -1.0, 1e-15);
    EXPECT_NEAR(w.y, 0.0, 1e-15);
    EXPECT_NEAR(w.z, 0.0, 1e-15);
    EXPECT_NEAR(ring_omega_theta(spec, 1.0, 0.3), std::exp(-1.0), 1e-15);
}

TEST(RingReference, RadialVelocityVanishesOnSymmetryPlane) {
    const RingSpec spec;
    for (double r : {0.6, 1.0, 1.5}) {
        const auto v = ring_reference_velocity(spec, r, 0.0);
        EXPECT_LT(std::abs(v.u_r), 1e-10) << "r=" << r;
    }
}

TEST(RingReference, SelfInductionIsPositive) {
    const RingSpec spec;
    EXPECT_GT(ring_reference_velocity(spec, 1.0, 0.0).u_z, 0.0);
}

TEST(RingReference, SelfConvergenceOfGoldValue) {
    const RingSpec spec;
    const auto a = ring_reference_velocity(spec, 1.0, 0.0);
    RingReferenceOptions finer;
    finer.panel_order = 14;
    finer.base_cells = 8;
    finer.min_cell_rel = 1e-14;
    finer.window_sigmas = 7.0;
    finer.fd_step = 0.5e-4;
    const auto b = ring_reference_velocity(spec, 1.0, 0.0, finer);
    EXPECT_NEAR(a.u_z, b.u_z, 1e-8);
    EXPECT_NEAR(a.u_r, b.u_r, 1e-8);
}

TEST(RingReference, MirrorSymmetry) {
    const RingSpec spec;
    const auto up = ring_reference_velocity(spec, 1.0, 0.4);
    const auto dn = ring_reference_velocity(spec, 1.0, -0.4);
    EXPECT_NEAR(up.u_z, dn.u_z, 1e-10);
    EXPECT_NEAR(up.u_r, -dn.u_r, 1e-10);
}

TEST(RingReference, RejectsNonPositiveRadius) {
    const RingSpec spec;
    EXPECT_THROW(ring_stream_function(spec, 0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(ring_reference_velocity(spec, -1.0, 0.0), std::invalid_argument);
}

TEST(RingErrorMetric, Definition) {
    const std::vector<double> ref{0.1, -0.4, 0.2};
    EXPECT_EQ(ring_error_metric(ref, ref), 0.0);
    std::vector<double> shifted{0.1 + 0.05, -0.4 + 0.05, 0.2 + 0.05};
    EXPECT_NEAR(ring_error_metric(shifted, ref), 0.05 / 0.4, 1e-15);
    EXPECT_THROW(ring_error_metric({}, {}), std::invalid_argument);
    EXPECT_THROW(ring_error_metric(shifted, {ref.data(), 2}), std::invalid_argument);
}
