#pragma once

// Experiment drivers shared by the CLI and the acceptance suite: the test
// geometry families, the batched monomial integrand, and the ring
// experiment pipeline.

#include <array>
#include <cstddef>
#include <vector>

#include "tetquad/detail/parallel.hpp"
#include "tetquad/tetquad.hpp"

namespace tetquad::tools {

/// Varying-height family: singular vertex above a fixed unit base.
inline Tetrahedron height_case(double h) {
    return {{Vec3{0, 0, h}, Vec3{0, 0, 0}, Vec3{0, 1, 0}, Vec3{1, 1, 0}}};
}

/// Varying base vertex angle at fixed edge lengths, singular point (0,0,0.1).
inline Tetrahedron angle_case(double theta) {
    return {{Vec3{0, 0, 0.1}, Vec3{0, 0, 0}, Vec3{0, 1, 0},
             Vec3{std::sin(theta), 1.0 - std::cos(theta), 0}}};
}

/// Varying base aspect ratio, singular point (0,0,0.1).
inline Tetrahedron aspect_case(double a) {
    return {{Vec3{0, 0, 0.1}, Vec3{0, 0, 0}, Vec3{0, 1, 0}, Vec3{a, 1, 0}}};
}

/// Geometry of the adaptive sweep: height varies, base fixed at (2,1,0).
inline Tetrahedron adaptive_case(double h) {
    return {{Vec3{0, 0, h}, Vec3{0, 0, 0}, Vec3{0, 1, 0}, Vec3{2, 1, 0}}};
}

constexpr std::size_t monomial_count(int n_max) {
    std::size_t c = 0;
    for (int i = 0; i <= n_max; ++i)
        for (int j = 0; i + j <= n_max; ++j)
            for (int k = 0; i + j + k <= n_max; ++k) ++c;
    return c;
}

/// All monomials x^i y^j z^k with i+j+k <= NMax, evaluated in one pass so
/// an adaptive run converges the whole family simultaneously (max norm).
template <int NMax>
struct MonomialBatch {
    static constexpr std::size_t kCount = monomial_count(NMax);

    std::array<double, kCount> operator()(const Vec3& p) const {
        std::array<double, NMax + 1> px, py, pz;
        px[0] = py[0] = pz[0] = 1.0;
        for (int t = 1; t <= NMax; ++t) {
            px[static_cast<size_t>(t)] = px[static_cast<size_t>(t) - 1] * p.x;
            py[static_cast<size_t>(t)] = py[static_cast<size_t>(t) - 1] * p.y;
            pz[static_cast<size_t>(t)] = pz[static_cast<size_t>(t) - 1] * p.z;
        }
        std::array<double, kCount> out;
        std::size_t idx = 0;
        for (int i = 0; i <= NMax; ++i)
            for (int j = 0; i + j <= NMax; ++j)
                for (int k = 0; i + j + k <= NMax; ++k)
                    out[idx++] = px[static_cast<size_t>(i)] * py[static_cast<size_t>(j)] *
                                 pz[static_cast<size_t>(k)];
        return out;
    }
};

/// Duffy-oracle values for the same batched family.
template <int NMax>
std::array<double, MonomialBatch<NMax>::kCount> duffy_monomial_batch(const Tetrahedron& tet,
                                                                     double alpha, int order) {
    std::array<double, MonomialBatch<NMax>::kCount> out;
    std::size_t idx = 0;
    for (int i = 0; i <= NMax; ++i)
        for (int j = 0; i + j <= NMax; ++j)
            for (int k = 0; i + j + k <= NMax; ++k)
                out[idx++] = duffy_reference(tet, MonomialIntegrand{i, j, k}, alpha, order);
    return out;
}

/// Reference axial/radial ring velocities at (1, 0, z) for each sample,
/// evaluated in parallel.
inline std::vector<RingVelocity> ring_reference_profile(const RingSpec& spec,
                                                        const std::vector<double>& zs, int threads,
                                                        const RingReferenceOptions& opt = {}) {
    std::vector<RingVelocity> out(zs.size());
    detail::run_chunked(static_cast<int>(zs.size()), threads, [&](int i) {
        out[static_cast<size_t>(i)] =
            ring_reference_velocity(spec, 1.0, zs[static_cast<size_t>(i)], opt);
    });
    return out;
}

}  // namespace tetquad::tools
