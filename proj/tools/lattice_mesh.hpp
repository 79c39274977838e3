#pragma once

// Structured tetrahedral test meshes for the vortex-ring experiment.  Not
// part of the library: the solver ingests meshes, it does not generate
// them, but the experiments need a reproducible local mesh whose nodes
// contain the evaluation line (1, 0, z).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tetquad/mesh.hpp"

namespace tetquad::tools {

struct LatticeSpec {
    // Box [-2.5, 2.5] x [-2.5, 2.5] x [-1.5, 1.5] as in the ring test.
    double x_half = 2.5, y_half = 2.5, z_half = 1.5;
    // x/y planes: uniform `fine_pitch` inside [-fine_half, fine_half]
    // (chosen so x = 1 and y = 0 are planes), plus `outer` planes per side.
    double fine_half = 2.0;
    double fine_pitch = 1.0 / 12.0;
    int outer = 2;
    // z planes: `line_samples` uniform planes across [-1, 1] -- these are
    // the velocity evaluation line -- plus `outer` planes per side.
    int line_samples = 21;
    // Relative node jitter (fraction of the local plane gap).  Zero keeps
    // the lattice symmetric.  Boundary nodes and the evaluation-line nodes
    // are never moved.
    double jitter = 0.0;
    // Pick each cell's subdivision diagonal pseudo-randomly instead of
    // globally.  Each cell is still partitioned exactly; faces of
    // neighboring cells need not share diagonals, which volume quadrature
    // does not require.  A translation-invariant split makes near-field
    // quadrature errors of neighboring elements cancel pairwise, hiding
    // exactly the effect the ring experiment measures; randomized
    // diagonals behave like the unstructured meshes the experiment is
    // meant for.
    bool random_diagonals = true;
    std::uint64_t jitter_seed = 0x9e3779b97f4a7c15ull;
};

namespace detail_lattice {

inline std::vector<double> graded_planes(double half, double fine_half, double pitch, int outer) {
    const int fine_cells = static_cast<int>(std::lround(2.0 * fine_half / pitch));
    if (std::abs(fine_cells * pitch - 2.0 * fine_half) > 1e-12)
        throw std::invalid_argument("lattice: fine_pitch must divide the fine region");
    std::vector<double> p;
    for (int i = 1; i <= outer; ++i)
        p.push_back(-half + (half - fine_half) * (i - 1) / outer);
    for (int i = 0; i <= fine_cells; ++i) p.push_back(-fine_half + pitch * i);
    for (int i = 1; i <= outer; ++i) p.push_back(fine_half + (half - fine_half) * i / outer);
    return p;
}

inline double hash_unit(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return static_cast<double>(x >> 11) * 0x1.0p-53 - 0.5;  // in [-0.5, 0.5)
}

}  // namespace detail_lattice

/// Tensor lattice of the box, graded toward the ring core, each cell cut
/// into six tetrahedra along the main diagonal (Kuhn subdivision, which is
/// conforming across cells).
inline TetMesh make_ring_lattice(const LatticeSpec& spec) {
    if (spec.line_samples < 2 || spec.outer < 1)
        throw std::invalid_argument("make_ring_lattice: need >= 2 line samples, >= 1 outer plane");
    const auto xs = detail_lattice::graded_planes(spec.x_half, spec.fine_half, spec.fine_pitch,
                                                  spec.outer);
    const auto ys = detail_lattice::graded_planes(spec.y_half, spec.fine_half, spec.fine_pitch,
                                                  spec.outer);
    std::vector<double> zs;
    for (int i = 1; i <= spec.outer; ++i)
        zs.push_back(-spec.z_half + (spec.z_half - 1.0) * (i - 1) / spec.outer);
    for (int i = 0; i < spec.line_samples; ++i)
        zs.push_back(-1.0 + 2.0 * i / (spec.line_samples - 1));
    for (int i = 1; i <= spec.outer; ++i)
        zs.push_back(1.0 + (spec.z_half - 1.0) * i / spec.outer);

    const int nx = static_cast<int>(xs.size());
    const int ny = static_cast<int>(ys.size());
    const int nz = static_cast<int>(zs.size());

    TetMesh mesh;
    mesh.nodes.reserve(static_cast<size_t>(nx) * ny * nz);
    const auto gap = [](const std::vector<double>& p, int i) {
        double g = 1e300;
        if (i > 0) g = std::min(g, p[static_cast<size_t>(i)] - p[static_cast<size_t>(i) - 1]);
        if (i + 1 < static_cast<int>(p.size()))
            g = std::min(g, p[static_cast<size_t>(i) + 1] - p[static_cast<size_t>(i)]);
        return g;
    };
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                Vec3 p{xs[static_cast<size_t>(i)], ys[static_cast<size_t>(j)],
                       zs[static_cast<size_t>(k)]};
                const bool boundary = i == 0 || i == nx - 1 || j == 0 || j == ny - 1 || k == 0 ||
                                      k == nz - 1;
                const bool on_line = std::abs(p.x - 1.0) < 1e-12 && std::abs(p.y) < 1e-12 &&
                                     p.z > -1.0 - 1e-12 && p.z < 1.0 + 1e-12;
                if (spec.jitter > 0.0 && !boundary && !on_line) {
                    const std::uint64_t base =
                        spec.jitter_seed + 3 * (static_cast<std::uint64_t>((k * ny + j) * nx + i));
                    p.x += spec.jitter * gap(xs, i) * detail_lattice::hash_unit(base);
                    p.y += spec.jitter * gap(ys, j) * detail_lattice::hash_unit(base + 1);
                    p.z += spec.jitter * gap(zs, k) * detail_lattice::hash_unit(base + 2);
                }
                mesh.nodes.push_back(p);
            }

    const auto id = [&](int i, int j, int k) { return (k * ny + j) * nx + i; };
    // Kuhn subdivision: six tets per cell around a main diagonal, the six
    // axis orders forming the paths from one diagonal end to the other.
    static const int kAxisPerms[6][3] = {{1, 2, 4}, {1, 4, 2}, {2, 1, 4},
                                         {2, 4, 1}, {4, 1, 2}, {4, 2, 1}};
    mesh.tets.reserve(static_cast<size_t>(nx - 1) * (ny - 1) * (nz - 1) * 6);
    for (int k = 0; k + 1 < nz; ++k)
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                int corner[8];
                for (int c = 0; c < 8; ++c)
                    corner[c] = id(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                // Mirrored cells get z-flipped diagonal ends, which makes
                // the subdivision (and so the whole unjittered mesh)
                // exactly symmetric under z -> -z.
                const int n_cell_z = nz - 1;
                const int k_canon = std::min(k, n_cell_z - 1 - k);
                int diag_end = 0;
                if (spec.random_diagonals) {
                    const std::uint64_t cell =
                        static_cast<std::uint64_t>((k_canon * ny + j) * nx + i);
                    static const int kEnds[4] = {0, 1, 2, 4};
                    diag_end = kEnds[static_cast<int>(
                        (detail_lattice::hash_unit(spec.jitter_seed ^ (cell * 2654435761ull)) +
                         0.5) *
                        4.0) % 4];
                }
                if (k > n_cell_z - 1 - k) diag_end ^= 4;
                for (const auto& perm : kAxisPerms) {
                    std::array<int, 4> conn = {
                        corner[diag_end], corner[diag_end ^ perm[0]],
                        corner[diag_end ^ perm[0] ^ perm[1]], corner[diag_end ^ 7]};
                    Tetrahedron tet{{mesh.nodes[static_cast<size_t>(conn[0])],
                                     mesh.nodes[static_cast<size_t>(conn[1])],
                                     mesh.nodes[static_cast<size_t>(conn[2])],
                                     mesh.nodes[static_cast<size_t>(conn[3])]}};
                    if (tet.signed_volume() < 0.0) std::swap(conn[2], conn[3]);
                    const double e = tet.max_edge();
                    if (tet.volume() < 1e-6 * e * e * e)
                        throw std::runtime_error(
                            "make_ring_lattice: jitter produced a near-degenerate element; "
                            "reduce it");
                    mesh.tets.push_back(conn);
                }
            }
    mesh.vorticity.assign(mesh.nodes.size(), Vec3{});
    return mesh;
}

/// Node indices of the evaluation line (1, 0, z), z in [-1, 1], in
/// ascending z.
inline std::vector<int> lattice_line_nodes(const TetMesh& mesh, double tol = 1e-12) {
    std::vector<std::pair<double, int>> found;
    for (int i = 0; i < static_cast<int>(mesh.nodes.size()); ++i) {
        const Vec3& p = mesh.nodes[static_cast<size_t>(i)];
        if (std::abs(p.x - 1.0) <= tol && std::abs(p.y) <= tol && p.z >= -1.0 - tol &&
            p.z <= 1.0 + tol)
            found.emplace_back(p.z, i);
    }
    std::sort(found.begin(), found.end());
    std::vector<int> out;
    out.reserve(found.size());
    for (auto& [z, i] : found) out.push_back(i);
    return out;
}

/// Write the mesh in tetgen .node/.ele convention (1-based ids).
inline void write_tetgen(const TetMesh& mesh, const std::string& prefix) {
    {
        std::FILE* f = std::fopen((prefix + ".node").c_str(), "w");
        if (!f) throw std::runtime_error("cannot write " + prefix + ".node");
        std::fprintf(f, "%zu 3 0 0\n", mesh.nodes.size());
        for (size_t i = 0; i < mesh.nodes.size(); ++i)
            std::fprintf(f, "%zu %.17g %.17g %.17g\n", i + 1, mesh.nodes[i].x, mesh.nodes[i].y,
                         mesh.nodes[i].z);
        std::fclose(f);
    }
    {
        std::FILE* f = std::fopen((prefix + ".ele").c_str(), "w");
        if (!f) throw std::runtime_error("cannot write " + prefix + ".ele");
        std::fprintf(f, "%zu 4 0\n", mesh.tets.size());
        for (size_t t = 0; t < mesh.tets.size(); ++t)
            std::fprintf(f, "%zu %d %d %d %d\n", t + 1, mesh.tets[t][0] + 1, mesh.tets[t][1] + 1,
                         mesh.tets[t][2] + 1, mesh.tets[t][3] + 1);
        std::fclose(f);
    }
}

}  // namespace tetquad::tools
