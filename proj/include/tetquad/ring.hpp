#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "tetquad/rules.hpp"
#include "tetquad/vec.hpp"

namespace tetquad {

/// Gaussian-core vortex ring of unit radius: the azimuthal vorticity is
/// omega_theta = exp(-((r-1)^2 + z^2) / sigma^2).
struct RingSpec {
    double sigma = 0.3;
};

inline double ring_omega_theta(const RingSpec& spec, double r, double z) {
    const double dr = r - 1.0;
    return std::exp(-(dr * dr + z * z) / (spec.sigma * spec.sigma));
}

/// Cartesian embedding omega = (-omega_theta sin(theta), omega_theta cos(theta), 0).
inline Vec3 ring_vorticity(const RingSpec& spec, const Vec3& x) {
    const double r = std::hypot(x.x, x.y);
    const double theta = std::atan2(x.y, x.x);
    const double w = ring_omega_theta(spec, r, x.z);
    return {-w * std::sin(theta), w * std::cos(theta), 0.0};
}

struct EllipticKE {
    double K = 0.0;
    double E = 0.0;
};

namespace detail {

struct AgmSums {
    double K = 0.0;
    double tail = 0.0;  // sum over n >= 1 of 2^n c_n^2
};

/// Arithmetic-geometric-mean iteration, driven by the complementary
/// modulus so that moduli near 1 keep full precision.  With a_0 = 1,
/// b_0 = kp and c_m = (a_{m-1} - b_{m-1})/2, returns K = pi/(2 a_inf) and
/// the sum over m >= 1 of 2^m c_m^2.
inline AgmSums agm_iteration(double kp) {
    double a = 1.0, b = kp;
    double tail = 0.0, pow2 = 2.0;
    for (int m = 1; m <= 60; ++m) {
        const double c = 0.5 * (a - b);
        tail += pow2 * c * c;
        if (std::abs(c) <= 1e-17 * a) break;
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
    }
    return {M_PI / (2.0 * a), tail};
}

}  // namespace detail

/// Complete elliptic integrals of the first and second kind in the
/// modulus convention, K(k) = int_0^{pi/2} (1 - k^2 sin^2 t)^{-1/2} dt,
/// converged to machine precision by the AGM iteration.  K diverges
/// logarithmically at k = 1, so the pair is only defined for k < 1.
inline EllipticKE elliptic_ke(double kappa) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("elliptic_ke: modulus must be >= 0");
    if (!(kappa < 1.0))
        throw std::domain_error("elliptic_ke: K diverges for modulus >= 1");
    const double kp = std::sqrt((1.0 - kappa) * (1.0 + kappa));
    const auto agm = detail::agm_iteration(kp);
    const double sum = 0.5 * (kappa * kappa + agm.tail);  // sum 2^(n-1) c_n^2
    return {agm.K, agm.K * (1.0 - sum)};
}

/// E alone remains finite on the whole closed interval [0, 1].
inline double elliptic_e(double kappa) {
    if (!(kappa >= 0.0 && kappa <= 1.0))
        throw std::invalid_argument("elliptic_e: modulus must be in [0, 1]");
    if (kappa == 1.0) return 1.0;
    return elliptic_ke(kappa).E;
}

namespace detail {

/// Stream-function kernel of an axisymmetric vortex filament:
///   G = sqrt(r r1)/(2 pi) [ (2/kappa - kappa) K - (2/kappa) E ].
/// Rewritten through the AGM sums as sqrt(r r1) K T / (2 pi kappa) with
/// T = sum_{n>=1} 2^n c_n^2, which is stable at both kappa -> 0 (no
/// cancellation in the bracket) and kappa -> 1 (complementary modulus
/// computed directly from the geometry).
inline double ring_psi_kernel(double r, double z, double r1, double z1) {
    const double dz = z - z1;
    const double sum_r = r + r1;
    const double diff_r = r - r1;
    const double denom = dz * dz + sum_r * sum_r;
    const double kappa2 = 4.0 * r * r1 / denom;
    if (kappa2 <= 0.0) return 0.0;
    const double kp = std::sqrt((dz * dz + diff_r * diff_r) / denom);
    const auto agm = agm_iteration(kp);
    const double kappa = std::sqrt(kappa2);
    return std::sqrt(r * r1) * agm.K * agm.tail / (2.0 * M_PI * kappa);
}

/// 1-D partition of [lo, hi]: a uniform base refined geometrically toward
/// `center` (when it lies inside), halting at min_cell.  The returned
/// points are strictly increasing and include both ends.
inline std::vector<double> graded_partition(double lo, double hi, double center, double min_cell,
                                            int base_cells) {
    std::vector<double> pts;
    for (int i = 0; i <= base_cells; ++i)
        pts.push_back(lo + (hi - lo) * static_cast<double>(i) / base_cells);
    if (center > lo + min_cell && center < hi - min_cell) {
        pts.push_back(center);
        for (double d = 0.5 * (center - lo); d > min_cell; d *= 0.5) pts.push_back(center - d);
        for (double d = 0.5 * (hi - center); d > min_cell; d *= 0.5) pts.push_back(center + d);
    }
    std::sort(pts.begin(), pts.end());
    // Merge near-coincident points so no cell degenerates.
    std::vector<double> out;
    out.push_back(pts.front());
    for (double p : pts)
        if (p - out.back() > 0.25 * min_cell) out.push_back(p);
    return out;
}

}  // namespace detail

/// Quadrature controls for the axisymmetric reference solution.
struct RingReferenceOptions {
    int panel_order = 12;       // Gauss-Legendre points per panel and direction
    int base_cells = 6;         // uniform panels per direction before grading
    double min_cell_rel = 1e-13;  // grading floor relative to the window span
    double window_sigmas = 6.0;   // half-width of the support window in sigmas
    double fd_step = 1e-4;        // finite-difference step for the velocities
};

/// Stokes stream function of the Gaussian ring at (r, z), by composite
/// tensor Gauss-Legendre over the vorticity support window.  The kernel is
/// log-singular where (r1, z1) meets the evaluation point, so the panel
/// partition is graded geometrically toward it in both directions.
inline double ring_stream_function(const RingSpec& spec, double r, double z,
                                   const RingReferenceOptions& opt = {}) {
    if (!(r > 0.0)) throw std::invalid_argument("ring_stream_function: r must be positive");
    const double w = opt.window_sigmas * spec.sigma;
    const double r_lo = std::max(0.0, 1.0 - w), r_hi = 1.0 + w;
    const double z_lo = -w, z_hi = w;
    const double min_cell = opt.min_cell_rel * 2.0 * w;

    const auto rp = detail::graded_partition(r_lo, r_hi, r, min_cell, opt.base_cells);
    const auto zp = detail::graded_partition(z_lo, z_hi, z, min_cell, opt.base_cells);
    const QuadratureRule1D gl = gauss_legendre(opt.panel_order);

    double psi = 0.0;
    std::vector<double> rn(gl.nodes.size()), rw(gl.nodes.size());
    std::vector<double> zn(gl.nodes.size()), zw(gl.nodes.size());
    for (size_t ir = 0; ir + 1 < rp.size(); ++ir) {
        const double rm = 0.5 * (rp[ir] + rp[ir + 1]), rh = 0.5 * (rp[ir + 1] - rp[ir]);
        for (size_t q = 0; q < gl.nodes.size(); ++q) {
            rn[q] = rm + rh * gl.nodes[q];
            rw[q] = rh * gl.weights[q];
        }
        for (size_t iz = 0; iz + 1 < zp.size(); ++iz) {
            const double zm = 0.5 * (zp[iz] + zp[iz + 1]), zh = 0.5 * (zp[iz + 1] - zp[iz]);
            for (size_t q = 0; q < gl.nodes.size(); ++q) {
                zn[q] = zm + zh * gl.nodes[q];
                zw[q] = zh * gl.weights[q];
            }
            double cell = 0.0;
            for (size_t a = 0; a < rn.size(); ++a) {
                double inner = 0.0;
                for (size_t b = 0; b < zn.size(); ++b)
                    inner += zw[b] * ring_omega_theta(spec, rn[a], zn[b]) *
                             detail::ring_psi_kernel(r, z, rn[a], zn[b]);
                cell += rw[a] * inner;
            }
            psi += cell;
        }
    }
    return psi;
}

struct RingVelocity {
    double u_r = 0.0;
    double u_z = 0.0;
};

/// Radial and axial velocity of the ring at (r, z):
///   u_r = -(1/r) dpsi/dz,  u_z = (1/r) dpsi/dr,
/// by central differences of the stream function with one level of
/// Richardson extrapolation.
inline RingVelocity ring_reference_velocity(const RingSpec& spec, double r, double z,
                                            const RingReferenceOptions& opt = {}) {
    if (!(r > 0.0)) throw std::invalid_argument("ring_reference_velocity: r must be positive");
    const double h = opt.fd_step;
    const auto psi = [&](double rr, double zz) { return ring_stream_function(spec, rr, zz, opt); };
    const auto richardson = [&](auto&& diff) {
        const double d1 = diff(h);
        const double d2 = diff(0.5 * h);
        return (4.0 * d2 - d1) / 3.0;
    };
    const double dpsi_dz =
        richardson([&](double s) { return (psi(r, z + s) - psi(r, z - s)) / (2.0 * s); });
    const double dpsi_dr =
        richardson([&](double s) { return (psi(r + s, z) - psi(r - s, z)) / (2.0 * s); });
    return {-dpsi_dz / r, dpsi_dr / r};
}

/// Normalized maximum deviation between a computed and a reference axial
/// velocity profile sampled on the same line.
inline double ring_error_metric(std::span<const double> computed,
                                std::span<const double> reference) {
    if (computed.empty() || computed.size() != reference.size())
        throw std::invalid_argument("ring_error_metric: need matching non-empty samples");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < computed.size(); ++i) {
        num = std::max(num, std::abs(computed[i] - reference[i]));
        den = std::max(den, std::abs(reference[i]));
    }
    if (den == 0.0) throw std::invalid_argument("ring_error_metric: reference is identically zero");
    return num / den;
}

}  // namespace tetquad
