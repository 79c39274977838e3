#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tetquad/vec.hpp"

namespace tetquad {

/// Tetrahedron given by four nodes; by convention node 0 carries the
/// singularity of any integrand attached to it.
struct Tetrahedron {
    std::array<Vec3, 4> nodes;

    double signed_volume() const {
        const Vec3 a = nodes[1] - nodes[0];
        const Vec3 b = nodes[2] - nodes[0];
        const Vec3 c = nodes[3] - nodes[0];
        return dot(a, cross(b, c)) / 6.0;
    }

    double volume() const { return std::abs(signed_volume()); }

    double max_edge() const {
        double m = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) m = std::max(m, norm(nodes[j] - nodes[i]));
        return m;
    }
};

/// Tetrahedron transformed to the reference orientation: the singular
/// vertex at the origin, node 1 on the +x axis, and nodes 2, 3 in the
/// vertical plane of azimuth theta23.  `rotation` is the proper rotation A
/// with x = origin + y A mapping reference coordinates back to the
/// original frame.  If the input orientation would have produced a
/// reflection, labels 2 and 3 are swapped before the construction and
/// `swapped23` is set.
struct ReferenceTet {
    double rho1 = 0.0, rho2 = 0.0, rho3 = 0.0;
    double phi2 = 0.0, phi3 = 0.0;
    double theta23 = 0.0;
    Mat3 rotation;
    Vec3 origin;
    std::array<Vec3, 3> y_nodes;  // y1, y2, y3
    bool swapped23 = false;
};

namespace detail {

inline double polar_angle(const Vec3& v) { return std::atan2(std::hypot(v.x, v.y), v.z); }

inline double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

}  // namespace detail

/// Transform a tetrahedron to the reference orientation and solve for the
/// rotation matrix.
///
/// The construction builds an in-plane frame (s, t, n) on the face 023 from
/// the projection of node 1, the matching primed frame in the reference
/// orientation, transfers nodes 2 and 3 by their in-plane coordinates, and
/// solves [y1;y2;y3] A = [x1';x2';x3'] for A.
inline ReferenceTet to_reference_orientation(const Tetrahedron& tet) {
    const double vol6 = tet.signed_volume() * 6.0;
    const double edge = tet.max_edge();
    if (std::abs(vol6) / 6.0 < 1e-14 * edge * edge * edge)
        throw std::domain_error("to_reference_orientation: degenerate tetrahedron");

    ReferenceTet ref;
    ref.origin = tet.nodes[0];
    ref.swapped23 = vol6 < 0.0;

    const Vec3 x1 = tet.nodes[1] - tet.nodes[0];
    const Vec3 x2 = (ref.swapped23 ? tet.nodes[3] : tet.nodes[2]) - tet.nodes[0];
    const Vec3 x3 = (ref.swapped23 ? tet.nodes[2] : tet.nodes[3]) - tet.nodes[0];

    const double l1 = norm(x1);
    if (l1 < 1e-300) throw std::domain_error("to_reference_orientation: node 1 coincides with node 0");

    // Frame on the plane 023: normal, projection of node 1, in-plane axes.
    const Vec3 nhat = normalized(cross(x3, x2));
    const double d = dot(x1, nhat);  // <= 0 once the orientation is fixed
    const Vec3 p = x1 - nhat * d;
    const double pn = norm(p);
    Vec3 shat;
    if (pn >= 1e-12 * l1) {
        shat = p / pn;
    } else {
        // Edge 01 perpendicular to the plane 023: any in-plane direction
        // will do; take the in-plane part of node 2 for determinism.
        shat = normalized(x2 - nhat * dot(x2, nhat));
    }
    const Vec3 that = cross(nhat, shat);

    const double theta23 = detail::clamped_acos(dot(x1, shat) / l1);
    ref.theta23 = theta23;

    // Primed frame in the reference orientation.  p' = l1 cos(theta23) s',
    // so s' has the closed form below even when p' vanishes.
    const double ct = std::cos(theta23), st = std::sin(theta23);
    const Vec3 sp{ct, st, 0.0};
    const Vec3 tp{0.0, 0.0, -1.0};  // n' x s' for n' = (-st, ct, 0)
    const Vec3 pp = sp * (l1 * ct);

    const Vec3 y1{l1, 0.0, 0.0};
    const Vec3 q2 = x2 - p, q3 = x3 - p;
    const Vec3 y2 = pp + sp * dot(shat, q2) + tp * dot(that, q2);
    const Vec3 y3 = pp + sp * dot(shat, q3) + tp * dot(that, q3);

    ref.y_nodes = {y1, y2, y3};
    ref.rho1 = l1;
    ref.rho2 = norm(y2);
    ref.rho3 = norm(y3);
    ref.phi2 = detail::polar_angle(y2);
    ref.phi3 = detail::polar_angle(y3);

    // A solves [y1;y2;y3] A = [x1';x2';x3'].  Rather than eliminating on
    // the node matrix (ill-conditioned for flat tetrahedra), use that the
    // construction maps the primed frame onto the unprimed one: for row
    // vectors, v A = (v.s')s + (v.t')t + (v.n')n, i.e. A = P'^T P with the
    // frame vectors as rows.  Both frames are right-handed, so A is a
    // proper rotation to rounding regardless of element shape.
    const Vec3 np{-st, ct, 0.0};
    const Mat3 primed = Mat3::from_rows(sp, tp, np);
    const Mat3 unprimed = Mat3::from_rows(shat, that, nhat);
    ref.rotation = primed.transposed() * unprimed;
    return ref;
}

/// Azimuthal extent of the reference tetrahedron, computed with the
/// two-argument arctangent of node 2's coordinates and cross-checked
/// against node 3 and against the edge-to-plane angle of the construction.
/// Throws if the azimuths disagree or fall outside (0, pi) -- which happens
/// when the vertex cone of the tetrahedron wraps more than pi in azimuth, a
/// configuration the spherical sweep cannot parametrize.
inline double theta_extent(const ReferenceTet& ref) {
    const Vec3& y2 = ref.y_nodes[1];
    const Vec3& y3 = ref.y_nodes[2];
    const double r2 = std::hypot(y2.x, y2.y);
    const double r3 = std::hypot(y3.x, y3.y);
    const bool ok2 = r2 > 1e-9 * ref.rho2;
    const bool ok3 = r3 > 1e-9 * ref.rho3;
    if (!ok2 && !ok3)
        throw std::domain_error("theta_extent: nodes 2 and 3 both on the polar axis");

    const double az2 = ok2 ? std::atan2(y2.y, y2.x) : 0.0;
    const double az3 = ok3 ? std::atan2(y3.y, y3.x) : 0.0;
    if (ok2 && ok3 && std::abs(az2 - az3) > 1e-10)
        throw std::domain_error("theta_extent: azimuth mismatch between nodes 2 and 3");

    const double theta = ok2 ? az2 : az3;
    if (!(theta > 0.0 && theta < M_PI))
        throw std::domain_error(
            "theta_extent: azimuthal extent outside (0, pi); tetrahedron not admissible for the "
            "spherical sweep");
    if (std::abs(theta - ref.theta23) > 1e-10)
        throw std::domain_error(
            "theta_extent: azimuth disagrees with the edge-to-plane angle of the construction");
    return theta;
}

/// Integration limits in phi at a fixed azimuth, together with the
/// distances from the origin to the two intersection points.  Ordered so
/// that phi_a < phi_b, with rho_a, rho_b carried along with their angles.
struct PhiLimits {
    double phi_a = 0.0, phi_b = 0.0;
    double rho_a = 0.0, rho_b = 0.0;
};

namespace detail {

struct EdgeIntersection {
    double u, rho, phi;
};

/// Intersection of the constant-theta plane with the edge from node 1 to
/// node i, in the spherical form.
inline EdgeIntersection intersect_edge_spherical(const ReferenceTet& ref, const Vec3& yi,
                                                 double rho_i, double phi_i, double theta) {
    const double ri = std::hypot(yi.x, yi.y);
    if (ri <= 1e-14 * rho_i) {
        // Node i on the polar axis lies in every azimuthal plane.
        return {1.0, rho_i, phi_i};
    }
    const double sin_phi_i = ri / rho_i;
    const double denom =
        ref.rho1 * std::sin(theta) + rho_i * sin_phi_i * std::sin(ref.theta23 - theta);
    const double u = ref.rho1 * std::sin(theta) / denom;
    if (!(u >= -1e-10 && u <= 1.0 + 1e-10))
        throw std::domain_error("phi_limits: interpolation parameter outside [0, 1]; geometry "
                                "inconsistent with the reference orientation");
    const double rho2 = (1.0 - u) * (1.0 - u) * ref.rho1 * ref.rho1 + u * u * rho_i * rho_i +
                        2.0 * u * (1.0 - u) * ref.rho1 * yi.x;
    const double rho = std::sqrt(rho2);
    const double phi = clamped_acos(u * yi.z / rho);
    return {u, rho, phi};
}

/// Same intersection from the Cartesian plane-line formula; used to
/// cross-check the spherical path.
inline EdgeIntersection intersect_edge_cartesian(const ReferenceTet& ref, const Vec3& yi,
                                                 double theta) {
    const Vec3 s{std::sin(theta), -std::cos(theta), 0.0};
    const Vec3& y1 = ref.y_nodes[0];
    const double denom = dot(yi - y1, s);
    if (denom == 0.0) throw std::domain_error("phi_limits: edge parallel to the azimuthal plane");
    const double u = -dot(y1, s) / denom;
    const Vec3 ya = y1 + (yi - y1) * u;
    return {u, norm(ya), polar_angle(ya)};
}

}  // namespace detail

/// Polar-angle limits at azimuth theta, from the intersections of the
/// constant-theta plane with edges 12 and 13.
inline PhiLimits phi_limits(const ReferenceTet& ref, double theta) {
    if (!(theta >= -1e-12 && theta <= ref.theta23 + 1e-12))
        throw std::invalid_argument("phi_limits: theta outside [0, theta23]");

    const auto a = detail::intersect_edge_spherical(ref, ref.y_nodes[1], ref.rho2, ref.phi2, theta);
    const auto b = detail::intersect_edge_spherical(ref, ref.y_nodes[2], ref.rho3, ref.phi3, theta);

#ifndef NDEBUG
    {
        const auto ac = detail::intersect_edge_cartesian(ref, ref.y_nodes[1], theta);
        const auto bc = detail::intersect_edge_cartesian(ref, ref.y_nodes[2], theta);
        const double scale = std::max({ref.rho1, ref.rho2, ref.rho3});
        if (std::abs(ac.rho - a.rho) > 1e-9 * scale || std::abs(ac.phi - a.phi) > 1e-9 ||
            std::abs(bc.rho - b.rho) > 1e-9 * scale || std::abs(bc.phi - b.phi) > 1e-9)
            throw std::domain_error("phi_limits: spherical and Cartesian paths disagree");
    }
#endif

    PhiLimits lim;
    if (a.phi <= b.phi) {
        lim = {a.phi, b.phi, a.rho, b.rho};
    } else {
        lim = {b.phi, a.phi, b.rho, a.rho};
    }
    return lim;
}

/// Cartesian-form variant of phi_limits, kept as an independent route for
/// validation.
inline PhiLimits phi_limits_cartesian(const ReferenceTet& ref, double theta) {
    const auto a = detail::intersect_edge_cartesian(ref, ref.y_nodes[1], theta);
    const auto b = detail::intersect_edge_cartesian(ref, ref.y_nodes[2], theta);
    if (!(a.u >= -1e-10 && a.u <= 1.0 + 1e-10) || !(b.u >= -1e-10 && b.u <= 1.0 + 1e-10))
        throw std::domain_error("phi_limits: interpolation parameter outside [0, 1]");
    if (a.phi <= b.phi) return {a.phi, b.phi, a.rho, b.rho};
    return {b.phi, a.phi, b.rho, a.rho};
}

/// Distance from the origin to the segment AB along the direction with
/// polar angle phi, for phi between the two limits.
inline double rho_limit(const PhiLimits& lim, double phi) {
    const double num = lim.rho_a * lim.rho_b * std::sin(lim.phi_a - lim.phi_b);
    const double den =
        (lim.rho_b * std::cos(lim.phi_b) - lim.rho_a * std::cos(lim.phi_a)) * std::sin(phi) -
        (lim.rho_b * std::sin(lim.phi_b) - lim.rho_a * std::sin(lim.phi_a)) * std::cos(phi);
    const double rho = num / den;
    if (!(std::isfinite(rho) && rho > 0.0))
        throw std::domain_error("rho_limit: degenerate segment or ray parallel to it");
    return rho;
}

/// Split a tetrahedron into four by bisecting the edges of face 123.  Each
/// child keeps node 0 as its singular vertex and the children partition the
/// parent exactly.
inline std::array<Tetrahedron, 4> split_tetrahedron(const Tetrahedron& tet) {
    const Vec3& x0 = tet.nodes[0];
    const Vec3& x1 = tet.nodes[1];
    const Vec3& x2 = tet.nodes[2];
    const Vec3& x3 = tet.nodes[3];
    const Vec3 x4 = (x1 + x2) * 0.5;
    const Vec3 x5 = (x2 + x3) * 0.5;
    const Vec3 x6 = (x1 + x3) * 0.5;
    return {Tetrahedron{{x0, x1, x4, x6}}, Tetrahedron{{x0, x4, x2, x5}},
            Tetrahedron{{x0, x5, x3, x6}}, Tetrahedron{{x0, x4, x5, x6}}};
}

}  // namespace tetquad
