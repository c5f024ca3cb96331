#ifndef CURVED_SPACE_HPP
#define CURVED_SPACE_HPP

#include <utility>

#include "curved/errors.hpp"
#include "curved/vec4.hpp"

namespace curved {

/// Admissibility tolerance for on-manifold and tangency checks. One order
/// above integrator tolerance, so projection hides roundoff only.
inline constexpr double tol_constraint = 1e-9;

/// Radii below this are treated as degenerate; angles on the degenerate
/// circle are reported as 0.
inline constexpr double degenerate_radius = 1e-9;

/// Curvature-sign selector. sigma = +1 is the unit 3-sphere
/// {w^2+x^2+y^2+z^2 = 1} with the Euclidean inner product; sigma = -1 is the
/// upper hyperboloid sheet {w^2+x^2+y^2-z^2 = -1, z >= 1} with the Lorentz
/// inner product of signature (+,+,+,-).
struct Space {
    int sigma = +1;

    static constexpr Space sphere() { return Space{+1}; }
    static constexpr Space hyperbolic() { return Space{-1}; }
    constexpr bool spherical() const { return sigma > 0; }
};

constexpr bool operator==(Space a, Space b) { return a.sigma == b.sigma; }

/// Inner product of the ambient space: p.w q.w + p.x q.x + p.y q.y
/// + sigma p.z q.z.
inline double inner(Space s, const Vec4& p, const Vec4& q) {
    return p.w * q.w + p.x * q.x + p.y * q.y + s.sigma * (p.z * q.z);
}

/// Residuals of the two pointwise constraints: (q.q - sigma, q.qdot).
/// Both vanish for admissible states.
inline std::pair<double, double> constraint_residuals(Space s, const Vec4& q, const Vec4& v) {
    return {inner(s, q, q) - s.sigma, inner(s, q, v)};
}

/// Rescale the position so q.q = sigma exactly and replace the velocity by
/// its tangential part v - sigma (q.v) q. Used for drift control after
/// integration steps. Throws DegeneratePoint for points too close to the
/// origin / null cone, or on the lower sheet (sigma = -1, z <= 0).
std::pair<Vec4, Vec4> project(Space s, const Vec4& q, const Vec4& v);

/// Coordinates of the canonical torus foliation of the sphere:
/// (w, x) = r (cos theta, sin theta), (y, z) = rho (cos phi, sin phi),
/// r^2 + rho^2 = 1. Angles lie in [0, 2pi).
struct TorusCoords {
    double r = 0, theta = 0, rho = 0, phi = 0;
};

/// Coordinates of the canonical cylinder foliation of the hyperboloid:
/// (w, x) = r (cos theta, sin theta), (y, z) = rho (sinh xi, cosh xi),
/// r^2 - rho^2 = -1, rho >= 1.
struct CylinderCoords {
    double r = 0, theta = 0, rho = 0, xi = 0;
};

/// Foliation coordinates of an on-sphere point. Throws OffManifold when the
/// constraint residual exceeds tol_constraint.
TorusCoords torus_coords(const Vec4& p);

/// Foliation coordinates of an on-hyperboloid point.
CylinderCoords cylinder_coords(const Vec4& p);

Vec4 torus_point(const TorusCoords& tc);
Vec4 cylinder_point(const CylinderCoords& cc);

} // namespace curved

#endif
