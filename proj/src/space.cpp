#include "curved/space.hpp"

#include <cmath>

namespace curved {

namespace {

// atan2 mapped from (-pi, pi] to [0, 2pi); 0 on the degenerate circle.
double angle_of(double sin_part, double cos_part, double radius) {
    if (radius < degenerate_radius) return 0.0;
    double a = std::atan2(sin_part, cos_part);
    if (a < 0) a += 2 * M_PI;
    if (a >= 2 * M_PI) a = 0;
    return a;
}

} // namespace

std::pair<Vec4, Vec4> project(Space s, const Vec4& q, const Vec4& v) {
    const double qq = inner(s, q, q);
    if (std::abs(qq) < 1e-12)
        throw DegeneratePoint("cannot project: |q.q| < 1e-12");
    if (!s.spherical() && q.z <= 0)
        throw DegeneratePoint("cannot project: z <= 0 on the hyperboloid");
    if (s.sigma * qq <= 0)
        throw DegeneratePoint("cannot project: q.q has the wrong sign");

    Vec4 qp = q * (1.0 / std::sqrt(s.sigma * qq));
    Vec4 vp = v - (s.sigma * inner(s, qp, v)) * qp;
    return {qp, vp};
}

TorusCoords torus_coords(const Vec4& p) {
    const Space s = Space::sphere();
    if (std::abs(inner(s, p, p) - 1.0) > tol_constraint)
        throw OffManifold("torus_coords: point is not on the sphere");
    TorusCoords tc;
    tc.r = std::hypot(p.w, p.x);
    tc.rho = std::hypot(p.y, p.z);
    tc.theta = angle_of(p.x, p.w, tc.r);
    tc.phi = angle_of(p.z, p.y, tc.rho);
    return tc;
}

CylinderCoords cylinder_coords(const Vec4& p) {
    const Space s = Space::hyperbolic();
    if (std::abs(inner(s, p, p) + 1.0) > tol_constraint || p.z <= 0)
        throw OffManifold("cylinder_coords: point is not on the upper hyperboloid sheet");
    CylinderCoords cc;
    cc.r = std::hypot(p.w, p.x);
    cc.rho = std::sqrt(std::max(0.0, p.z * p.z - p.y * p.y));
    cc.theta = angle_of(p.x, p.w, cc.r);
    cc.xi = std::atanh(p.y / p.z);
    return cc;
}

Vec4 torus_point(const TorusCoords& tc) {
    return {tc.r * std::cos(tc.theta), tc.r * std::sin(tc.theta),
            tc.rho * std::cos(tc.phi), tc.rho * std::sin(tc.phi)};
}

Vec4 cylinder_point(const CylinderCoords& cc) {
    return {cc.r * std::cos(cc.theta), cc.r * std::sin(cc.theta),
            cc.rho * std::sinh(cc.xi), cc.rho * std::cosh(cc.xi)};
}

} // namespace curved
