#include "curved/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace curved {

Configuration make_configuration(Space space, std::vector<double> masses,
                                 std::vector<Vec4> positions,
                                 std::vector<Vec4> velocities) {
    const size_t n = masses.size();
    if (n == 0) throw std::invalid_argument("configuration needs at least one body");
    if (positions.size() != n || velocities.size() != n)
        throw std::invalid_argument("masses/positions/velocities size mismatch");
    for (double m : masses)
        if (!(m > 0)) throw std::invalid_argument("masses must be positive");
    for (size_t i = 0; i < n; ++i) {
        auto [cm, ct] = constraint_residuals(space, positions[i], velocities[i]);
        if (std::abs(cm) > tol_constraint || std::abs(ct) > tol_constraint)
            throw OffManifold("body " + std::to_string(i) + " violates the constraints");
        if (!space.spherical() && positions[i].z < 1.0 - tol_constraint)
            throw OffManifold("body " + std::to_string(i) + " is not on the upper sheet");
    }
    return Configuration{space, std::move(masses), std::move(positions), std::move(velocities)};
}

double max_constraint_residual(const Configuration& c) {
    double worst = 0;
    for (int i = 0; i < c.count(); ++i) {
        auto [cm, ct] = constraint_residuals(c.space, c.positions[i], c.velocities[i]);
        worst = std::max({worst, std::abs(cm), std::abs(ct)});
    }
    return worst;
}

PairGram pair_gram(const Configuration& c) {
    const int n = c.count();
    PairGram g;
    g.n = n;
    g.q.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        g.q[static_cast<size_t>(i) * n + i] = c.space.sigma;
        for (int j = i + 1; j < n; ++j) {
            const double qij = inner(c.space, c.positions[i], c.positions[j]);
            g.q[static_cast<size_t>(i) * n + j] = qij;
            g.q[static_cast<size_t>(j) * n + i] = qij;
        }
    }
    return g;
}

namespace {

// (sigma - sigma q^2); the singularity guard quantity.
inline double pair_gap(int sigma, double qij) { return sigma * (1.0 - qij * qij); }

} // namespace

std::vector<Vec4> acceleration(const Configuration& c) {
    const int n = c.count();
    const int sigma = c.space.sigma;
    const PairGram g = pair_gram(c);

    std::vector<Vec4> acc(n);
    for (int i = 0; i < n; ++i) {
        Vec4 f{};
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double qij = g(i, j);
            const double gap = pair_gap(sigma, qij);
            if (gap < sing_eps) throw SingularPair(i, j, qij);
            const double inv = c.masses[j] / (gap * std::sqrt(gap));
            f += inv * (c.positions[j] - (sigma * qij) * c.positions[i]);
        }
        // Constraint-consistent multiplier: equals sigma (qdot.qdot) on the
        // manifold, and keeps q.q exactly invariant for the slightly
        // off-manifold states an integrator visits between projections (the
        // naive extension lets constraint error grow exponentially through
        // close passages).
        const double vv = inner(c.space, c.velocities[i], c.velocities[i]);
        const double qq = inner(c.space, c.positions[i], c.positions[i]);
        const double qf = inner(c.space, c.positions[i], f);
        acc[i] = f - ((vv + qf) / qq) * c.positions[i];
    }
    return acc;
}

double force_function(const Configuration& c) {
    const int n = c.count();
    const int sigma = c.space.sigma;
    const PairGram g = pair_gram(c);
    KahanSum u;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double qij = g(i, j);
            const double gap = pair_gap(sigma, qij);
            if (gap < sing_eps) throw SingularPair(i, j, qij);
            u.add(sigma * c.masses[i] * c.masses[j] * qij / std::sqrt(gap));
        }
    return u.value();
}

double kinetic_energy(const Configuration& c) {
    KahanSum t;
    for (int i = 0; i < c.count(); ++i) {
        const double vv = inner(c.space, c.velocities[i], c.velocities[i]);
        const double qq = inner(c.space, c.positions[i], c.positions[i]);
        t.add(0.5 * c.masses[i] * vv * (c.space.sigma * qq));
    }
    return t.value();
}

double Integrals::operator[](int k) const {
    switch (k) {
        case 0: return h;
        case 1: return c_wx;
        case 2: return c_wy;
        case 3: return c_wz;
        case 4: return c_xy;
        case 5: return c_xz;
        default: return c_yz;
    }
}

Integrals integrals(const Configuration& c) {
    Integrals out;
    out.h = kinetic_energy(c) - force_function(c);
    KahanSum wx, wy, wz, xy, xz, yz;
    for (int i = 0; i < c.count(); ++i) {
        const double m = c.masses[i];
        const Vec4& q = c.positions[i];
        const Vec4& v = c.velocities[i];
        wx.add(m * (q.w * v.x - v.w * q.x));
        wy.add(m * (q.w * v.y - v.w * q.y));
        wz.add(m * (q.w * v.z - v.w * q.z));
        xy.add(m * (q.x * v.y - v.x * q.y));
        xz.add(m * (q.x * v.z - v.x * q.z));
        yz.add(m * (q.y * v.z - v.y * q.z));
    }
    out.c_wx = wx.value();
    out.c_wy = wy.value();
    out.c_wz = wz.value();
    out.c_xy = xy.value();
    out.c_xz = xz.value();
    out.c_yz = yz.value();
    return out;
}

} // namespace curved
