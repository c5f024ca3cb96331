#ifndef CURVED_DYNAMICS_HPP
#define CURVED_DYNAMICS_HPP

#include <vector>

#include "curved/space.hpp"

namespace curved {

/// Collision/antipodal guard: a pair (i, j) is singular when
/// sigma - sigma q_ij^2 < sing_eps, i.e. 1 - q_ij^2 on the sphere and
/// q_ij^2 - 1 on the hyperboloid. Integration fails loudly near such pairs.
inline constexpr double sing_eps = 1e-12;

/// Full phase-space state of the N-body system: masses, positions on the
/// manifold and tangent velocities. Aggregate construction does not
/// validate; use make_configuration for checked inputs.
struct Configuration {
    Space space;
    std::vector<double> masses;
    std::vector<Vec4> positions;
    std::vector<Vec4> velocities;

    int count() const { return static_cast<int>(masses.size()); }
};

/// Checked constructor: positive masses, matching sizes, constraint
/// residuals within tol_constraint, z >= 1 on the hyperboloid.
/// Throws std::invalid_argument / OffManifold.
Configuration make_configuration(Space space, std::vector<double> masses,
                                 std::vector<Vec4> positions,
                                 std::vector<Vec4> velocities);

/// Largest constraint violation over all bodies (manifold and tangency).
double max_constraint_residual(const Configuration& c);

/// Symmetric matrix of pairwise inner products q_ij = q_i . q_j under the
/// space's form; the diagonal is sigma by construction.
struct PairGram {
    int n = 0;
    std::vector<double> q; // row-major n*n

    double operator()(int i, int j) const { return q[static_cast<size_t>(i) * n + j]; }
};

PairGram pair_gram(const Configuration& c);

/// Right-hand side of the second-order equations of motion:
///   qddot_i = sum_j m_j (q_j - sigma q_ij q_i) / (sigma - sigma q_ij^2)^{3/2}
///             - sigma (qdot_i . qdot_i) q_i.
/// Throws SingularPair when the guard fails for some pair.
std::vector<Vec4> acceleration(const Configuration& c);

/// Force function U (minus the potential); cotangent of distance written in
/// the algebraic variables:
///   U = sum_{i<j} sigma m_i m_j q_ij / (sigma - sigma q_ij^2)^{1/2}.
/// Throws SingularPair near collisions.
double force_function(const Configuration& c);

/// T = 1/2 sum m_i (qdot_i . qdot_i)(sigma q_i . q_i).
double kinetic_energy(const Configuration& c);

/// The seven first integrals: energy h = T - U and the six total angular
/// momenta c_wx .. c_yz. Accumulated with compensated summation so drift
/// measurements are not polluted by summation error.
struct Integrals {
    double h = 0;
    double c_wx = 0, c_wy = 0, c_wz = 0, c_xy = 0, c_xz = 0, c_yz = 0;

    double operator[](int k) const; // 0 = h, 1..6 = momenta in the order above
};

Integrals integrals(const Configuration& c);

inline constexpr const char* integral_names[7] = {"h",    "c_wx", "c_wy", "c_wz",
                                                  "c_xy", "c_xz", "c_yz"};

/// Neumaier-compensated accumulator.
struct KahanSum {
    double s = 0, comp = 0;

    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    }
    double value() const { return s + comp; }
};

} // namespace curved

#endif
