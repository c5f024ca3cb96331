#ifndef CURVED_ANALYSIS_HPP
#define CURVED_ANALYSIS_HPP

#include <array>
#include <span>
#include <vector>

#include "curved/trajectory.hpp"

namespace curved {

/// Dense real polynomial, coefficients in ascending degree order.
struct Polynomial {
    std::vector<double> coef;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> c) : coef(std::move(c)) { trim(); }

    int degree() const { return static_cast<int>(coef.size()) - 1; }
    double eval(double x) const;
    Polynomial derivative() const;

    /// Horner evaluation roundoff bound at x; values inside it have no
    /// trustworthy sign.
    double eval_noise(double x) const;

    /// Sign of p(x): -1, 0 (within roundoff noise), +1.
    int sign_at(double x) const;

    /// Drop leading coefficients with |c| <= 1e-14.
    void trim();
};

/// Number of sign changes in the coefficient sequence: an upper bound on
/// the count of positive roots, of the same parity.
int descartes_positive_count(const Polynomial& p);

struct RootBracket {
    double lo = 0, hi = 0;  // isolating interval
    double root = 0;        // refined root
    double residual = 0;    // |p(root)|
};

/// All simple real roots in (lo, hi), isolated by recursive bisection with
/// a derivative-sequence sign-variation bound as the splitting oracle and
/// refined by bisection + Newton to ~1e-13. Roots of even multiplicity
/// (no sign change) are not reported, consistent with the parity bound.
std::vector<RootBracket> isolate_real_roots(const Polynomial& p, double lo, double hi);

/// An upper bound for the magnitude of all roots (Cauchy bound).
double root_magnitude_bound(const Polynomial& p);

enum class Confinement { AllConfined, CrossesContinuum };

/// Variation of the foliation radii along a trajectory: body i stays on a
/// single Clifford torus (hyperbolic cylinder) exactly when its (r, rho)
/// variation vanishes.
struct ConfinementReport {
    std::vector<double> variation; // per body, max over both radii
    int worst_body = -1;
    Confinement verdict = Confinement::AllConfined;
};

inline constexpr double confinement_tol = 1e-8;

ConfinementReport confinement_report(const Trajectory& traj, Space space);

/// Which of the six coordinate planes carry angular momentum along a
/// trajectory: |c_plane| > 1e-9 at some sample. Order: wx, wy, wz, xy,
/// xz, yz.
std::array<bool, 6> rotation_signature(const Trajectory& traj);

inline constexpr const char* plane_names[6] = {"wx", "wy", "wz", "xy", "xz", "yz"};

} // namespace curved

#endif
