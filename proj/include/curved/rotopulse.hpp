#ifndef CURVED_ROTOPULSE_HPP
#define CURVED_ROTOPULSE_HPP

#include <span>
#include <string>
#include <vector>

#include "curved/simulate.hpp"
#include "curved/trajectory.hpp"

namespace curved {

/// The five rotopulsating ansatz classes. Parabolic rotations admit no
/// rotopulsators and are rejected at construction.
enum class AnsatzTag {
    PositiveElliptic,
    PositiveEllipticElliptic,
    NegativeElliptic,
    NegativeHyperbolic,
    NegativeEllipticHyperbolic,
    Parabolic,
};

std::string_view ansatz_name(AnsatzTag tag);
Space ansatz_space(AnsatzTag tag);

/// Ansatz data: masses, per-body phase constants and the momentum constants
/// of the rotations the class carries. mom_wx drives the circular rotation
/// in the wx-plane (the constant written c, c1, b or d1 depending on the
/// class); mom_yz drives the yz-plane rotation (c2, c, d2) which is
/// circular on the sphere and hyperbolic on the hyperboloid.
struct Ansatz {
    AnsatzTag tag;
    std::vector<double> masses;
    std::vector<double> phase_wx; // a_i
    std::vector<double> phase_yz; // b_i
    double mom_wx = 0;
    double mom_yz = 0;

    int count() const { return static_cast<int>(masses.size()); }
    double total_mass() const;
};

/// Validates class/phase/momentum consistency; throws UnsupportedClass for
/// Parabolic and std::invalid_argument otherwise.
Ansatz make_ansatz(AnsatzTag tag, std::vector<double> masses, std::vector<double> phase_wx,
                   std::vector<double> phase_yz, double mom_wx, double mom_yz);

/// Reduced-state layout (the trailing entries are the rotation angles,
/// carried as quadrature states so trajectories can be lifted):
///   PositiveElliptic / NegativeElliptic: [y_i | z_i | u_i | v_i | alpha]
///   NegativeHyperbolic:                  [w_i | x_i | p_i | s_i | beta]
///   PositiveEllipticElliptic /
///   NegativeEllipticHyperbolic:          [r_i | s_i | alpha, beta]
/// The radii r_i (rho_i) are recomputed from the class's algebraic
/// constraint instead of being integrated.
int state_dim(const Ansatz& a);
int core_dim(const Ansatz& a); // state_dim minus the angle entries

/// Radius of body i recovered from the constraint (r_i for the elliptic
/// classes and the wx-block of PEE/NEH, rho_i for NegativeHyperbolic).
double radius(const Ansatz& a, std::span<const double> state, int i);

struct AngularVelocity {
    double alpha_dot = 0, beta_dot = 0;
};

/// The class's angular-velocity law, e.g. alpha_dot = c / sum_j m_j r_j^2.
/// Throws DegenerateRadius when a denominator vanishes.
AngularVelocity angular_velocity(const Ansatz& a, std::span<const double> state);

/// Full reduced right-hand side, including the angle quadratures.
/// Throws SingularPair / DegenerateRadius.
void criterion_rhs(const Ansatz& a, std::span<const double> state, std::span<double> deriv);

/// Pairwise inner product in reduced variables.
double criterion_qij(const Ansatz& a, std::span<const double> state, int i, int j);

/// Ambient configuration reproducing the ansatz at the state's angles.
Configuration lift(const Ansatz& a, std::span<const double> state);
Configuration lift(const Ansatz& a, std::span<const double> core, double alpha0, double beta0);

/// The class-specialized energy integral; equals the ambient h on lifts.
double reduced_energy(const Ansatz& a, std::span<const double> state);

/// Residual of the second-order angle equations (e.g. r_i dd(alpha) +
/// 2 rdot_i d(alpha) = sum_j ...): zero exactly on the symmetric families,
/// a consistency diagnostic elsewhere.
double angular_residual(const Ansatz& a, std::span<const double> state);

/// ReducedSystem wrapper for the integrator (domain checks + lift).
ReducedSystem criterion_system(const Ansatz& a);

enum class OrbitClass { RelativeEquilibrium, Rotopulsator, Inconclusive };

std::string_view orbit_class_name(OrbitClass c);

/// Relative-equilibrium test on a trajectory of ambient samples: all q_ij
/// within 1e-8 of their initial values means RelativeEquilibrium; a pair
/// varying by more than 1e-4 with a nonzero rotation momentum means
/// Rotopulsator. Requires at least 16 samples.
OrbitClass classify(const Trajectory& traj);

inline constexpr double classify_re_tol = 1e-8;
inline constexpr double classify_pulse_tol = 1e-4;
inline constexpr double rotation_tol = 1e-9;

} // namespace curved

#endif
