#ifndef CURVED_FAMILIES_HPP
#define CURVED_FAMILIES_HPP

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curved/analysis.hpp"
#include "curved/rotopulse.hpp"
#include "curved/simulate.hpp"

namespace curved {

/// The concrete reduced systems for N = 2, 3: Lagrangian (equilateral)
/// triangles and Eulerian (collinear) configurations. Each is a planar
/// first-order system (two state variables) with the rotation angles
/// carried alongside for lifting.
enum class Family {
    PeLagrangian,  // sphere, 3 bodies, one wx rotation; state (z, v)
    PeeBinary,     // sphere, 2 bodies, wx+yz rotations; state (r, s)
    PeeLagrangian, // sphere, 3 bodies, wx+yz rotations; state (r, u)
    NeLagrangian,  // hyperboloid, 3 bodies, wx rotation; state (z, v)
    NhBinary,      // hyperboloid, 2 bodies, yz rotation; state (x, s)
    NhEulerian3,   // hyperboloid, 3 bodies, yz rotation; state (x, s)
    NehBinary,     // hyperboloid, 2 bodies, wx+yz rotations; state (r, s)
    NehEulerian3,  // hyperboloid, 3 bodies, wx+yz rotations; state (r, s)
};

inline constexpr std::array<Family, 8> all_families = {
    Family::PeLagrangian, Family::PeeBinary,   Family::PeeLagrangian, Family::NeLagrangian,
    Family::NhBinary,     Family::NhEulerian3, Family::NehBinary,     Family::NehEulerian3};

std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);
Space family_space(Family f);
std::array<const char*, 2> family_state_names(Family f);

/// Family parameters. `m` is the common mass. mom_wx / mom_yz are the
/// momentum constants of the family's rotations (c, c1/c2, b, d1/d2 in the
/// various systems). NeLagrangian may be parameterized by the energy h
/// instead of mom_wx (its standard form); when both are given they must be
/// consistent. gamma encodes the conserved ratio y = gamma z of the
/// elliptic Lagrangian families, zeta the ratio w = zeta x of the
/// hyperbolic Eulerian ones; both default to 0 and only affect lifting.
struct FamilyParams {
    double m = 1;
    double mom_wx = 0;
    double mom_yz = 0;
    std::optional<double> h; // NeLagrangian energy form
    double gamma = 0;
    double zeta = 0;
};

struct FamilySpec {
    Family family;
    FamilyParams p;
};

/// Parameter validation; throws std::invalid_argument.
void validate(const FamilySpec& spec);

/// Right-hand side of the planar system (core state only).
void family_rhs(const FamilySpec& spec, std::span<const double> core, std::span<double> dcore);

bool family_in_domain(const FamilySpec& spec, std::span<const double> core);

/// Family-specialized energy integral.
double energy_on_family(const FamilySpec& spec, std::span<const double> core);

struct FamilyFixedPoint {
    std::array<double, 2> state{};
    double residual = 0;                      // |rhs| at the point
    std::array<std::complex<double>, 2> eig;  // Jacobian eigenvalues
    std::optional<double> closed_form_residual; // where a closed form exists
};

/// All fixed points in the family's domain, bracketed-bisection + Newton.
std::vector<FamilyFixedPoint> fixed_points(const FamilySpec& spec);

/// Jacobian of the planar system at a state (exact, via dual numbers).
std::array<std::array<double, 2>, 2> family_jacobian(const FamilySpec& spec,
                                                     std::span<const double> core);

/// The matching general ansatz (for criterion cross-checks and lifting).
Ansatz family_ansatz(const FamilySpec& spec);

/// Embed a family core state into the matching criterion state vector.
std::vector<double> family_to_criterion_state(const FamilySpec& spec,
                                              std::span<const double> core, double alpha0,
                                              double beta0);

/// ReducedSystem for the integrator: core state plus the angle quadratures
/// the class carries. For the energy-parameterized NeLagrangian the
/// momentum constant is recovered from (state0, h) at construction.
ReducedSystem family_system(const FamilySpec& spec, std::span<const double> core0);

/// Ambient configuration of a family state.
Configuration family_lift(const FamilySpec& spec, std::span<const double> core, double alpha0,
                          double beta0);

/// Fixed points of the spherical Lagrangian family expressed through the
/// energy constant: an even degree-8 polynomial in z whose positive roots
/// below 1 are the equilibrium radii.
Polynomial pe_lagrangian_energy_polynomial(double m, double h);

/// Same family parameterized by the momentum constant:
/// 1728 m^6 (1 - z^2) - c^4 (1 + 3 z^2)^3.
Polynomial pe_lagrangian_momentum_polynomial(double m, double c);

/// Hyperbolic Lagrangian analogue: a degree-4 polynomial in Z = z^2 whose
/// roots above 1 locate candidate equilibria.
Polynomial ne_lagrangian_energy_polynomial(double m, double h);

} // namespace curved

#endif
