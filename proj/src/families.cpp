#include "curved/families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curved/dual.hpp"

namespace curved {

std::string_view family_name(Family f) {
    switch (f) {
        case Family::PeLagrangian: return "pe-lagrangian";
        case Family::PeeBinary: return "pee-binary";
        case Family::PeeLagrangian: return "pee-lagrangian";
        case Family::NeLagrangian: return "ne-lagrangian";
        case Family::NhBinary: return "nh-binary";
        case Family::NhEulerian3: return "nh-eulerian3";
        case Family::NehBinary: return "neh-binary";
        case Family::NehEulerian3: return "neh-eulerian3";
    }
    return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
    for (Family f : all_families)
        if (family_name(f) == name) return f;
    return std::nullopt;
}

Space family_space(Family f) {
    switch (f) {
        case Family::PeLagrangian:
        case Family::PeeBinary:
        case Family::PeeLagrangian: return Space::sphere();
        default: return Space::hyperbolic();
    }
}

std::array<const char*, 2> family_state_names(Family f) {
    switch (f) {
        case Family::PeLagrangian: return {"z", "v"};
        case Family::PeeBinary: return {"r", "s"};
        case Family::PeeLagrangian: return {"r", "u"};
        case Family::NeLagrangian: return {"z", "v"};
        case Family::NhBinary:
        case Family::NhEulerian3: return {"x", "s"};
        default: return {"r", "s"};
    }
}

void validate(const FamilySpec& spec) {
    const FamilyParams& p = spec.p;
    if (!(p.m > 0)) throw std::invalid_argument("family mass must be positive");
    auto need_wx = [&] {
        if (p.mom_wx == 0)
            throw std::invalid_argument("family requires a nonzero wx momentum constant");
    };
    auto need_yz = [&] {
        if (p.mom_yz == 0)
            throw std::invalid_argument("family requires a nonzero yz momentum constant");
    };
    switch (spec.family) {
        case Family::PeLagrangian:
            need_wx();
            break;
        case Family::PeeBinary:
        case Family::PeeLagrangian:
            need_wx();
            need_yz();
            break;
        case Family::NeLagrangian:
            if (!p.h && p.mom_wx == 0)
                throw std::invalid_argument(
                    "ne-lagrangian needs the energy h or the momentum constant");
            if (p.gamma * p.gamma >= 1)
                throw std::invalid_argument("ne-lagrangian needs gamma^2 < 1");
            break;
        case Family::NhBinary:
        case Family::NhEulerian3:
            need_yz();
            break;
        case Family::NehBinary:
        case Family::NehEulerian3:
            need_wx();
            need_yz();
            break;
    }
}

namespace {

constexpr double sqrt3 = 1.7320508075688772;

// Second state derivative of each planar system (the first is trivially
// the second state variable). Templated so dual numbers give the exact
// Jacobian.
template <typename T>
T rhs2(const FamilySpec& spec, T x1, T x2) {
    using std::sqrt;
    const double m = spec.p.m;
    switch (spec.family) {
        case Family::PeLagrangian: {
            // z' = v, v' = [8m/(sqrt3 (1-z^2)^{1/2}(1+3z^2)^{3/2})
            //               - c^2/(9m^2(1-z^2)) - v^2/(1-z^2)] z
            const double c = spec.p.mom_wx;
            const T z = x1, v = x2;
            const T one_z2 = 1.0 - z * z;
            const T k = 1.0 + 3.0 * (z * z);
            const T bracket = 8.0 * m / (sqrt3 * sqrt(one_z2) * k * sqrt(k)) -
                              c * c / (9.0 * m * m * one_z2) - v * v / one_z2;
            return bracket * z;
        }
        case Family::PeeBinary: {
            const double c1 = spec.p.mom_wx, c2 = spec.p.mom_yz;
            const T r = x1, s = x2;
            const T r2 = r * r;
            const T one_r2 = 1.0 - r2;
            return r * one_r2 *
                       (c1 * c1 / (4.0 * m * m * r2 * r2) -
                        c2 * c2 / (4.0 * m * m * one_r2 * one_r2)) -
                   r * s * s / one_r2 - m / (4.0 * r2 * sqrt(one_r2));
        }
        case Family::PeeLagrangian: {
            const double c1 = spec.p.mom_wx, c2 = spec.p.mom_yz;
            const T r = x1, u = x2;
            const T r2 = r * r;
            const T one_r2 = 1.0 - r2;
            return c1 * c1 * one_r2 / (9.0 * m * m * r2 * r) -
                   r * (9.0 * m * m * (u * u) + c2 * c2) / (9.0 * m * m * one_r2);
        }
        case Family::NeLagrangian: {
            const T z = x1, v = x2;
            const T z2 = z * z;
            const T gap = z2 - 1.0;
            const T k = 3.0 * z2 + 1.0;
            if (spec.p.h) {
                // energy-substituted form
                const double h = *spec.p.h;
                const T bracket = 2.0 * h / (3.0 * m) -
                                  2.0 * m * (5.0 - 9.0 * (z2 * z2)) /
                                      (sqrt3 * sqrt(gap) * k * sqrt(k));
                return bracket * z;
            }
            const double b = spec.p.mom_wx;
            const T bracket = v * v / gap + b * b / (9.0 * m * m * gap) -
                              8.0 * m / (sqrt3 * sqrt(gap) * k * sqrt(k));
            return bracket * z;
        }
        case Family::NhBinary: {
            // collinear binary with one hyperbolic rotation, in the form the
            // system is usually quoted (see notes in fixed_points)
            const double c = spec.p.mom_yz;
            const T x = x1, s = x2;
            const T x2p1 = x * x + 1.0;
            const T bracket = s * s / x2p1 + c * c / (4.0 * m * m * x2p1) -
                              m / (4.0 * (x * x) * sqrt(x2p1));
            return bracket * x;
        }
        case Family::NhEulerian3: {
            const double c = spec.p.mom_yz;
            const T x = x1, s = x2;
            const T xx = x * x;
            const T x2p1 = xx + 1.0;
            const T den = 2.0 * xx + 3.0;
            const T bracket = s * s / x2p1 + c * c * x2p1 / (m * m * den * den) -
                              m * (4.0 * xx + 5.0) / (4.0 * xx * x * sqrt(x2p1));
            return bracket * x;
        }
        case Family::NehBinary: {
            const double d1 = spec.p.mom_wx, d2 = spec.p.mom_yz;
            const T r = x1, s = x2;
            const T r2 = r * r;
            const T rho2 = 1.0 + r2;
            return r * rho2 *
                       (d1 * d1 / (4.0 * m * m * r2 * r2) +
                        d2 * d2 / (4.0 * m * m * rho2 * rho2)) +
                   r * s * s / rho2 - m / (4.0 * r2 * sqrt(rho2));
        }
        default: { // NehEulerian3
            const double d1 = spec.p.mom_wx, d2 = spec.p.mom_yz;
            const T r = x1, s = x2;
            const T r2 = r * r;
            const T rho2 = 1.0 + r2;
            const T den = 3.0 + 2.0 * r2;
            return r * rho2 *
                       (d1 * d1 / (4.0 * m * m * r2 * r2) + d2 * d2 / (m * m * den * den)) +
                   r * s * s / rho2 - m * (5.0 + 4.0 * r2) / (4.0 * r2 * sqrt(rho2));
        }
    }
}

} // namespace

bool family_in_domain(const FamilySpec& spec, std::span<const double> core) {
    const double x1 = core[0];
    switch (spec.family) {
        case Family::PeLagrangian: return std::abs(x1) < 1.0;
        case Family::PeeBinary:
        case Family::PeeLagrangian: return x1 > 0.0 && x1 < 1.0;
        case Family::NeLagrangian: return x1 > 1.0;
        default: return x1 > 0.0;
    }
}

void family_rhs(const FamilySpec& spec, std::span<const double> core,
                std::span<double> dcore) {
    if (core.size() < 2 || dcore.size() < 2)
        throw std::invalid_argument("family state has two components");
    dcore[0] = core[1];
    dcore[1] = rhs2<double>(spec, core[0], core[1]);
}

std::array<std::array<double, 2>, 2> family_jacobian(const FamilySpec& spec,
                                                     std::span<const double> core) {
    const Dual f_x = rhs2<Dual>(spec, Dual(core[0], 1.0), Dual(core[1], 0.0));
    const Dual f_s = rhs2<Dual>(spec, Dual(core[0], 0.0), Dual(core[1], 1.0));
    return {{{0.0, 1.0}, {f_x.d, f_s.d}}};
}

double energy_on_family(const FamilySpec& spec, std::span<const double> core) {
    if (!family_in_domain(spec, core))
        throw std::invalid_argument("state outside the family domain");
    const double m = spec.p.m;
    const double x = core[0], s = core[1];
    switch (spec.family) {
        case Family::PeLagrangian: {
            const double c = spec.p.mom_wx;
            const double oz = 1.0 - x * x;
            return 3.0 * m * s * s / (2.0 * oz) + c * c / (6.0 * m * oz) -
                   sqrt3 * m * m * (3.0 * x * x - 1.0) /
                       (std::sqrt(oz) * std::sqrt(1.0 + 3.0 * x * x));
        }
        case Family::PeeBinary: {
            const double c1 = spec.p.mom_wx, c2 = spec.p.mom_yz;
            const double orr = 1.0 - x * x;
            return m * s * s / orr + c1 * c1 / (4.0 * m * x * x) + c2 * c2 / (4.0 * m * orr) -
                   m * m * (1.0 - 2.0 * x * x) / (2.0 * x * std::sqrt(orr));
        }
        case Family::PeeLagrangian: {
            const double c1 = spec.p.mom_wx, c2 = spec.p.mom_yz;
            const double orr = 1.0 - x * x;
            return 3.0 * m * s * s / (2.0 * orr) + c1 * c1 / (6.0 * m * x * x) +
                   c2 * c2 / (6.0 * m * orr) + sqrt3 * m * m;
        }
        case Family::NeLagrangian: {
            if (spec.p.h) return *spec.p.h;
            const double b = spec.p.mom_wx;
            const double gap = x * x - 1.0;
            return 3.0 * m * s * s / (2.0 * gap) + b * b / (6.0 * m * gap) -
                   sqrt3 * m * m * (3.0 * x * x - 1.0) /
                       (std::sqrt(gap) * std::sqrt(3.0 * x * x + 1.0));
        }
        case Family::NhBinary: {
            const double c = spec.p.mom_yz;
            const double xp = x * x + 1.0;
            return m * s * s / xp + c * c / (4.0 * m * xp) -
                   m * m * (2.0 * x * x + 1.0) / (2.0 * x * std::sqrt(xp));
        }
        case Family::NhEulerian3: {
            const double c = spec.p.mom_yz;
            const double xp = x * x + 1.0;
            return m * s * s / xp + c * c / (2.0 * m * (2.0 * x * x + 3.0)) -
                   2.0 * m * m * std::sqrt(xp) / x -
                   m * m * (2.0 * x * x + 1.0) / (2.0 * x * std::sqrt(xp));
        }
        case Family::NehBinary: {
            const double d1 = spec.p.mom_wx, d2 = spec.p.mom_yz;
            const double rho2 = 1.0 + x * x;
            return m * s * s / rho2 + d1 * d1 / (4.0 * m * x * x) +
                   d2 * d2 / (4.0 * m * rho2) -
                   m * m * (2.0 * x * x + 1.0) / (2.0 * x * std::sqrt(rho2));
        }
        default: { // NehEulerian3
            const double d1 = spec.p.mom_wx, d2 = spec.p.mom_yz;
            const double rho2 = 1.0 + x * x;
            return m * s * s / rho2 + d1 * d1 / (4.0 * m * x * x) +
                   d2 * d2 / (2.0 * m * (3.0 + 2.0 * x * x)) -
                   2.0 * m * m * std::sqrt(rho2) / x -
                   m * m * (2.0 * x * x + 1.0) / (2.0 * x * std::sqrt(rho2));
        }
    }
}

namespace {

// Domain scan range for the fixed-point search; (lo, hi) with hi possibly
// mapped from an unbounded domain.
struct ScanRange {
    double lo, hi;
    bool unbounded;
};

ScanRange scan_range(Family f) {
    switch (f) {
        case Family::PeLagrangian:
        case Family::PeeBinary:
        case Family::PeeLagrangian: return {1e-6, 1.0 - 1e-9, false};
        case Family::NeLagrangian: return {1.0 + 1e-9, 0, true};
        default: return {1e-6, 0, true};
    }
}

double newton_polish(const FamilySpec& spec, double x) {
    for (int it = 0; it < 60; ++it) {
        const Dual f = rhs2<Dual>(spec, Dual(x, 1.0), Dual(0.0, 0.0));
        if (f.d == 0) break;
        const double step = f.v / f.d;
        x -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

std::optional<double> closed_form_check(const FamilySpec& spec, double x) {
    const double m = spec.p.m;
    switch (spec.family) {
        case Family::PeLagrangian: {
            if (x == 0) return std::nullopt;
            const double c = spec.p.mom_wx;
            const double k = 1.0 + 3.0 * x * x;
            return 1728.0 * std::pow(m, 6) * (1.0 - x * x) - std::pow(c, 4) * k * k * k;
        }
        case Family::PeeLagrangian: {
            const double c1 = spec.p.mom_wx, c2 = spec.p.mom_yz;
            const double r2 = x * x;
            return (c1 * c1 - c2 * c2) * r2 * r2 - 2.0 * c1 * c1 * r2 + c1 * c1;
        }
        case Family::NhBinary: {
            const double c = spec.p.mom_yz;
            return std::pow(c, 4) * std::pow(x, 4) - std::pow(m, 6) * (x * x + 1.0);
        }
        case Family::NeLagrangian: {
            if (!spec.p.h) return std::nullopt;
            const Polynomial q = ne_lagrangian_energy_polynomial(m, *spec.p.h);
            return q.eval(x * x);
        }
        default: return std::nullopt;
    }
}

FamilyFixedPoint make_fixed_point(const FamilySpec& spec, double x) {
    FamilyFixedPoint fp;
    fp.state = {x, 0.0};
    fp.residual = std::abs(rhs2<double>(spec, x, 0.0));
    const auto jac = family_jacobian(spec, fp.state);
    // [[0,1],[A,B]]: lambda^2 - B lambda - A = 0
    const double A = jac[1][0], B = jac[1][1];
    const double disc = B * B + 4.0 * A;
    if (disc >= 0) {
        const double rt = std::sqrt(disc);
        fp.eig = {std::complex<double>((B + rt) / 2, 0), std::complex<double>((B - rt) / 2, 0)};
    } else {
        const double im = std::sqrt(-disc) / 2;
        fp.eig = {std::complex<double>(B / 2, im), std::complex<double>(B / 2, -im)};
    }
    fp.closed_form_residual = closed_form_check(spec, x);
    return fp;
}

} // namespace

std::vector<FamilyFixedPoint> fixed_points(const FamilySpec& spec) {
    validate(spec);
    std::vector<FamilyFixedPoint> out;

    // (0, 0) sits in the domain only for the spherical Lagrangian family
    if (spec.family == Family::PeLagrangian) out.push_back(make_fixed_point(spec, 0.0));

    const ScanRange range = scan_range(spec.family);
    const int cells = 4000;
    auto grid_point = [&](int k) {
        const double u = static_cast<double>(k) / cells;
        if (!range.unbounded) return range.lo + (range.hi - range.lo) * u;
        // map (0,1) onto (lo, lo + u/(1-u)) to cover the half line
        const double umax = 0.999; // reach ~ lo + 1000
        const double uu = u * umax;
        return range.lo + uu / (1.0 - uu);
    };

    double xprev = grid_point(1);
    double fprev = rhs2<double>(spec, xprev, 0.0);
    for (int k = 2; k <= cells; ++k) {
        const double x = grid_point(k);
        const double f = rhs2<double>(spec, x, 0.0);
        if (std::isfinite(fprev) && std::isfinite(f) && fprev != 0 && (fprev < 0) != (f < 0)) {
            // bisect then polish
            double lo = xprev, hi = x, flo = fprev;
            for (int it = 0; it < 120; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = rhs2<double>(spec, mid, 0.0);
                if ((flo < 0) == (fm < 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push_back(make_fixed_point(spec, newton_polish(spec, 0.5 * (lo + hi))));
        }
        xprev = x;
        fprev = f;
    }
    return out;
}

Ansatz family_ansatz(const FamilySpec& spec) {
    validate(spec);
    const double m = spec.p.m;
    const double third = 2.0 * M_PI / 3.0;
    switch (spec.family) {
        case Family::PeLagrangian:
            return make_ansatz(AnsatzTag::PositiveElliptic, {m, m, m}, {0, third, 2 * third},
                               {}, spec.p.mom_wx, 0);
        case Family::PeeBinary:
            return make_ansatz(AnsatzTag::PositiveEllipticElliptic, {m, m}, {0, M_PI}, {0, 0},
                               spec.p.mom_wx, spec.p.mom_yz);
        case Family::PeeLagrangian:
            return make_ansatz(AnsatzTag::PositiveEllipticElliptic, {m, m, m},
                               {0, third, 2 * third}, {0, third, 2 * third}, spec.p.mom_wx,
                               spec.p.mom_yz);
        case Family::NeLagrangian: {
            if (spec.p.mom_wx == 0)
                throw std::invalid_argument(
                    "ne-lagrangian lift needs the momentum constant resolved from h first");
            return make_ansatz(AnsatzTag::NegativeElliptic, {m, m, m}, {0, third, 2 * third},
                               {}, spec.p.mom_wx, 0);
        }
        case Family::NhBinary:
            return make_ansatz(AnsatzTag::NegativeHyperbolic, {m, m}, {}, {0, 0}, 0,
                               spec.p.mom_yz);
        case Family::NhEulerian3:
            return make_ansatz(AnsatzTag::NegativeHyperbolic, {m, m, m}, {}, {0, 0, 0}, 0,
                               spec.p.mom_yz);
        case Family::NehBinary:
            return make_ansatz(AnsatzTag::NegativeEllipticHyperbolic, {m, m}, {0, M_PI},
                               {0, 0}, spec.p.mom_wx, spec.p.mom_yz);
        default: // NehEulerian3
            return make_ansatz(AnsatzTag::NegativeEllipticHyperbolic, {m, m, m}, {0, 0, M_PI},
                               {0, 0, 0}, spec.p.mom_wx, spec.p.mom_yz);
    }
}

std::vector<double> family_to_criterion_state(const FamilySpec& spec,
                                              std::span<const double> core, double alpha0,
                                              double beta0) {
    const double x = core[0], s = core[1];
    switch (spec.family) {
        case Family::PeLagrangian: {
            // y = gamma z with zbar = sqrt(gamma^2 + 1) z integrated
            const double delta = spec.p.gamma * spec.p.gamma + 1.0;
            const double z = x / std::sqrt(delta), v = s / std::sqrt(delta);
            const double y = spec.p.gamma * z, u = spec.p.gamma * v;
            return {y, y, y, z, z, z, u, u, u, v, v, v, alpha0};
        }
        case Family::PeeBinary: return {x, x, s, s, alpha0, beta0};
        case Family::PeeLagrangian: return {x, x, x, s, s, s, alpha0, beta0};
        case Family::NeLagrangian: {
            const double eps = 1.0 - spec.p.gamma * spec.p.gamma;
            const double z = x / std::sqrt(eps), v = s / std::sqrt(eps);
            const double y = spec.p.gamma * z, u = spec.p.gamma * v;
            return {y, y, y, z, z, z, u, u, u, v, v, v, alpha0};
        }
        case Family::NhBinary: {
            const double delta = spec.p.zeta * spec.p.zeta + 1.0;
            const double xx = x / std::sqrt(delta), ss = s / std::sqrt(delta);
            const double ww = spec.p.zeta * xx, pp = spec.p.zeta * ss;
            return {ww, -ww, xx, -xx, pp, -pp, ss, -ss, beta0};
        }
        case Family::NhEulerian3: {
            const double delta = spec.p.zeta * spec.p.zeta + 1.0;
            const double xx = x / std::sqrt(delta), ss = s / std::sqrt(delta);
            const double ww = spec.p.zeta * xx, pp = spec.p.zeta * ss;
            return {0, ww, -ww, 0, xx, -xx, 0, pp, -pp, 0, ss, -ss, beta0};
        }
        case Family::NehBinary: return {x, x, s, s, alpha0, beta0};
        default: // NehEulerian3: central body pinned to the rotation axis
            return {0, x, x, 0, s, s, alpha0, beta0};
    }
}

Configuration family_lift(const FamilySpec& spec, std::span<const double> core, double alpha0,
                          double beta0) {
    const Ansatz a = family_ansatz(spec);
    return lift(a, family_to_criterion_state(spec, core, alpha0, beta0));
}

namespace {

// Momentum constant of the energy-parameterized hyperbolic Lagrangian
// family, recovered on-shell from a state.
double ne_lagrangian_momentum(const FamilySpec& spec, std::span<const double> core) {
    const double m = spec.p.m, h = *spec.p.h;
    const double z = core[0], v = core[1];
    const double gap = z * z - 1.0;
    const double b2 = 6.0 * m * gap *
                      (h - 3.0 * m * v * v / (2.0 * gap) +
                       sqrt3 * m * m * (3.0 * z * z - 1.0) /
                           (std::sqrt(3.0 * z * z + 1.0) * std::sqrt(gap)));
    if (!(b2 > 0))
        throw std::invalid_argument(
            "ne-lagrangian: no real momentum constant for this (state, h) pair");
    return std::sqrt(b2);
}

} // namespace

ReducedSystem family_system(const FamilySpec& spec_in, std::span<const double> core0) {
    FamilySpec spec = spec_in;
    validate(spec);
    if (spec.family == Family::NeLagrangian && spec.p.h && spec.p.mom_wx == 0)
        spec.p.mom_wx = ne_lagrangian_momentum(spec, core0);

    const bool has_alpha = spec.family == Family::PeLagrangian ||
                           spec.family == Family::NeLagrangian ||
                           spec.family == Family::PeeBinary ||
                           spec.family == Family::PeeLagrangian ||
                           spec.family == Family::NehBinary ||
                           spec.family == Family::NehEulerian3;
    const bool has_beta = spec.family == Family::PeeBinary ||
                          spec.family == Family::PeeLagrangian ||
                          spec.family == Family::NhBinary ||
                          spec.family == Family::NhEulerian3 ||
                          spec.family == Family::NehBinary ||
                          spec.family == Family::NehEulerian3;

    ReducedSystem sys;
    sys.dim = 2 + (has_alpha ? 1 : 0) + (has_beta ? 1 : 0);
    sys.label = std::string(family_name(spec.family));
    sys.space = family_space(spec.family);

    const Ansatz ansatz = family_ansatz(spec);

    sys.rhs = [spec, has_alpha, has_beta](std::span<const double> y,
                                          std::span<double> dy) -> bool {
        if (!family_in_domain(spec, y)) return false;
        const double x = y[0];
        double d2;
        try {
            d2 = rhs2<double>(spec, x, y[1]);
        } catch (const Error&) {
            return false;
        }
        if (!std::isfinite(d2)) return false;
        dy[0] = y[1];
        dy[1] = d2;

        const double m = spec.p.m;
        int k = 2;
        if (has_alpha) {
            double alpha_dot;
            switch (spec.family) {
                case Family::PeLagrangian: alpha_dot = spec.p.mom_wx / (3 * m * (1 - x * x)); break;
                case Family::NeLagrangian: alpha_dot = spec.p.mom_wx / (3 * m * (x * x - 1)); break;
                case Family::PeeBinary: alpha_dot = spec.p.mom_wx / (2 * m * x * x); break;
                case Family::PeeLagrangian: alpha_dot = spec.p.mom_wx / (3 * m * x * x); break;
                default: alpha_dot = spec.p.mom_wx / (2 * m * x * x); break; // Neh*
            }
            if (!std::isfinite(alpha_dot)) return false;
            dy[k++] = alpha_dot;
        }
        if (has_beta) {
            double beta_dot;
            switch (spec.family) {
                case Family::PeeBinary: beta_dot = spec.p.mom_yz / (2 * m * (1 - x * x)); break;
                case Family::PeeLagrangian: beta_dot = spec.p.mom_yz / (3 * m * (1 - x * x)); break;
                case Family::NhBinary: beta_dot = spec.p.mom_yz / (2 * m * (x * x + 1)); break;
                case Family::NhEulerian3:
                    beta_dot = spec.p.mom_yz / (m * (2 * x * x + 3));
                    break;
                case Family::NehBinary: beta_dot = spec.p.mom_yz / (2 * m * (1 + x * x)); break;
                default: beta_dot = spec.p.mom_yz / (m * (3 + 2 * x * x)); break;
            }
            if (!std::isfinite(beta_dot)) return false;
            dy[k++] = beta_dot;
        }
        return true;
    };

    sys.in_domain = [spec](std::span<const double> y) {
        return family_in_domain(spec, y.first(2));
    };

    sys.lift = [spec, ansatz, has_alpha](std::span<const double> y) {
        double alpha0 = 0, beta0 = 0;
        int k = 2;
        if (has_alpha) alpha0 = y[k++];
        if (k < static_cast<int>(y.size())) beta0 = y[k];
        return lift(ansatz, family_to_criterion_state(spec, y.first(2), alpha0, beta0));
    };
    return sys;
}

Polynomial pe_lagrangian_energy_polynomial(double m, double h) {
    const double m4 = m * m * m * m, h2 = h * h;
    std::vector<double> c(9, 0.0);
    c[0] = 75 * m4 - h2;
    c[2] = -8 * h2;
    c[4] = -18 * (15 * m4 + h2);
    c[8] = 27 * (9 * m4 + h2);
    return Polynomial(std::move(c));
}

Polynomial pe_lagrangian_momentum_polynomial(double m, double cc) {
    const double m6 = std::pow(m, 6), c4 = std::pow(cc, 4);
    std::vector<double> c(7, 0.0);
    c[0] = 1728 * m6 - c4;
    c[2] = -1728 * m6 - 9 * c4;
    c[4] = -27 * c4;
    c[6] = -27 * c4;
    return Polynomial(std::move(c));
}

Polynomial ne_lagrangian_energy_polynomial(double m, double h) {
    const double m4 = m * m * m * m, h2 = h * h;
    std::vector<double> c(5, 0.0);
    c[0] = -(h2 + 75 * m4);
    c[1] = -8 * h2;
    c[2] = -18 * (h2 - 15 * m4);
    c[4] = 27 * (h2 - 9 * m4);
    return Polynomial(std::move(c));
}

} // namespace curved
