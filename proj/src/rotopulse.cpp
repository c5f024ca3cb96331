#include "curved/rotopulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curved {

namespace {

constexpr double radius_floor = 1e-12;  // squared-radius positivity guard
constexpr double denom_floor = 1e-12;   // angular-velocity denominators

bool elliptic_pair_layout(AnsatzTag t) {
    return t == AnsatzTag::PositiveEllipticElliptic ||
           t == AnsatzTag::NegativeEllipticHyperbolic;
}

// gap = sigma (1 - q^2): the singularity guard, positive away from
// collisions on either manifold.
double pair_gap_checked(Space s, double qij, int i, int j) {
    const double gap = s.sigma * (1.0 - qij * qij);
    if (gap < sing_eps) throw SingularPair(i, j, qij);
    return gap;
}

double inv_gap_32(Space s, double qij, int i, int j) {
    const double gap = pair_gap_checked(s, qij, i, j);
    return 1.0 / (gap * std::sqrt(gap));
}

} // namespace

std::string_view ansatz_name(AnsatzTag tag) {
    switch (tag) {
        case AnsatzTag::PositiveElliptic: return "positive-elliptic";
        case AnsatzTag::PositiveEllipticElliptic: return "positive-elliptic-elliptic";
        case AnsatzTag::NegativeElliptic: return "negative-elliptic";
        case AnsatzTag::NegativeHyperbolic: return "negative-hyperbolic";
        case AnsatzTag::NegativeEllipticHyperbolic: return "negative-elliptic-hyperbolic";
        case AnsatzTag::Parabolic: return "parabolic";
    }
    return "?";
}

Space ansatz_space(AnsatzTag tag) {
    switch (tag) {
        case AnsatzTag::PositiveElliptic:
        case AnsatzTag::PositiveEllipticElliptic: return Space::sphere();
        default: return Space::hyperbolic();
    }
}

double Ansatz::total_mass() const {
    double m = 0;
    for (double mi : masses) m += mi;
    return m;
}

Ansatz make_ansatz(AnsatzTag tag, std::vector<double> masses, std::vector<double> phase_wx,
                   std::vector<double> phase_yz, double mom_wx, double mom_yz) {
    if (tag == AnsatzTag::Parabolic)
        throw UnsupportedClass("rotopulsators of parabolic type do not exist");
    const size_t n = masses.size();
    if (n < 2) throw std::invalid_argument("ansatz needs at least two bodies");
    for (double m : masses)
        if (!(m > 0)) throw std::invalid_argument("masses must be positive");

    const bool needs_wx = tag != AnsatzTag::NegativeHyperbolic;
    const bool needs_yz = tag == AnsatzTag::PositiveEllipticElliptic ||
                          tag == AnsatzTag::NegativeHyperbolic ||
                          tag == AnsatzTag::NegativeEllipticHyperbolic;

    if (needs_wx && phase_wx.size() != n)
        throw std::invalid_argument("phase_wx must have one entry per body");
    if (needs_yz && phase_yz.size() != n)
        throw std::invalid_argument("phase_yz must have one entry per body");
    if (!needs_wx) phase_wx.assign(n, 0.0);
    if (!needs_yz) phase_yz.assign(n, 0.0);

    if (needs_wx && mom_wx == 0)
        throw std::invalid_argument("the wx rotation requires a nonzero momentum constant");
    if (needs_yz && mom_yz == 0)
        throw std::invalid_argument("the yz rotation requires a nonzero momentum constant");
    if (!needs_wx) mom_wx = 0;
    if (!needs_yz) mom_yz = 0;

    return Ansatz{tag, std::move(masses), std::move(phase_wx), std::move(phase_yz), mom_wx,
                  mom_yz};
}

int core_dim(const Ansatz& a) {
    return elliptic_pair_layout(a.tag) ? 2 * a.count() : 4 * a.count();
}

int state_dim(const Ansatz& a) {
    return core_dim(a) + (elliptic_pair_layout(a.tag) ? 2 : 1);
}

namespace {

// Views into the two state layouts.
struct QuadView {
    const double *c1, *c2, *d1, *d2; // (y,z,u,v) or (w,x,p,s)
    int n;
    double angle;
};

QuadView quad_view(const Ansatz& a, std::span<const double> s) {
    const int n = a.count();
    return {s.data(), s.data() + n, s.data() + 2 * n, s.data() + 3 * n, n, s[4 * n]};
}

struct PairView {
    const double *r, *s;
    int n;
    double alpha, beta;
};

PairView pair_view(const Ansatz& a, std::span<const double> st) {
    const int n = a.count();
    return {st.data(), st.data() + n, n, st[2 * n], st[2 * n + 1]};
}

double squared_radius(const Ansatz& a, std::span<const double> st, int i) {
    switch (a.tag) {
        case AnsatzTag::PositiveElliptic: {
            auto v = quad_view(a, st);
            return 1.0 - v.c1[i] * v.c1[i] - v.c2[i] * v.c2[i];
        }
        case AnsatzTag::NegativeElliptic: {
            auto v = quad_view(a, st);
            return v.c2[i] * v.c2[i] - v.c1[i] * v.c1[i] - 1.0;
        }
        case AnsatzTag::NegativeHyperbolic: {
            auto v = quad_view(a, st);
            return v.c1[i] * v.c1[i] + v.c2[i] * v.c2[i] + 1.0;
        }
        case AnsatzTag::PositiveEllipticElliptic: {
            auto v = pair_view(a, st);
            return v.r[i] * v.r[i];
        }
        default: { // NegativeEllipticHyperbolic
            auto v = pair_view(a, st);
            return v.r[i] * v.r[i];
        }
    }
}

// Weighted sum of squared radii: the angular-velocity denominator.
double radius_sum(const Ansatz& a, std::span<const double> st) {
    double s = 0;
    for (int i = 0; i < a.count(); ++i) s += a.masses[i] * squared_radius(a, st, i);
    return s;
}

} // namespace

double radius(const Ansatz& a, std::span<const double> state, int i) {
    const double r2 = squared_radius(a, state, i);
    if (r2 < 0) throw DegenerateRadius("squared radius is negative for body " + std::to_string(i));
    return std::sqrt(r2);
}

AngularVelocity angular_velocity(const Ansatz& a, std::span<const double> state) {
    const double S = radius_sum(a, state);
    AngularVelocity av;
    switch (a.tag) {
        case AnsatzTag::PositiveElliptic:
        case AnsatzTag::NegativeElliptic:
            if (S < denom_floor) throw DegenerateRadius("sum of m_j r_j^2 vanished");
            av.alpha_dot = a.mom_wx / S;
            break;
        case AnsatzTag::NegativeHyperbolic:
            if (S < denom_floor) throw DegenerateRadius("sum of m_j rho_j^2 vanished");
            av.beta_dot = a.mom_yz / S;
            break;
        case AnsatzTag::PositiveEllipticElliptic: {
            const double rest = a.total_mass() - S;
            if (S < denom_floor || rest < denom_floor)
                throw DegenerateRadius("an angular-velocity denominator vanished");
            av.alpha_dot = a.mom_wx / S;
            av.beta_dot = a.mom_yz / rest;
            break;
        }
        default: { // NegativeEllipticHyperbolic
            const double rest = a.total_mass() + S;
            if (S < denom_floor) throw DegenerateRadius("sum of m_j r_j^2 vanished");
            av.alpha_dot = a.mom_wx / S;
            av.beta_dot = a.mom_yz / rest;
            break;
        }
    }
    return av;
}

double criterion_qij(const Ansatz& a, std::span<const double> st, int i, int j) {
    switch (a.tag) {
        case AnsatzTag::PositiveElliptic: {
            auto v = quad_view(a, st);
            return radius(a, st, i) * radius(a, st, j) *
                       std::cos(a.phase_wx[i] - a.phase_wx[j]) +
                   v.c1[i] * v.c1[j] + v.c2[i] * v.c2[j];
        }
        case AnsatzTag::NegativeElliptic: {
            auto v = quad_view(a, st);
            return radius(a, st, i) * radius(a, st, j) *
                       std::cos(a.phase_wx[i] - a.phase_wx[j]) +
                   v.c1[i] * v.c1[j] - v.c2[i] * v.c2[j];
        }
        case AnsatzTag::NegativeHyperbolic: {
            auto v = quad_view(a, st);
            return v.c1[i] * v.c1[j] + v.c2[i] * v.c2[j] -
                   radius(a, st, i) * radius(a, st, j) *
                       std::cosh(a.phase_yz[i] - a.phase_yz[j]);
        }
        case AnsatzTag::PositiveEllipticElliptic: {
            auto v = pair_view(a, st);
            const double rho_i = std::sqrt(std::max(0.0, 1.0 - v.r[i] * v.r[i]));
            const double rho_j = std::sqrt(std::max(0.0, 1.0 - v.r[j] * v.r[j]));
            return v.r[i] * v.r[j] * std::cos(a.phase_wx[i] - a.phase_wx[j]) +
                   rho_i * rho_j * std::cos(a.phase_yz[i] - a.phase_yz[j]);
        }
        default: { // NegativeEllipticHyperbolic
            auto v = pair_view(a, st);
            const double rho_i = std::sqrt(1.0 + v.r[i] * v.r[i]);
            const double rho_j = std::sqrt(1.0 + v.r[j] * v.r[j]);
            return v.r[i] * v.r[j] * std::cos(a.phase_wx[i] - a.phase_wx[j]) -
                   rho_i * rho_j * std::cosh(a.phase_yz[i] - a.phase_yz[j]);
        }
    }
}

namespace {

// Shared driver for the three quad-layout criteria (PE, NE, NH): the block
// derivative structure is identical, only signs and q_ij differ.
void quad_rhs(const Ansatz& a, std::span<const double> st, std::span<double> d) {
    const Space sp = ansatz_space(a.tag);
    const int n = a.count();
    auto v = quad_view(a, st);

    std::vector<double> r2(n), q(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        r2[i] = squared_radius(a, st, i);
        if (sp.spherical() || a.tag == AnsatzTag::NegativeElliptic) {
            if (r2[i] < radius_floor)
                throw DegenerateRadius("constraint radius vanished for body " +
                                       std::to_string(i));
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            q[i * n + j] = q[j * n + i] = criterion_qij(a, st, i, j);

    const AngularVelocity av = angular_velocity(a, st);
    const double S = radius_sum(a, st);
    const double mom = sp.spherical() || a.tag == AnsatzTag::NegativeElliptic ? a.mom_wx
                                                                              : a.mom_yz;

    for (int i = 0; i < n; ++i) {
        // centrifugal-plus-velocity scalar (q_i'.q_i' in reduced variables)
        const double c1i = v.c1[i], c2i = v.c2[i], d1i = v.d1[i], d2i = v.d2[i];
        const double cross = c1i * d2i - c2i * d1i;
        double Fi;
        if (a.tag == AnsatzTag::PositiveElliptic)
            Fi = (d1i * d1i + d2i * d2i - cross * cross) / r2[i];
        else if (a.tag == AnsatzTag::NegativeElliptic)
            Fi = (cross * cross + d2i * d2i - d1i * d1i) / r2[i];
        else // NegativeHyperbolic: (w s - x p)^2 + p^2 + s^2
            Fi = (cross * cross + d1i * d1i + d2i * d2i) / r2[i];
        Fi += mom * mom * r2[i] / (S * S);

        KahanSum f1, f2;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double qij = q[i * n + j];
            const double ig = inv_gap_32(sp, qij, i, j);
            if (sp.spherical()) {
                f1.add(a.masses[j] * (v.c1[j] - qij * c1i) * ig);
                f2.add(a.masses[j] * (v.c2[j] - qij * c2i) * ig);
            } else {
                f1.add(a.masses[j] * (v.c1[j] + qij * c1i) * ig);
                f2.add(a.masses[j] * (v.c2[j] + qij * c2i) * ig);
            }
        }

        d[i] = d1i;
        d[n + i] = d2i;
        if (sp.spherical()) {
            d[2 * n + i] = f1.value() - Fi * c1i;
            d[3 * n + i] = f2.value() - Fi * c2i;
        } else {
            d[2 * n + i] = f1.value() + Fi * c1i;
            d[3 * n + i] = f2.value() + Fi * c2i;
        }
    }
    d[4 * n] = sp.spherical() || a.tag == AnsatzTag::NegativeElliptic ? av.alpha_dot
                                                                      : av.beta_dot;
}

// PEE and NEH share the (r_i, s_i) layout.
void pair_rhs(const Ansatz& a, std::span<const double> st, std::span<double> d) {
    const Space sp = ansatz_space(a.tag);
    const int n = a.count();
    auto v = pair_view(a, st);
    const bool positive = sp.spherical();

    std::vector<double> rho(n);
    for (int i = 0; i < n; ++i) {
        const double rr = v.r[i] * v.r[i];
        const double rho2 = positive ? 1.0 - rr : 1.0 + rr;
        if (positive && rho2 < radius_floor)
            throw DegenerateRadius("1 - r_i^2 vanished for body " + std::to_string(i));
        rho[i] = std::sqrt(rho2);
    }

    const AngularVelocity av = angular_velocity(a, st);
    const double S = radius_sum(a, st);
    const double M = a.total_mass();
    const double rest = positive ? M - S : M + S;

    // alpha^2 - beta^2 bracket on the sphere; alpha^2 + beta^2 on the
    // hyperboloid (the constraint term enters with the opposite sign there).
    const double a2 = a.mom_wx * a.mom_wx / (S * S);
    const double b2 = a.mom_yz * a.mom_yz / (rest * rest);
    const double bracket = positive ? a2 - b2 : a2 + b2;

    for (int i = 0; i < n; ++i) {
        const double ri = v.r[i], si = v.s[i];
        const double rho2 = positive ? 1.0 - ri * ri : 1.0 + ri * ri;
        double acc = ri * rho2 * bracket;
        acc += (positive ? -1.0 : 1.0) * ri * si * si / rho2;

        KahanSum pairs;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double qij = criterion_qij(a, st, i, j);
            const double ig = inv_gap_32(sp, qij, i, j);
            const double ca = std::cos(a.phase_wx[i] - a.phase_wx[j]);
            const double cb = positive ? std::cos(a.phase_yz[i] - a.phase_yz[j])
                                       : std::cosh(a.phase_yz[i] - a.phase_yz[j]);
            pairs.add(a.masses[j] * (v.r[j] * rho2 * ca - ri * rho[i] * rho[j] * cb) * ig);
        }
        d[i] = si;
        d[n + i] = acc + pairs.value();
    }
    d[2 * n] = av.alpha_dot;
    d[2 * n + 1] = av.beta_dot;
}

} // namespace

void criterion_rhs(const Ansatz& a, std::span<const double> state, std::span<double> deriv) {
    if (static_cast<int>(state.size()) != state_dim(a) ||
        static_cast<int>(deriv.size()) != state_dim(a))
        throw std::invalid_argument("criterion_rhs: bad state size");
    if (elliptic_pair_layout(a.tag))
        pair_rhs(a, state, deriv);
    else
        quad_rhs(a, state, deriv);
}

Configuration lift(const Ansatz& a, std::span<const double> st) {
    if (static_cast<int>(st.size()) != state_dim(a))
        throw std::invalid_argument("lift: bad state size");
    const Space sp = ansatz_space(a.tag);
    const int n = a.count();
    const AngularVelocity av = angular_velocity(a, st);

    Configuration c;
    c.space = sp;
    c.masses = a.masses;
    c.positions.resize(n);
    c.velocities.resize(n);

    if (!elliptic_pair_layout(a.tag)) {
        auto v = quad_view(a, st);
        const double angle = v.angle;
        for (int i = 0; i < n; ++i) {
            const double ri = radius(a, st, i);
            if (a.tag == AnsatzTag::NegativeHyperbolic) {
                // (w, x) explicit; (y, z) on the hyperbolic circle
                const double rho = ri;
                const double rho_dot = (v.c1[i] * v.d1[i] + v.c2[i] * v.d2[i]) / rho;
                const double ph = angle + a.phase_yz[i];
                c.positions[i] = {v.c1[i], v.c2[i], rho * std::sinh(ph), rho * std::cosh(ph)};
                c.velocities[i] = {v.d1[i], v.d2[i],
                                   rho_dot * std::sinh(ph) + rho * av.beta_dot * std::cosh(ph),
                                   rho_dot * std::cosh(ph) + rho * av.beta_dot * std::sinh(ph)};
            } else {
                if (ri < 1e-9)
                    throw DegenerateRadius("lift needs a positive wx radius for body " +
                                           std::to_string(i));
                const double rdot =
                    a.tag == AnsatzTag::PositiveElliptic
                        ? -(v.c1[i] * v.d1[i] + v.c2[i] * v.d2[i]) / ri
                        : (v.c2[i] * v.d2[i] - v.c1[i] * v.d1[i]) / ri;
                const double ph = angle + a.phase_wx[i];
                c.positions[i] = {ri * std::cos(ph), ri * std::sin(ph), v.c1[i], v.c2[i]};
                c.velocities[i] = {rdot * std::cos(ph) - ri * av.alpha_dot * std::sin(ph),
                                   rdot * std::sin(ph) + ri * av.alpha_dot * std::cos(ph),
                                   v.d1[i], v.d2[i]};
            }
        }
    } else {
        auto v = pair_view(a, st);
        const bool positive = sp.spherical();
        for (int i = 0; i < n; ++i) {
            const double ri = v.r[i], si = v.s[i];
            const double rho2 = positive ? 1.0 - ri * ri : 1.0 + ri * ri;
            if (rho2 < radius_floor)
                throw DegenerateRadius("yz radius vanished for body " + std::to_string(i));
            const double rho = std::sqrt(rho2);
            const double rho_dot = (positive ? -1.0 : 1.0) * ri * si / rho;
            const double pa = v.alpha + a.phase_wx[i];
            const double pb = v.beta + a.phase_yz[i];
            c.positions[i].w = ri * std::cos(pa);
            c.positions[i].x = ri * std::sin(pa);
            c.velocities[i].w = si * std::cos(pa) - ri * av.alpha_dot * std::sin(pa);
            c.velocities[i].x = si * std::sin(pa) + ri * av.alpha_dot * std::cos(pa);
            if (positive) {
                c.positions[i].y = rho * std::cos(pb);
                c.positions[i].z = rho * std::sin(pb);
                c.velocities[i].y = rho_dot * std::cos(pb) - rho * av.beta_dot * std::sin(pb);
                c.velocities[i].z = rho_dot * std::sin(pb) + rho * av.beta_dot * std::cos(pb);
            } else {
                c.positions[i].y = rho * std::sinh(pb);
                c.positions[i].z = rho * std::cosh(pb);
                c.velocities[i].y = rho_dot * std::sinh(pb) + rho * av.beta_dot * std::cosh(pb);
                c.velocities[i].z = rho_dot * std::cosh(pb) + rho * av.beta_dot * std::sinh(pb);
            }
        }
    }
    return c;
}

Configuration lift(const Ansatz& a, std::span<const double> core, double alpha0, double beta0) {
    if (static_cast<int>(core.size()) != core_dim(a))
        throw std::invalid_argument("lift: bad core size");
    std::vector<double> st(core.begin(), core.end());
    if (elliptic_pair_layout(a.tag)) {
        st.push_back(alpha0);
        st.push_back(beta0);
    } else {
        st.push_back(a.tag == AnsatzTag::NegativeHyperbolic ? beta0 : alpha0);
    }
    return lift(a, st);
}

double reduced_energy(const Ansatz& a, std::span<const double> st) {
    const Space sp = ansatz_space(a.tag);
    const int n = a.count();
    const double S = radius_sum(a, st);
    const double M = a.total_mass();

    KahanSum h;
    if (!elliptic_pair_layout(a.tag)) {
        auto v = quad_view(a, st);
        for (int i = 0; i < n; ++i) {
            const double r2 = squared_radius(a, st, i);
            const double cross = v.c1[i] * v.d2[i] - v.c2[i] * v.d1[i];
            double kin;
            if (a.tag == AnsatzTag::PositiveElliptic)
                kin = v.d1[i] * v.d1[i] + v.d2[i] * v.d2[i] - cross * cross;
            else if (a.tag == AnsatzTag::NegativeElliptic)
                kin = cross * cross + v.d2[i] * v.d2[i] - v.d1[i] * v.d1[i];
            else
                kin = cross * cross + v.d1[i] * v.d1[i] + v.d2[i] * v.d2[i];
            h.add(0.5 * a.masses[i] * kin / r2);
        }
        const double mom =
            a.tag == AnsatzTag::NegativeHyperbolic ? a.mom_yz : a.mom_wx;
        h.add(0.5 * mom * mom / S);
    } else {
        auto v = pair_view(a, st);
        for (int i = 0; i < n; ++i) {
            const double rho2 = sp.spherical() ? 1.0 - v.r[i] * v.r[i] : 1.0 + v.r[i] * v.r[i];
            h.add(0.5 * a.masses[i] * v.s[i] * v.s[i] / rho2);
        }
        const double rest = sp.spherical() ? M - S : M + S;
        h.add(0.5 * a.mom_wx * a.mom_wx / S);
        h.add(0.5 * a.mom_yz * a.mom_yz / rest);
    }

    // potential part: -U = -sum sigma m_i m_j q_ij / gap^{1/2}
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double qij = criterion_qij(a, st, i, j);
            const double gap = pair_gap_checked(sp, qij, i, j);
            h.add(-sp.sigma * a.masses[i] * a.masses[j] * qij / std::sqrt(gap));
        }
    return h.value();
}

double angular_residual(const Ansatz& a, std::span<const double> st) {
    const Space sp = ansatz_space(a.tag);
    const int n = a.count();
    const double S = radius_sum(a, st);
    const double M = a.total_mass();

    std::vector<double> rr(n), rdot(n);
    if (!elliptic_pair_layout(a.tag)) {
        auto v = quad_view(a, st);
        for (int i = 0; i < n; ++i) {
            rr[i] = radius(a, st, i);
            if (a.tag == AnsatzTag::PositiveElliptic)
                rdot[i] = -(v.c1[i] * v.d1[i] + v.c2[i] * v.d2[i]) / rr[i];
            else if (a.tag == AnsatzTag::NegativeElliptic)
                rdot[i] = (v.c2[i] * v.d2[i] - v.c1[i] * v.d1[i]) / rr[i];
            else
                rdot[i] = (v.c1[i] * v.d1[i] + v.c2[i] * v.d2[i]) / rr[i];
        }
    } else {
        auto v = pair_view(a, st);
        for (int i = 0; i < n; ++i) {
            rr[i] = v.r[i];
            rdot[i] = v.s[i];
        }
    }

    double S_dot = 0;
    for (int i = 0; i < n; ++i) S_dot += 2.0 * a.masses[i] * rr[i] * rdot[i];

    auto second_order_residual = [&](double mom, double denom, double denom_dot,
                                     const std::vector<double>& rad,
                                     const std::vector<double>& rad_dot,
                                     const std::vector<double>& phases, bool hyp_angle) {
        const double rate = mom / denom;
        const double accel = -mom * denom_dot / (denom * denom);
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            KahanSum rhs;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double qij = criterion_qij(a, st, i, j);
                const double ig = inv_gap_32(sp, qij, i, j);
                const double dphi = phases[j] - phases[i];
                rhs.add(a.masses[j] * rad[j] * (hyp_angle ? std::sinh(dphi) : std::sin(dphi)) *
                        ig);
            }
            worst = std::max(worst,
                             std::abs(rad[i] * accel + 2.0 * rad_dot[i] * rate - rhs.value()));
        }
        return worst;
    };

    double worst = 0;
    switch (a.tag) {
        case AnsatzTag::PositiveElliptic:
        case AnsatzTag::NegativeElliptic:
            worst = second_order_residual(a.mom_wx, S, S_dot, rr, rdot, a.phase_wx, false);
            break;
        case AnsatzTag::NegativeHyperbolic:
            worst = second_order_residual(a.mom_yz, S, S_dot, rr, rdot, a.phase_yz, true);
            break;
        case AnsatzTag::PositiveEllipticElliptic:
        case AnsatzTag::NegativeEllipticHyperbolic: {
            const bool positive = sp.spherical();
            worst = second_order_residual(a.mom_wx, S, S_dot, rr, rdot, a.phase_wx, false);
            std::vector<double> rho(n), rho_dot(n);
            for (int i = 0; i < n; ++i) {
                const double rho2 = positive ? 1.0 - rr[i] * rr[i] : 1.0 + rr[i] * rr[i];
                rho[i] = std::sqrt(rho2);
                rho_dot[i] = (positive ? -1.0 : 1.0) * rr[i] * rdot[i] / rho[i];
            }
            const double denom = positive ? M - S : M + S;
            const double denom_dot = positive ? -S_dot : S_dot;
            worst = std::max(worst, second_order_residual(a.mom_yz, denom, denom_dot, rho,
                                                          rho_dot, a.phase_yz, !positive));
            break;
        }
        default: break;
    }
    return worst;
}

ReducedSystem criterion_system(const Ansatz& a) {
    ReducedSystem sys;
    sys.dim = state_dim(a);
    sys.label = std::string(ansatz_name(a.tag)) + " criterion";
    sys.space = ansatz_space(a.tag);
    sys.rhs = [a](std::span<const double> y, std::span<double> dy) -> bool {
        try {
            criterion_rhs(a, y, dy);
        } catch (const Error&) {
            return false;
        }
        return true;
    };
    sys.in_domain = [a](std::span<const double> y) -> bool {
        const int n = a.count();
        switch (a.tag) {
            case AnsatzTag::PositiveElliptic:
                for (int i = 0; i < n; ++i)
                    if (y[i] * y[i] + y[n + i] * y[n + i] >= 1.0) return false;
                return true;
            case AnsatzTag::NegativeElliptic:
                for (int i = 0; i < n; ++i)
                    if (y[n + i] <= 0 || y[n + i] * y[n + i] - y[i] * y[i] - 1.0 <= 0)
                        return false;
                return true;
            case AnsatzTag::PositiveEllipticElliptic: {
                double S = 0;
                for (int i = 0; i < n; ++i) {
                    if (y[i] < 0 || y[i] >= 1.0) return false;
                    S += a.masses[i] * y[i] * y[i];
                }
                return S > 0 && a.total_mass() - S > 0;
            }
            case AnsatzTag::NegativeEllipticHyperbolic: {
                double S = 0;
                for (int i = 0; i < n; ++i) {
                    if (y[i] < 0) return false;
                    S += a.masses[i] * y[i] * y[i];
                }
                return S > 0;
            }
            default: return true; // NegativeHyperbolic: (w, x) unconstrained
        }
    };
    sys.lift = [a](std::span<const double> y) { return lift(a, y); };
    return sys;
}

std::string_view orbit_class_name(OrbitClass c) {
    switch (c) {
        case OrbitClass::RelativeEquilibrium: return "RelativeEquilibrium";
        case OrbitClass::Rotopulsator: return "Rotopulsator";
        default: return "Inconclusive";
    }
}

OrbitClass classify(const Trajectory& traj) {
    if (traj.configs.size() < 16)
        throw std::invalid_argument("classify needs at least 16 ambient samples");

    const int n = traj.configs.front().count();
    const PairGram g0 = pair_gram(traj.configs.front());
    double max_dev = 0;
    for (const Configuration& c : traj.configs) {
        const PairGram g = pair_gram(c);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                max_dev = std::max(max_dev, std::abs(g(i, j) - g0(i, j)));
    }

    if (max_dev <= classify_re_tol) return OrbitClass::RelativeEquilibrium;

    double max_wx = 0, max_yz = 0;
    for (const Integrals& in : traj.integrals) {
        max_wx = std::max(max_wx, std::abs(in.c_wx));
        max_yz = std::max(max_yz, std::abs(in.c_yz));
    }
    const bool rotating = max_wx > rotation_tol || max_yz > rotation_tol;
    if (max_dev > classify_pulse_tol && rotating) return OrbitClass::Rotopulsator;
    return OrbitClass::Inconclusive;
}

} // namespace curved
