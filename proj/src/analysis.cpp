#include "curved/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curved/rotopulse.hpp"

namespace curved {

double Polynomial::eval(double x) const {
    double acc = 0;
    for (size_t k = coef.size(); k-- > 0;) acc = acc * x + coef[k];
    return acc;
}

double Polynomial::eval_noise(double x) const {
    double acc = 0;
    const double ax = std::abs(x);
    for (size_t k = coef.size(); k-- > 0;) acc = acc * ax + std::abs(coef[k]);
    return 4.0 * static_cast<double>(coef.size()) * 2.220446049250313e-16 * acc;
}

int Polynomial::sign_at(double x) const {
    const double v = eval(x);
    if (std::abs(v) <= eval_noise(x)) return 0;
    return v > 0 ? 1 : -1;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    if (coef.size() <= 1) {
        d.coef = {0.0};
        return d;
    }
    d.coef.resize(coef.size() - 1);
    for (size_t k = 1; k < coef.size(); ++k) d.coef[k - 1] = coef[k] * static_cast<double>(k);
    d.trim();
    return d;
}

void Polynomial::trim() {
    while (coef.size() > 1 && std::abs(coef.back()) <= 1e-14) coef.pop_back();
    if (coef.empty()) coef = {0.0};
}

int descartes_positive_count(const Polynomial& p) {
    int changes = 0;
    int last = 0;
    for (double c : p.coef) {
        if (c == 0) continue;
        const int s = c > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

namespace {

// Sign variations of the derivative sequence p, p', p'', ... at x
// (Budan-Fourier). V(lo) - V(hi) bounds the root count in (lo, hi].
// Ambiguous (noise-level) values are skipped like exact zeros.
int derivative_sequence_variations(const std::vector<Polynomial>& seq, double x) {
    int changes = 0, last = 0;
    for (const Polynomial& p : seq) {
        const int s = p.sign_at(x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

double refine_root(const Polynomial& p, const Polynomial& dp, double lo, double hi) {
    if (lo == hi) return lo; // exact hit during isolation
    double flo = p.eval(lo);
    // bisection to a tight bracket
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p.eval(mid);
        if (fm == 0) {
            lo = hi = mid;
            break;
        }
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // Newton polish
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        const double f = p.eval(x);
        const double d = dp.eval(x);
        if (d == 0) break;
        const double step = f / d;
        const double xn = x - step;
        if (xn < lo || xn > hi) break;
        x = xn;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

void isolate_recursive(const Polynomial& p, const std::vector<Polynomial>& seq, double lo,
                       double hi, int depth, std::vector<std::pair<double, double>>& out) {
    if (!(lo < hi)) return;
    const int slo = p.sign_at(lo), shi = p.sign_at(hi);
    const bool sign_change = slo * shi < 0;

    // the variation bound can be perturbed by roundoff near grazing roots;
    // a definite sign change is ground truth
    int bound = derivative_sequence_variations(seq, lo) -
                derivative_sequence_variations(seq, hi);
    if (sign_change) bound = std::max(bound, 1);
    if (bound <= 0) return;
    if (bound == 1) {
        if (sign_change) out.emplace_back(lo, hi);
        return; // bound 1 without a definite sign change: grazing pair/noise
    }
    if (depth > 60 || hi - lo < 1e-13 * std::max(1.0, std::abs(hi))) {
        if (sign_change) out.emplace_back(lo, hi);
        return; // unresolvable cluster / even-multiplicity root
    }
    // split where the polynomial has a definite sign; fall back to a lopsided
    // cut when the midpoint sits on a root or inside its noise band
    double mid = 0.5 * (lo + hi);
    if (p.sign_at(mid) == 0) mid = lo + 0.61803398874989484 * (hi - lo);
    if (p.sign_at(mid) == 0) mid = lo + 0.27639320225002106 * (hi - lo);
    isolate_recursive(p, seq, lo, mid, depth + 1, out);
    isolate_recursive(p, seq, mid, hi, depth + 1, out);
}

} // namespace

double root_magnitude_bound(const Polynomial& p) {
    const double lead = std::abs(p.coef.back());
    double worst = 0;
    for (size_t k = 0; k + 1 < p.coef.size(); ++k)
        worst = std::max(worst, std::abs(p.coef[k]) / lead);
    return 1.0 + worst;
}

std::vector<RootBracket> isolate_real_roots(const Polynomial& p, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("isolate_real_roots: empty interval");
    Polynomial q = p;
    q.trim();
    if (q.degree() == 0) return {};

    // perturb endpoints that sit on (or within noise of) a root
    double a = lo, b = hi;
    const double eps = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    for (int k = 0; k < 4 && q.sign_at(a) == 0; ++k) a += eps;
    for (int k = 0; k < 4 && q.sign_at(b) == 0; ++k) b -= eps;

    std::vector<Polynomial> seq;
    seq.push_back(q);
    while (seq.back().degree() > 0) seq.push_back(seq.back().derivative());

    std::vector<std::pair<double, double>> brackets;
    isolate_recursive(q, seq, a, b, 0, brackets);

    const Polynomial dq = q.derivative();
    std::vector<RootBracket> roots;
    roots.reserve(brackets.size());
    for (auto [l, h] : brackets) {
        RootBracket rb;
        rb.lo = l;
        rb.hi = h;
        rb.root = refine_root(q, dq, l, h);
        rb.residual = std::abs(q.eval(rb.root));
        roots.push_back(rb);
    }
    std::sort(roots.begin(), roots.end(),
              [](const RootBracket& x, const RootBracket& y) { return x.root < y.root; });
    return roots;
}

ConfinementReport confinement_report(const Trajectory& traj, Space space) {
    if (traj.configs.empty())
        throw std::invalid_argument("confinement_report needs ambient samples");
    const int n = traj.configs.front().count();

    ConfinementReport rep;
    rep.variation.assign(n, 0.0);

    std::vector<double> r_min(n, 1e300), r_max(n, -1e300);
    std::vector<double> rho_min(n, 1e300), rho_max(n, -1e300);
    for (const Configuration& c : traj.configs) {
        for (int i = 0; i < n; ++i) {
            double r, rho;
            if (space.spherical()) {
                const TorusCoords tc = torus_coords(c.positions[i]);
                r = tc.r;
                rho = tc.rho;
            } else {
                const CylinderCoords cc = cylinder_coords(c.positions[i]);
                r = cc.r;
                rho = cc.rho;
            }
            r_min[i] = std::min(r_min[i], r);
            r_max[i] = std::max(r_max[i], r);
            rho_min[i] = std::min(rho_min[i], rho);
            rho_max[i] = std::max(rho_max[i], rho);
        }
    }

    double worst = -1;
    for (int i = 0; i < n; ++i) {
        rep.variation[i] = std::max(r_max[i] - r_min[i], rho_max[i] - rho_min[i]);
        if (rep.variation[i] > worst) {
            worst = rep.variation[i];
            rep.worst_body = i;
        }
    }
    rep.verdict = worst <= confinement_tol ? Confinement::AllConfined
                                           : Confinement::CrossesContinuum;
    return rep;
}

std::array<bool, 6> rotation_signature(const Trajectory& traj) {
    if (traj.integrals.empty())
        throw std::invalid_argument("rotation_signature needs recorded integrals");
    std::array<double, 6> peak{};
    for (const Integrals& in : traj.integrals)
        for (int k = 0; k < 6; ++k) peak[k] = std::max(peak[k], std::abs(in[k + 1]));
    std::array<bool, 6> sig{};
    for (int k = 0; k < 6; ++k) sig[k] = peak[k] > rotation_tol;
    return sig;
}

} // namespace curved
