#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "curved/analysis.hpp"
#include "curved/families.hpp"

using namespace curved;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("descartes sign changes") {
    CHECK(descartes_positive_count(Polynomial({-1.0, 1.0})) == 1); // z - 1
    CHECK(descartes_positive_count(pe_lagrangian_energy_polynomial(1, 0)) == 2);
    CHECK(descartes_positive_count(pe_lagrangian_energy_polynomial(1, 10)) == 1);
    // exactly at the regime boundary the constant term vanishes
    Polynomial boundary = pe_lagrangian_energy_polynomial(1, 0);
    boundary.coef[0] = 0.0; // h^2 = 75 m^4
    boundary.coef[2] = -8.0 * 75.0;
    boundary.coef[4] = -18.0 * (15.0 + 75.0);
    boundary.coef[8] = 27.0 * (9.0 + 75.0);
    CHECK(descartes_positive_count(boundary) == 1);
}

TEST_CASE("root isolation on constructed polynomials") {
    {
        // (z - 1/2)(z - 3/4)
        const Polynomial p({0.375, -1.25, 1.0});
        const auto roots = isolate_real_roots(p, 0.0, 1.0);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].root == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(roots[1].root == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(roots[0].residual < 1e-13);
    }
    {
        // double root: even multiplicity stays invisible, consistent with
        // the parity of the sign-variation bound
        const Polynomial p({0.09, -0.6, 1.0}); // (z - 0.3)^2
        const auto roots = isolate_real_roots(p, 0.0, 1.0);
        CHECK(roots.empty());
        CHECK(descartes_positive_count(p) == 2);
    }
    {
        // endpoint roots are nudged inside
        const Polynomial p({0.0, -1.0, 1.0}); // z(z - 1)
        const auto roots = isolate_real_roots(p, 0.0, 1.0);
        CHECK(roots.empty());
    }
    {
        const Polynomial p = pe_lagrangian_momentum_polynomial(1, 1);
        const auto roots = isolate_real_roots(p, 0.0, 1.0);
        REQUIRE(roots.size() == 1);
        CHECK(std::abs(p.eval(roots[0].root)) < 1e-9);
        const double z = roots[0].root;
        CHECK(std::abs(1728 * (1 - z * z) - std::pow(1 + 3 * z * z, 3.0)) < 1e-9);
    }
    {
        const Polynomial q = ne_lagrangian_energy_polynomial(1, 4);
        const auto roots = isolate_real_roots(q, 1.0, root_magnitude_bound(q));
        REQUIRE(roots.size() == 1);
        CHECK(roots[0].root > 1.0);
    }
}

TEST_CASE("isolated counts respect the sign-variation bound") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        // build a polynomial from known random roots
        const int deg = 2 + static_cast<int>(std::abs(u(rng)) * 2);
        std::vector<double> roots;
        std::vector<double> coef = {1.0};
        for (int k = 0; k < deg; ++k) {
            const double r = u(rng);
            roots.push_back(r);
            std::vector<double> next(coef.size() + 1, 0.0);
            for (size_t i = 0; i < coef.size(); ++i) {
                next[i + 1] += coef[i];
                next[i] -= r * coef[i];
            }
            coef = next;
        }
        const Polynomial p(coef);
        const int bound = descartes_positive_count(p);
        int expect = 0;
        for (double r : roots)
            if (r > 1e-9) ++expect;
        CHECK(expect <= bound);
        CHECK((bound - expect) % 2 == 0);
        const auto found = isolate_real_roots(p, 1e-9, root_magnitude_bound(p));
        // all roots are simple with probability one
        CHECK(static_cast<int>(found.size()) == expect);
    }
}

TEST_CASE("confinement and rotation signature of reference orbits") {
    IntegratorSettings st;
    st.t_end = 8.0;
    st.rel_tol = 1e-11;
    st.abs_tol = 1e-13;

    {
        // rigid elliptic-elliptic triangle: confined and rotating in wx and
        // yz. Its equilibria spin by the diagonal torus element (the two
        // rates coincide there), which carries angular momentum in the
        // mixed planes as well: with alpha0 = beta0 = 0, c_wz and c_xy are
        // nonzero while c_wy and c_xz vanish.
        FamilySpec spec{Family::PeeLagrangian, {}};
        spec.p.mom_wx = 1;
        spec.p.mom_yz = 1;
        const ReducedSystem sys = family_system(spec, std::array{1 / std::sqrt(2.0), 0.0});
        const std::vector<double> y0 = {1 / std::sqrt(2.0), 0.0, 0.0, 0.0};
        const Trajectory traj = simulate_reduced(sys, y0, st, 65);
        REQUIRE(traj.completed);
        const ConfinementReport rep = confinement_report(traj, Space::sphere());
        CHECK(rep.verdict == Confinement::AllConfined);
        CHECK(classify(traj) == OrbitClass::RelativeEquilibrium);
        const auto sig = rotation_signature(traj);
        CHECK(sig == std::array<bool, 6>{true, false, true, true, false, true});
    }
    {
        // the elliptic-elliptic binary does carry momentum in wx and yz
        // only: its opposite wx phases cancel the mixed planes pairwise
        FamilySpec spec{Family::PeeBinary, {}};
        spec.p.mom_wx = 1;
        spec.p.mom_yz = 1;
        const ReducedSystem sys = family_system(spec, std::array{0.6, 0.0});
        const std::vector<double> y0 = {0.6, 0.0, 0.0, 0.0};
        const Trajectory traj = simulate_reduced(sys, y0, st, 65);
        REQUIRE(traj.completed);
        const auto sig = rotation_signature(traj);
        CHECK(sig == std::array<bool, 6>{true, false, false, false, false, true});
    }
    {
        // pulsating spherical Lagrangian triangle crosses tori; only the
        // wx-plane carries momentum
        FamilySpec spec{Family::PeLagrangian, {}};
        spec.p.mom_wx = 1;
        const ReducedSystem sys = family_system(spec, std::array{0.5, 0.0});
        const std::vector<double> y0 = {0.5, 0.0, 0.0};
        const Trajectory traj = simulate_reduced(sys, y0, st, 65);
        REQUIRE(traj.completed);
        const ConfinementReport rep = confinement_report(traj, Space::sphere());
        CHECK(rep.verdict == Confinement::CrossesContinuum);
        CHECK(rep.variation[rep.worst_body] > 1e-3);
        CHECK(classify(traj) == OrbitClass::Rotopulsator);
        const auto sig = rotation_signature(traj);
        CHECK(sig == std::array<bool, 6>{true, false, false, false, false, false});
    }
    {
        // pulsating hyperbolic Eulerian binary: only the yz-plane rotates
        FamilySpec spec{Family::NhBinary, {}};
        spec.p.mom_yz = 1;
        const ReducedSystem sys = family_system(spec, std::array{1.8, 0.0});
        const std::vector<double> y0 = {1.8, 0.0, 0.0};
        const Trajectory traj = simulate_reduced(sys, y0, st, 65);
        REQUIRE(traj.completed);
        const ConfinementReport rep = confinement_report(traj, Space::hyperbolic());
        CHECK(rep.verdict == Confinement::CrossesContinuum);
        const auto sig = rotation_signature(traj);
        CHECK(sig == std::array<bool, 6>{false, false, false, false, false, true});
    }
}

TEST_CASE("random pulsating starts always cross a continuum of tori") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> z0(0.2, 0.6);
    IntegratorSettings st;
    st.t_end = 6.0;
    FamilySpec spec{Family::PeLagrangian, {}};
    spec.p.mom_wx = 1;
    for (int k = 0; k < 5; ++k) {
        const Configuration start = family_lift(spec, std::array{z0(rng), 0.0}, 0.0, 0.0);
        const Trajectory traj = simulate_full(start, st, 101);
        REQUIRE(traj.completed);
        const ConfinementReport rep = confinement_report(traj, Space::sphere());
        CHECK(rep.verdict == Confinement::CrossesContinuum);
        CHECK(rep.variation[rep.worst_body] > 1e-3);
    }
}

TEST_SUITE_END();
