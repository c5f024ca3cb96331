#include <doctest.h>

#include <cmath>
#include <random>

#include "curved/families.hpp"

using namespace curved;

TEST_SUITE_BEGIN("families");

namespace {

FamilySpec make_spec(Family f, double m, double wx, double yz,
                     std::optional<double> h = std::nullopt) {
    FamilySpec spec{f, {}};
    spec.p.m = m;
    spec.p.mom_wx = wx;
    spec.p.mom_yz = yz;
    spec.p.h = h;
    return spec;
}

} // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(make_spec(Family::PeLagrangian, 1, 0, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(make_spec(Family::PeeBinary, 1, 1, 0)), std::invalid_argument);
    CHECK_THROWS_AS(validate(make_spec(Family::NeLagrangian, 1, 0, 0)),
                    std::invalid_argument);
    CHECK_NOTHROW(validate(make_spec(Family::NeLagrangian, 1, 0, 0, 2.0)));
    CHECK_THROWS_AS(validate(make_spec(Family::PeLagrangian, -1, 1, 0)),
                    std::invalid_argument);
    CHECK(family_from_name("pee-lagrangian").has_value());
    CHECK(!family_from_name("nonsense").has_value());
}

TEST_CASE("right-hand side reference points") {
    {
        // the origin is an equilibrium of the spherical Lagrangian system
        const FamilySpec spec = make_spec(Family::PeLagrangian, 1, 1, 0);
        std::array<double, 2> d{};
        family_rhs(spec, std::array{0.0, 0.0}, d);
        CHECK(d[0] == 0.0);
        CHECK(d[1] == 0.0);
    }
    {
        // equal momenta: equilibrium radius 1/sqrt(2)
        const FamilySpec spec = make_spec(Family::PeeLagrangian, 1, 1, 1);
        std::array<double, 2> d{};
        family_rhs(spec, std::array{1.0 / std::sqrt(2.0), 0.0}, d);
        CHECK(std::abs(d[1]) < 1e-15);
    }
}

TEST_CASE("fixed points with closed forms") {
    {
        const auto fps = fixed_points(make_spec(Family::PeeLagrangian, 1, 1, 1));
        REQUIRE(fps.size() == 1);
        CHECK(std::abs(fps[0].state[0] - 1 / std::sqrt(2.0)) < 1e-14);
        CHECK(fps[0].residual < 1e-13);
        // a center: purely imaginary eigenvalue pair
        CHECK(fps[0].eig[0].real() == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(fps[0].eig[0].imag() > 0.1);
    }
    {
        const auto fps = fixed_points(make_spec(Family::PeeLagrangian, 1, 2, 1));
        REQUIRE(fps.size() == 1);
        CHECK(std::abs(fps[0].state[0] - std::sqrt(2.0 / 3.0)) < 1e-12);
        REQUIRE(fps[0].closed_form_residual.has_value());
        CHECK(std::abs(*fps[0].closed_form_residual) < 1e-12);
    }
    {
        // momentum-parameterized spherical Lagrangian family: origin plus
        // one equilibrium radius
        const auto fps = fixed_points(make_spec(Family::PeLagrangian, 1, 1, 0));
        REQUIRE(fps.size() == 2);
        CHECK(fps[0].state[0] == 0.0);
        const double z = fps[1].state[0];
        CHECK(z > 0.9);
        CHECK(z < 1.0);
        const double defect = 1728 * (1 - z * z) - std::pow(1 + 3 * z * z, 3.0);
        CHECK(std::abs(defect) < 1e-9);
        REQUIRE(fps[1].closed_form_residual.has_value());
        CHECK(std::abs(*fps[1].closed_form_residual) < 1e-9);
    }
    {
        // collinear hyperbolic binary: X = x^2 solves c^4 X^2 - m^6 X - m^6
        const auto fps = fixed_points(make_spec(Family::NhBinary, 1, 0, 1));
        REQUIRE(fps.size() == 1);
        const double x = fps[0].state[0];
        CHECK(std::abs(std::pow(x, 4) - x * x - 1) < 1e-12);
        const double golden = (1 + std::sqrt(5.0)) / 2;
        CHECK(x == doctest::Approx(std::sqrt(golden)).epsilon(1e-12));
    }
    {
        // energy-parameterized hyperbolic Lagrangian family
        CHECK(fixed_points(make_spec(Family::NeLagrangian, 1, 0, 0, 1.0)).empty());
        CHECK(fixed_points(make_spec(Family::NeLagrangian, 1, 0, 0, 4.0)).empty());
        const auto fps = fixed_points(make_spec(Family::NeLagrangian, 1, 0, 0, -4.0));
        REQUIRE(fps.size() == 1);
        CHECK(fps[0].state[0] > 1.0);
        REQUIRE(fps[0].closed_form_residual.has_value());
        CHECK(std::abs(*fps[0].closed_form_residual) < 1e-7);
    }
    {
        // collinear elliptic-hyperbolic triple: one equilibrium, a center
        const auto fps = fixed_points(make_spec(Family::NehEulerian3, 1, 1, 1));
        REQUIRE(fps.size() == 1);
        CHECK(fps[0].eig[0].real() == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(fps[0].eig[0].imag() > 0.0);
    }
}

TEST_CASE("analytic Jacobians match finite differences") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.25, 0.75), uv(-0.4, 0.4);

    auto check_jacobian = [](const FamilySpec& spec, double x, double s) {
        const auto jac = family_jacobian(spec, std::array{x, s});
        const double eps = 1e-6;
        auto f = [&](double xx, double ss) {
            std::array<double, 2> d{};
            family_rhs(spec, std::array{xx, ss}, d);
            return d[1];
        };
        const double fd_x = (f(x + eps, s) - f(x - eps, s)) / (2 * eps);
        const double fd_s = (f(x, s + eps) - f(x, s - eps)) / (2 * eps);
        const double scale_x = std::max(1.0, std::abs(fd_x));
        const double scale_s = std::max(1.0, std::abs(fd_s));
        CHECK(std::abs(jac[1][0] - fd_x) / scale_x < 1e-6);
        CHECK(std::abs(jac[1][1] - fd_s) / scale_s < 1e-6);
        CHECK(jac[0][0] == 0.0);
        CHECK(jac[0][1] == 1.0);
    };

    for (int k = 0; k < 10; ++k) {
        check_jacobian(make_spec(Family::PeLagrangian, 1, 1, 0), u(rng), uv(rng));
        check_jacobian(make_spec(Family::PeeBinary, 1, 1, -1), u(rng), uv(rng));
        check_jacobian(make_spec(Family::PeeLagrangian, 1.2, 1, 2), u(rng), uv(rng));
        check_jacobian(make_spec(Family::NeLagrangian, 1, 0, 0, -4.0), 1.2 + u(rng), uv(rng));
        check_jacobian(make_spec(Family::NhBinary, 1, 0, 1), 0.8 + u(rng), uv(rng));
        check_jacobian(make_spec(Family::NhEulerian3, 1, 0, 2.2), 2.0 + u(rng), uv(rng));
        check_jacobian(make_spec(Family::NehBinary, 1, 1, 1), 0.3 + u(rng), uv(rng));
        check_jacobian(make_spec(Family::NehEulerian3, 1, 1, 1), 0.3 + u(rng), uv(rng));
    }
}

TEST_CASE("family energies match the lifted energy integral") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.3, 0.7), uv(-0.3, 0.3);
    for (int k = 0; k < 15; ++k) {
        auto check_energy = [&](const FamilySpec& spec, double x, double s) {
            const std::array<double, 2> core{x, s};
            const ReducedSystem sys = family_system(spec, core);
            std::vector<double> y0 = {x, s};
            while (static_cast<int>(y0.size()) < sys.dim) y0.push_back(0.37);
            const Configuration c = sys.lift(y0);
            CHECK(energy_on_family(spec, core) ==
                  doctest::Approx(integrals(c).h).epsilon(1e-9));
        };
        check_energy(make_spec(Family::PeLagrangian, 1, 1, 0), u(rng), uv(rng));
        check_energy(make_spec(Family::PeeBinary, 1, 1, -1), u(rng), uv(rng));
        check_energy(make_spec(Family::PeeLagrangian, 1.1, 1, 2), u(rng), uv(rng));
        check_energy(make_spec(Family::NeLagrangian, 1, 2, 0), 1.2 + u(rng), uv(rng));
        check_energy(make_spec(Family::NhBinary, 1, 0, 1), 0.8 + u(rng), uv(rng));
        check_energy(make_spec(Family::NhEulerian3, 1, 0, 2.2), 2.0 + u(rng), uv(rng));
        check_energy(make_spec(Family::NehBinary, 1, 1, 1), 0.5 + u(rng), uv(rng));
        check_energy(make_spec(Family::NehEulerian3, 1, 1, 1), 0.5 + u(rng), uv(rng));
    }
}

TEST_CASE("elliptic-elliptic equilibrium energy") {
    const FamilySpec spec = make_spec(Family::PeeLagrangian, 1, 1, 1);
    const double h = energy_on_family(spec, std::array{1 / std::sqrt(2.0), 0.0});
    CHECK(h == doctest::Approx(2.0 / 3.0 + std::sqrt(3.0)).epsilon(1e-14));

    // positivity on random admissible states
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> r(0.05, 0.95), v(-3, 3);
    for (int k = 0; k < 200; ++k)
        CHECK(energy_on_family(spec, std::array{r(rng), v(rng)}) > 0);
}

TEST_CASE("symmetry ratios stay constant along criterion trajectories") {
    IntegratorSettings st;
    st.t_end = 5.0;
    st.rel_tol = 1e-11;
    st.abs_tol = 1e-13;
    {
        // oblique spherical Lagrangian data: y = gamma z is preserved
        FamilySpec spec = make_spec(Family::PeLagrangian, 1, 1, 0);
        spec.p.gamma = 0.3;
        const Ansatz a = family_ansatz(spec);
        const auto y0 = family_to_criterion_state(spec, std::array{0.5, 0.0}, 0.0, 0.0);
        const Trajectory traj = simulate_reduced(criterion_system(a), y0, st, 41);
        REQUIRE(traj.completed);
        for (const auto& s : traj.reduced_states)
            for (int i = 0; i < 3; ++i) CHECK(std::abs(s[i] / s[3 + i] - 0.3) < 1e-8);
    }
    {
        // collinear hyperbolic binary: w = zeta x is preserved
        FamilySpec spec = make_spec(Family::NhBinary, 1, 0, 1);
        spec.p.zeta = 0.4;
        const Ansatz a = family_ansatz(spec);
        const auto y0 = family_to_criterion_state(spec, std::array{1.8, 0.0}, 0.0, 0.0);
        const Trajectory traj = simulate_reduced(criterion_system(a), y0, st, 41);
        REQUIRE(traj.completed);
        for (const auto& s : traj.reduced_states)
            for (int i = 0; i < 2; ++i) CHECK(std::abs(s[i] / s[2 + i] - 0.4) < 1e-8);
    }
    {
        // collinear hyperbolic triple: outer bodies keep w = zeta x, the
        // central one stays pinned on the axis
        FamilySpec spec = make_spec(Family::NhEulerian3, 1, 0, 2.2);
        spec.p.zeta = 0.25;
        const Ansatz a = family_ansatz(spec);
        // start outside the equilibrium radius so the triple drifts apart
        // instead of collapsing onto the central body
        const auto y0 = family_to_criterion_state(spec, std::array{4.0, 0.05}, 0.0, 0.0);
        const Trajectory traj = simulate_reduced(criterion_system(a), y0, st, 41);
        REQUIRE(traj.completed);
        for (const auto& s : traj.reduced_states) {
            CHECK(std::abs(s[0]) < 1e-12); // w_1
            CHECK(std::abs(s[3]) < 1e-12); // x_1
            for (int i = 1; i < 3; ++i) CHECK(std::abs(s[i] / s[3 + i] - 0.25) < 1e-8);
        }
    }
}

TEST_CASE("lifted fixed points are exact ambient equilibria") {
    // at a fixed point the lift must rotate rigidly: the ambient
    // acceleration equals the rotation generator squared applied to the
    // positions. This pins the equilibrium property at machine precision
    // without integrating through transverse instabilities.
    auto check_rigid = [&](const FamilySpec& spec) {
        const auto fps = fixed_points(spec);
        REQUIRE(!fps.empty());
        for (const auto& fp : fps) {
            if (fp.state[0] == 0.0) continue; // origin handled separately
            const ReducedSystem sys = family_system(spec, fp.state);
            std::vector<double> y0 = {fp.state[0], fp.state[1]};
            while (static_cast<int>(y0.size()) < sys.dim) y0.push_back(0.0);
            const Configuration c = sys.lift(y0);
            const auto acc = acceleration(c);
            // angle rates at the fixed point
            std::vector<double> dy(y0.size());
            REQUIRE(sys.rhs(y0, dy));
            double alpha_dot = 0, beta_dot = 0;
            const bool beta_only = spec.family == Family::NhBinary ||
                                   spec.family == Family::NhEulerian3;
            if (sys.dim == 3) {
                (beta_only ? beta_dot : alpha_dot) = dy[2];
            } else if (sys.dim == 4) {
                alpha_dot = dy[2];
                beta_dot = dy[3];
            }
            const int yz_sign = c.space.spherical() ? -1 : +1;
            double worst = 0;
            for (int i = 0; i < c.count(); ++i) {
                const Vec4& q = c.positions[i];
                const Vec4 expect{-alpha_dot * alpha_dot * q.w, -alpha_dot * alpha_dot * q.x,
                                  yz_sign * beta_dot * beta_dot * q.y,
                                  yz_sign * beta_dot * beta_dot * q.z};
                const Vec4 d = acc[i] - expect;
                for (double v : {d.w, d.x, d.y, d.z}) worst = std::max(worst, std::abs(v));
            }
            CHECK(worst < 1e-10);
        }
    };

    check_rigid(make_spec(Family::PeLagrangian, 1, 1, 0));
    check_rigid(make_spec(Family::PeeBinary, 1, 1, 1));
    check_rigid(make_spec(Family::PeeLagrangian, 1, 1, 1));
    check_rigid(make_spec(Family::PeeLagrangian, 1, 2, 1));
    check_rigid(make_spec(Family::NeLagrangian, 1, 0, 0, -4.0));
    check_rigid(make_spec(Family::NhEulerian3, 1, 0, 2.2));
    check_rigid(make_spec(Family::NehBinary, 1, 0.5, 0.5));
    check_rigid(make_spec(Family::NehEulerian3, 1, 1, 1));
}

TEST_CASE("lifted fixed points hold q_ij constant under the full flow") {
    // full-system integration over the window; restricted to equilibria
    // whose transverse spectrum keeps roundoff below the tolerance for 20
    // time units (strongly unstable ones blow up from rounding alone and
    // are covered by the rigidity check above plus reduced-system runs)
    IntegratorSettings st;
    st.t_end = 20.0;
    st.rel_tol = 1e-12;
    st.abs_tol = 1e-14;

    auto check_re = [&](const FamilySpec& spec) {
        const auto fps = fixed_points(spec);
        REQUIRE(!fps.empty());
        for (const auto& fp : fps) {
            const ReducedSystem sys = family_system(spec, fp.state);
            std::vector<double> y0 = {fp.state[0], fp.state[1]};
            while (static_cast<int>(y0.size()) < sys.dim) y0.push_back(0.0);
            const Configuration start = sys.lift(y0);
            const Trajectory traj = simulate_full(start, st, 101);
            REQUIRE(traj.completed);
            const PairGram g0 = pair_gram(traj.configs.front());
            double dev = 0;
            for (const Configuration& c : traj.configs) {
                const PairGram g = pair_gram(c);
                for (int i = 0; i < g.n; ++i)
                    for (int j = i + 1; j < g.n; ++j)
                        dev = std::max(dev, std::abs(g(i, j) - g0(i, j)));
            }
            CHECK(dev <= 1e-8);
        }
    };

    check_re(make_spec(Family::PeeBinary, 1, 1, 1));
    check_re(make_spec(Family::NhEulerian3, 1, 0, 2.2));
    check_re(make_spec(Family::NehBinary, 1, 0.5, 0.5));
}

TEST_CASE("reduced runs from fixed points stay put for every family") {
    IntegratorSettings st;
    st.t_end = 20.0;
    st.rel_tol = 1e-12;
    st.abs_tol = 1e-14;

    auto check_reduced = [&](const FamilySpec& spec) {
        const auto fps = fixed_points(spec);
        REQUIRE(!fps.empty());
        for (const auto& fp : fps) {
            if (fp.state[0] == 0.0) continue;
            // strongly hyperbolic saddles cannot hold machine roundoff for
            // 20 time units even in two dimensions
            if (std::max(fp.eig[0].real(), fp.eig[1].real()) > 1.0) continue;
            const ReducedSystem sys = family_system(spec, fp.state);
            std::vector<double> y0 = {fp.state[0], fp.state[1]};
            while (static_cast<int>(y0.size()) < sys.dim) y0.push_back(0.0);
            const Trajectory traj = simulate_reduced(sys, y0, st, 81);
            REQUIRE(traj.completed);
            for (const auto& s : traj.reduced_states) {
                CHECK(std::abs(s[0] - fp.state[0]) < 1e-9);
                CHECK(std::abs(s[1]) < 1e-9);
            }
        }
    };

    check_reduced(make_spec(Family::PeLagrangian, 1, 1, 0));
    check_reduced(make_spec(Family::PeeBinary, 1, 1, 1));
    check_reduced(make_spec(Family::PeeLagrangian, 1, 1, 1));
    check_reduced(make_spec(Family::NeLagrangian, 1, 0, 0, -4.0));
    check_reduced(make_spec(Family::NhBinary, 1, 0, 1));
    check_reduced(make_spec(Family::NhEulerian3, 1, 0, 2.2));
    check_reduced(make_spec(Family::NehBinary, 1, 0.5, 0.5));
    check_reduced(make_spec(Family::NehEulerian3, 1, 1, 1));
}

TEST_CASE("hyperbolic Lagrangian equilibria near the regime boundary") {
    // The no-equilibrium regime ends near |h| = 2.88 m^2 (where the reduced
    // force first balances), not at sqrt(15) m^2: just below the leading
    // coefficient's sign flip at |h| = 3 there are two equilibria, and one
    // beyond it.
    {
        const Polynomial q = ne_lagrangian_energy_polynomial(1, 2.9);
        CHECK(isolate_real_roots(q, 1.0, root_magnitude_bound(q)).size() == 2);
    }
    {
        const Polynomial q = ne_lagrangian_energy_polynomial(1, 3.5);
        CHECK(isolate_real_roots(q, 1.0, root_magnitude_bound(q)).size() == 1);
    }
    CHECK(fixed_points(make_spec(Family::NeLagrangian, 1, 0, 0, -2.9)).size() == 2);
    CHECK(fixed_points(make_spec(Family::NeLagrangian, 1, 0, 0, -2.5)).empty());
    CHECK(fixed_points(make_spec(Family::NeLagrangian, 1, 0, 0, -3.5)).size() == 1);
    // the polynomial is blind to the sign of h; the flow is not
    CHECK(fixed_points(make_spec(Family::NeLagrangian, 1, 0, 0, 3.5)).empty());
}

TEST_CASE("fixed-point polynomials") {
    {
        const Polynomial p = pe_lagrangian_energy_polynomial(1, 8.5);
        CHECK(p.degree() == 8);
        CHECK(p.eval(1.0) == 48.0);
        CHECK(p.eval(0.0) == doctest::Approx(75 - 72.25));
    }
    {
        const Polynomial q = ne_lagrangian_energy_polynomial(1, 4.0);
        CHECK(q.degree() == 4);
        CHECK(q.eval(1.0) == -48.0);
    }
    {
        const Polynomial p = pe_lagrangian_momentum_polynomial(1, 1);
        CHECK(p.degree() == 6);
        // the equilibrium radius of the unit-parameter family is its root
        const auto fps = fixed_points(make_spec(Family::PeLagrangian, 1, 1, 0));
        REQUIRE(fps.size() == 2);
        CHECK(std::abs(p.eval(fps[1].state[0])) < 1e-9);
    }
}

TEST_SUITE_END();
