#include <doctest.h>

#include <cmath>
#include <random>

#include "curved/dynamics.hpp"
#include "curved/simulate.hpp"
#include "test_helpers.hpp"

using namespace curved;

TEST_SUITE_BEGIN("dynamics");

namespace {

// Lagrangian triangle on the sphere, all bodies sharing (y, z).
Configuration pe_lagrangian_config(double y, double z, double m = 1.0) {
    const double r = std::sqrt(1.0 - y * y - z * z);
    Configuration c;
    c.space = Space::sphere();
    for (int i = 0; i < 3; ++i) {
        const double a = 2.0 * M_PI * i / 3.0;
        c.masses.push_back(m);
        c.positions.push_back({r * std::cos(a), r * std::sin(a), y, z});
        c.velocities.push_back({});
    }
    return c;
}

} // namespace

TEST_CASE("pair inner products of the symmetric configurations") {
    {
        const Configuration c = pe_lagrangian_config(0.2, 0.3);
        const PairGram g = pair_gram(c);
        const double expected = (3 * (0.2 * 0.2) + 3 * (0.3 * 0.3) - 1) / 2;
        CHECK(g(0, 1) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(g(0, 2) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(g(1, 2) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(g(0, 0) == 1.0);
    }
    {
        // elliptic-elliptic triangle: q_ij = -1/2 for every r
        for (double r : {0.3, 1.0 / std::sqrt(2.0), 0.9}) {
            const double rho = std::sqrt(1 - r * r);
            Configuration c;
            c.space = Space::sphere();
            for (int i = 0; i < 3; ++i) {
                const double a = 2.0 * M_PI * i / 3.0;
                c.masses.push_back(1);
                c.positions.push_back(
                    {r * std::cos(a), r * std::sin(a), rho * std::cos(a), rho * std::sin(a)});
                c.velocities.push_back({});
            }
            const PairGram g = pair_gram(c);
            CHECK(g(0, 1) == doctest::Approx(-0.5).epsilon(1e-13));
            CHECK(g(1, 2) == doctest::Approx(-0.5).epsilon(1e-13));
        }
    }
    {
        // collinear hyperbolic triple: q_12 = q_13 = -rho, q_23 = 1 - 2 rho^2
        const double w = 0.4, x = 0.5;
        const double rho = std::sqrt(w * w + x * x + 1);
        Configuration c;
        c.space = Space::hyperbolic();
        c.masses = {1, 1, 1};
        c.positions = {{0, 0, 0, 1}, {w, x, 0, rho}, {-w, -x, 0, rho}};
        c.velocities = {{}, {}, {}};
        const PairGram g = pair_gram(c);
        CHECK(g(0, 1) == doctest::Approx(-rho).epsilon(1e-14));
        CHECK(g(0, 2) == doctest::Approx(-rho).epsilon(1e-14));
        CHECK(g(1, 2) == doctest::Approx(1 - 2 * rho * rho).epsilon(1e-14));
        // Lorentz products of distinct upper-sheet points stay below -1
        CHECK(g(0, 1) <= -1.0);
        CHECK(g(1, 2) <= -1.0);
    }
}

TEST_CASE("acceleration reference values") {
    {
        // single body on the sphere: great-circle geodesic
        Configuration c;
        c.space = Space::sphere();
        c.masses = {1};
        c.positions = {{1, 0, 0, 0}};
        c.velocities = {{0, 1, 0, 0}};
        const auto acc = acceleration(c);
        CHECK(acc[0].w == doctest::Approx(-1.0));
        CHECK(std::abs(acc[0].x) < 1e-15);
    }
    {
        // single body on the hyperboloid
        Configuration c;
        c.space = Space::hyperbolic();
        c.masses = {1};
        c.positions = {{0, 0, 0, 1}};
        c.velocities = {{0, 1, 0, 0}};
        const auto acc = acceleration(c);
        CHECK(acc[0].z == doctest::Approx(1.0));
        CHECK(std::abs(acc[0].x) < 1e-15);
    }
    {
        // two orthogonal bodies at rest: q_12 = 0
        Configuration c;
        c.space = Space::sphere();
        c.masses = {1, 1};
        c.positions = {{1, 0, 0, 0}, {0, 1, 0, 0}};
        c.velocities = {{}, {}};
        const auto acc = acceleration(c);
        CHECK(acc[0].x == doctest::Approx(1.0));
        CHECK(acc[0].w == doctest::Approx(0.0));
        CHECK(acc[1].w == doctest::Approx(1.0));
        CHECK(force_function(c) == doctest::Approx(0.0));
    }
}

TEST_CASE("collision guard") {
    Configuration c;
    c.space = Space::sphere();
    c.masses = {1, 1};
    c.positions = {{1, 0, 0, 0}, {1, 2e-7, 0, 0}};
    auto [q, v] = project(Space::sphere(), c.positions[1], {});
    c.positions[1] = q;
    c.velocities = {{}, {}};
    CHECK_THROWS_AS(acceleration(c), SingularPair);
    // antipodal pair is singular too
    c.positions[1] = {-1, 0, 0, 0};
    CHECK_THROWS_AS(acceleration(c), SingularPair);
}

TEST_CASE("energy of the elliptic-elliptic triangle at its equilibrium") {
    const double r = 1.0 / std::sqrt(2.0), rho = r;
    const double alpha_dot = 1.0 / (3.0 * r * r); // c1 = 1
    const double beta_dot = 1.0 / (3.0 * rho * rho);
    Configuration c;
    c.space = Space::sphere();
    for (int i = 0; i < 3; ++i) {
        const double a = 2.0 * M_PI * i / 3.0;
        c.masses.push_back(1);
        c.positions.push_back(
            {r * std::cos(a), r * std::sin(a), rho * std::cos(a), rho * std::sin(a)});
        c.velocities.push_back({-r * alpha_dot * std::sin(a), r * alpha_dot * std::cos(a),
                                -rho * beta_dot * std::sin(a), rho * beta_dot * std::cos(a)});
    }
    const Integrals in = integrals(c);
    CHECK(in.h == doctest::Approx(2.0 / 3.0 + std::sqrt(3.0)).epsilon(1e-12));
    CHECK(kinetic_energy(c) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(force_function(c) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-12));
    CHECK(in.c_wx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(in.c_yz == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pe Lagrangian momenta vanish outside the rotation plane") {
    Configuration c = pe_lagrangian_config(0.0, 0.5);
    // give it the ansatz velocity (alpha rotation only), c = 1
    const double r = std::sqrt(1 - 0.25);
    const double alpha_dot = 1.0 / (3 * r * r);
    for (int i = 0; i < 3; ++i) {
        const double a = 2.0 * M_PI * i / 3.0;
        c.velocities[i] = {-r * alpha_dot * std::sin(a), r * alpha_dot * std::cos(a), 0, 0};
    }
    const Integrals in = integrals(c);
    CHECK(in.c_wx == doctest::Approx(1.0).epsilon(1e-13));
    for (double v : {in.c_wy, in.c_wz, in.c_xy, in.c_xz, in.c_yz})
        CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("acceleration is tangent-consistent at random configurations") {
    std::mt19937_64 rng(101);
    for (Space s : {Space::sphere(), Space::hyperbolic()}) {
        for (int k = 0; k < 40; ++k) {
            const Configuration c = testing::random_configuration(s, 4, rng);
            const auto acc = acceleration(c);
            for (int i = 0; i < 4; ++i) {
                // differentiating q.qdot = 0 gives q.qddot = -qdot.qdot on
                // either manifold
                const double vv = inner(s, c.velocities[i], c.velocities[i]);
                const double qa = inner(s, c.positions[i], acc[i]);
                CHECK(std::abs(qa + vv) < 1e-10);
            }
        }
    }
}

TEST_CASE("force function is invariant under isometries") {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(-1, 1);
    for (Space s : {Space::sphere(), Space::hyperbolic()}) {
        for (int k = 0; k < 40; ++k) {
            Configuration c = testing::random_configuration(s, 3, rng);
            const double u0 = force_function(c);

            // rotation in the wx-plane
            Configuration cr = c;
            const double a = u(rng) * M_PI;
            for (Vec4& q : cr.positions) {
                const double w = q.w * std::cos(a) - q.x * std::sin(a);
                const double x = q.w * std::sin(a) + q.x * std::cos(a);
                q.w = w;
                q.x = x;
            }
            CHECK(std::abs(force_function(cr) - u0) < 1e-10);

            // yz-plane: circular rotation on the sphere, boost on the
            // hyperboloid
            Configuration cb = c;
            for (Vec4& q : cb.positions) {
                if (s.spherical()) {
                    const double y = q.y * std::cos(a) - q.z * std::sin(a);
                    const double z = q.y * std::sin(a) + q.z * std::cos(a);
                    q.y = y;
                    q.z = z;
                } else {
                    const double y = q.y * std::cosh(a) + q.z * std::sinh(a);
                    const double z = q.y * std::sinh(a) + q.z * std::cosh(a);
                    q.y = y;
                    q.z = z;
                }
            }
            CHECK(std::abs(force_function(cb) - u0) < 1e-10);
        }
    }
}

TEST_CASE("force term matches a finite-difference gradient of U") {
    std::mt19937_64 rng(303);
    for (Space s : {Space::sphere(), Space::hyperbolic()}) {
        for (int k = 0; k < 10; ++k) {
            Configuration c = testing::random_configuration(s, 3, rng);
            for (Vec4& v : c.velocities) v = {}; // acceleration = force part only
            const auto acc = acceleration(c);
            for (int i = 0; i < 3; ++i) {
                const double eps = 1e-6;
                Vec4 grad{};
                double* gp = &grad.w;
                for (int comp = 0; comp < 4; ++comp) {
                    auto shifted = [&](double e) {
                        Configuration cc = c;
                        Vec4 q = cc.positions[i];
                        (&q.w)[comp] += e;
                        auto [qp, vp] = project(s, q, cc.velocities[i]);
                        cc.positions[i] = qp;
                        return force_function(cc);
                    };
                    gp[comp] = (shifted(eps) - shifted(-eps)) / (2 * eps);
                }
                // raise the index: multiply the z-slot by sigma
                grad.z *= s.sigma;
                const Vec4 expect = (1.0 / c.masses[i]) * grad;
                const double scale = std::max({1.0, std::abs(expect.w), std::abs(expect.x),
                                               std::abs(expect.y), std::abs(expect.z)});
                CHECK(std::abs(acc[i].w - expect.w) / scale < 1e-6);
                CHECK(std::abs(acc[i].x - expect.x) / scale < 1e-6);
                CHECK(std::abs(acc[i].y - expect.y) / scale < 1e-6);
                CHECK(std::abs(acc[i].z - expect.z) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("momentum integrals are flat along short exact integrations") {
    std::mt19937_64 rng(404);
    for (Space s : {Space::sphere(), Space::hyperbolic()}) {
        const Configuration c = testing::random_configuration(s, 3, rng);
        IntegratorSettings st;
        st.t_end = 0.5;
        st.rel_tol = 1e-12;
        st.abs_tol = 1e-14;
        const Trajectory traj = simulate_full(c, st, 51);
        REQUIRE(traj.completed);
        // centered finite differences of each momentum over the samples
        const double dt = traj.times[1] - traj.times[0];
        for (int k = 1; k <= 6; ++k) {
            for (size_t j = 1; j + 1 < traj.size(); ++j) {
                const double deriv =
                    (traj.integrals[j + 1][k] - traj.integrals[j - 1][k]) / (2 * dt);
                CHECK(std::abs(deriv) < 1e-6);
            }
        }
    }
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(make_configuration(Space::sphere(), {1}, {{2, 0, 0, 0}}, {{0, 1, 0, 0}}),
                    OffManifold);
    CHECK_THROWS_AS(make_configuration(Space::sphere(), {-1}, {{1, 0, 0, 0}}, {{0, 1, 0, 0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        make_configuration(Space::hyperbolic(), {1}, {{0, 0, 0, -1}}, {{0, 1, 0, 0}}),
        OffManifold);
    CHECK_NOTHROW(
        make_configuration(Space::sphere(), {1}, {{1, 0, 0, 0}}, {{0, 0.5, 0.5, 0}}));
}

TEST_SUITE_END();
