#ifndef CURVED_TEST_HELPERS_HPP
#define CURVED_TEST_HELPERS_HPP

#include <random>

#include "curved/dynamics.hpp"

namespace curved::testing {

// Random admissible configuration with bodies kept pairwise separated.
inline Configuration random_configuration(Space space, int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    Configuration c;
    c.space = space;
    for (int i = 0; i < n; ++i) {
        for (int attempt = 0;; ++attempt) {
            Vec4 q;
            if (space.spherical()) {
                q = {u(rng) + 0.1, u(rng), u(rng), u(rng)};
            } else {
                const double w = u(rng), x = u(rng), y = u(rng);
                q = {w, x, y, std::sqrt(1 + w * w + x * x + y * y)};
            }
            Vec4 v{u(rng), u(rng), u(rng), u(rng)};
            auto [qp, vp] = project(space, q, v);
            bool separated = true;
            for (const Vec4& other : c.positions) {
                const double qij = inner(space, qp, other);
                if (space.sigma * (1.0 - qij * qij) < 0.05) separated = false;
            }
            if (separated || attempt > 200) {
                c.positions.push_back(qp);
                c.velocities.push_back(vp);
                break;
            }
        }
        c.masses.push_back(0.5 + std::abs(u(rng)));
    }
    return c;
}

} // namespace curved::testing

#endif
