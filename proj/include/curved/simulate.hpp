#ifndef CURVED_SIMULATE_HPP
#define CURVED_SIMULATE_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "curved/ode.hpp"
#include "curved/trajectory.hpp"

namespace curved {

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double h_max = 1.0;
    int project_every = 1; // accepted steps between manifold projections
    double t_end = 10.0;

    void validate() const; // throws std::invalid_argument

    StepControl step_control() const {
        return StepControl{rel_tol, abs_tol, h_init, h_min, h_max};
    }
};

/// A first-order autonomous system in reduced variables: one of the five
/// criterion systems or one of the named family systems. `rhs` returns
/// false where it cannot be evaluated; `lift` (optional) rebuilds the
/// ambient configuration from a reduced state.
struct ReducedSystem {
    int dim = 0;
    std::string label;
    Space space;
    OdeRhs rhs;
    std::function<bool(std::span<const double>)> in_domain;
    std::function<Configuration(std::span<const double>)> lift; // may be empty
};

/// Integrate the full 6N-dimensional ambient system with constraint
/// projection every `project_every` accepted steps. Samples are taken on a
/// uniform grid of `samples` points over [0, t_end] (cubic Hermite dense
/// output, projected to the manifold). Aborts (collision, step underflow)
/// are recorded in the event log and truncate the run.
Trajectory simulate_full(const Configuration& start, const IntegratorSettings& settings,
                         int samples);

/// Integrate a reduced system; domain exit truncates the trajectory and is
/// recorded as an event.
Trajectory simulate_reduced(const ReducedSystem& system, std::span<const double> state0,
                            const IntegratorSettings& settings, int samples);

/// Uniform sample grid over [0, t_end].
std::vector<double> sample_grid(double t_end, int samples);

} // namespace curved

#endif
