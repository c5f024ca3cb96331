#ifndef CURVED_TRAJECTORY_HPP
#define CURVED_TRAJECTORY_HPP

#include <string>
#include <vector>

#include "curved/dynamics.hpp"

namespace curved {

enum class EventKind { SingularityAbort, StepUnderflowAbort, DomainExit };

struct Event {
    double t = 0;
    EventKind kind = EventKind::SingularityAbort;
    std::string detail;
};

/// Time-stamped samples of a run. Full-system runs fill `configs`;
/// reduced runs fill `reduced_states` and, when the system carries a lift,
/// `configs` as well. `integrals` parallels `configs`.
struct Trajectory {
    Space space;
    std::vector<double> times;
    std::vector<Configuration> configs;
    std::vector<std::vector<double>> reduced_states;
    std::vector<Integrals> integrals;

    /// Largest projection correction applied since the previous sample
    /// (full-system runs; one entry per sample).
    std::vector<double> projection_magnitude;

    std::vector<Event> events;
    bool completed = false; // reached t_end without abort

    /// Worst constraint residual seen at accepted steps before projection,
    /// and after it.
    double max_residual_pre_projection = 0;
    double max_residual_post_projection = 0;

    size_t size() const { return times.size(); }
};

} // namespace curved

#endif
