#include "curved/simulate.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace curved {

void IntegratorSettings::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0))
        throw std::invalid_argument("tolerances must be positive");
    if (!(h_min > 0) || !(h_min <= h_init) || !(h_init <= h_max))
        throw std::invalid_argument("need 0 < h_min <= h_init <= h_max");
    if (project_every < 1) throw std::invalid_argument("project_every must be >= 1");
    if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
}

std::vector<double> sample_grid(double t_end, int samples) {
    if (samples < 2) throw std::invalid_argument("need at least 2 samples");
    std::vector<double> ts(samples);
    for (int i = 0; i < samples; ++i)
        ts[i] = t_end * static_cast<double>(i) / (samples - 1);
    ts.back() = t_end;
    return ts;
}

namespace {

void pack_state(const Configuration& c, std::vector<double>& y) {
    const int n = c.count();
    y.resize(static_cast<size_t>(8) * n);
    for (int i = 0; i < n; ++i) {
        y[4 * i + 0] = c.positions[i].w;
        y[4 * i + 1] = c.positions[i].x;
        y[4 * i + 2] = c.positions[i].y;
        y[4 * i + 3] = c.positions[i].z;
        y[4 * (n + i) + 0] = c.velocities[i].w;
        y[4 * (n + i) + 1] = c.velocities[i].x;
        y[4 * (n + i) + 2] = c.velocities[i].y;
        y[4 * (n + i) + 3] = c.velocities[i].z;
    }
}

void unpack_state(std::span<const double> y, Configuration& c) {
    const int n = c.count();
    for (int i = 0; i < n; ++i) {
        c.positions[i] = {y[4 * i + 0], y[4 * i + 1], y[4 * i + 2], y[4 * i + 3]};
        c.velocities[i] = {y[4 * (n + i) + 0], y[4 * (n + i) + 1], y[4 * (n + i) + 2],
                           y[4 * (n + i) + 3]};
    }
}

// Project every body of a packed state; returns the largest correction.
double project_packed(Space space, std::span<double> y, int n) {
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        Vec4 q{y[4 * i + 0], y[4 * i + 1], y[4 * i + 2], y[4 * i + 3]};
        Vec4 v{y[4 * (n + i) + 0], y[4 * (n + i) + 1], y[4 * (n + i) + 2], y[4 * (n + i) + 3]};
        auto [qp, vp] = project(space, q, v);
        const Vec4 dq = qp - q, dv = vp - v;
        worst = std::max(worst,
                         std::sqrt(dq.w * dq.w + dq.x * dq.x + dq.y * dq.y + dq.z * dq.z +
                                   dv.w * dv.w + dv.x * dv.x + dv.y * dv.y + dv.z * dv.z));
        y[4 * i + 0] = qp.w;
        y[4 * i + 1] = qp.x;
        y[4 * i + 2] = qp.y;
        y[4 * i + 3] = qp.z;
        y[4 * (n + i) + 0] = vp.w;
        y[4 * (n + i) + 1] = vp.x;
        y[4 * (n + i) + 2] = vp.y;
        y[4 * (n + i) + 3] = vp.z;
    }
    return worst;
}

} // namespace

Trajectory simulate_full(const Configuration& start, const IntegratorSettings& settings,
                         int samples) {
    settings.validate();
    const int n = start.count();
    const std::vector<double> grid = sample_grid(settings.t_end, samples);

    Trajectory traj;
    traj.space = start.space;

    Configuration scratch = start; // reused by the RHS
    std::optional<SingularPair> last_singular;

    OdeRhs rhs = [&](std::span<const double> y, std::span<double> dy) -> bool {
        unpack_state(y, scratch);
        std::vector<Vec4> acc;
        try {
            acc = acceleration(scratch);
        } catch (const SingularPair& sp) {
            last_singular = sp;
            return false;
        }
        for (int i = 0; i < n; ++i) {
            dy[4 * i + 0] = y[4 * (n + i) + 0];
            dy[4 * i + 1] = y[4 * (n + i) + 1];
            dy[4 * i + 2] = y[4 * (n + i) + 2];
            dy[4 * i + 3] = y[4 * (n + i) + 3];
            dy[4 * (n + i) + 0] = acc[i].w;
            dy[4 * (n + i) + 1] = acc[i].x;
            dy[4 * (n + i) + 2] = acc[i].y;
            dy[4 * (n + i) + 3] = acc[i].z;
        }
        return true;
    };

    std::vector<double> y;
    pack_state(start, y);

    size_t next_sample = 0;
    double window_projection = 0;
    std::vector<double> ys(y.size());

    auto emit_sample = [&](double t, std::span<const double> state) {
        Configuration c = start;
        // samples are projected so every recorded configuration is admissible
        std::vector<double> proj(state.begin(), state.end());
        project_packed(start.space, proj, n);
        unpack_state(proj, c);
        traj.times.push_back(t);
        traj.configs.push_back(c);
        traj.integrals.push_back(integrals(c));
        traj.projection_magnitude.push_back(window_projection);
        window_projection = 0;
    };

    emit_sample(grid[0], y);
    next_sample = 1;

    int accepted = 0;
    const double t_eps = 1e-12 * std::max(1.0, settings.t_end);

    auto observer = [&](DenseStep& step) -> ObserverAction {
        ObserverAction act;
        ++accepted;

        // residual bookkeeping + periodic projection (on the step endpoint)
        unpack_state(step.y1, scratch);
        traj.max_residual_pre_projection =
            std::max(traj.max_residual_pre_projection, max_constraint_residual(scratch));
        if (accepted % settings.project_every == 0) {
            try {
                window_projection =
                    std::max(window_projection, project_packed(start.space, step.y1, n));
            } catch (const DegeneratePoint&) {
                act.stop = true;
                return act;
            }
            act.modified = true;
            unpack_state(step.y1, scratch);
            traj.max_residual_post_projection =
                std::max(traj.max_residual_post_projection, max_constraint_residual(scratch));
        }

        while (next_sample < grid.size() && grid[next_sample] <= step.t1 + t_eps) {
            if (std::abs(grid[next_sample] - step.t1) <= t_eps) {
                emit_sample(grid[next_sample], step.y1);
            } else {
                step.eval(grid[next_sample], ys);
                emit_sample(grid[next_sample], ys);
            }
            ++next_sample;
        }
        return act;
    };

    double t_reached = 0;
    const StepOutcome outcome =
        integrate_adaptive(rhs, y, 0.0, settings.t_end, settings.step_control(), observer,
                           &t_reached, grid);

    // a step-size collapse right next to a collision is a singularity, not a
    // generic underflow: identify the closest pair at the final state
    auto closest_pair = [&]() -> std::optional<SingularPair> {
        unpack_state(y, scratch);
        const PairGram g = pair_gram(scratch);
        double worst_gap = 1e300;
        std::optional<SingularPair> hit;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double gap = start.space.sigma * (1.0 - g(i, j) * g(i, j));
                if (gap < worst_gap) {
                    worst_gap = gap;
                    hit = SingularPair(i, j, g(i, j));
                }
            }
        if (worst_gap < 1e-6) return hit;
        return std::nullopt;
    };

    switch (outcome) {
        case StepOutcome::Done:
            traj.completed = true;
            break;
        case StepOutcome::Unevaluable: {
            Event ev;
            ev.t = t_reached;
            ev.kind = EventKind::SingularityAbort;
            if (!last_singular) last_singular = closest_pair();
            if (last_singular)
                ev.detail = "singularity reached: pair (" + std::to_string(last_singular->i) +
                            "," + std::to_string(last_singular->j) + ")";
            else
                ev.detail = "right-hand side not evaluable";
            traj.events.push_back(ev);
            break;
        }
        case StepOutcome::Underflow: {
            if (auto sp = closest_pair()) {
                traj.events.push_back({t_reached, EventKind::SingularityAbort,
                                       "singularity reached: pair (" + std::to_string(sp->i) +
                                           "," + std::to_string(sp->j) + ")"});
            } else {
                traj.events.push_back(
                    {t_reached, EventKind::StepUnderflowAbort, "required step below h_min"});
            }
            break;
        }
        case StepOutcome::Halted:
            traj.events.push_back(
                {t_reached, EventKind::SingularityAbort, "projection degenerated"});
            break;
    }
    return traj;
}

Trajectory simulate_reduced(const ReducedSystem& system, std::span<const double> state0,
                            const IntegratorSettings& settings, int samples) {
    settings.validate();
    if (static_cast<int>(state0.size()) != system.dim)
        throw std::invalid_argument("state0 has wrong dimension for " + system.label);
    if (system.in_domain && !system.in_domain(state0))
        throw std::invalid_argument("state0 outside the admissible domain of " + system.label);

    const std::vector<double> grid = sample_grid(settings.t_end, samples);

    Trajectory traj;
    traj.space = system.space;

    std::vector<double> y(state0.begin(), state0.end());
    std::vector<double> ys(y.size());
    size_t next_sample = 0;

    auto emit_sample = [&](double t, std::span<const double> state) {
        traj.times.push_back(t);
        traj.reduced_states.emplace_back(state.begin(), state.end());
        if (system.lift) {
            Configuration c = system.lift(state);
            traj.configs.push_back(c);
            traj.integrals.push_back(integrals(c));
        }
    };

    emit_sample(grid[0], y);
    next_sample = 1;

    const double t_eps = 1e-12 * std::max(1.0, settings.t_end);
    bool domain_exit = false;

    auto observer = [&](DenseStep& step) -> ObserverAction {
        ObserverAction act;
        if (system.in_domain && !system.in_domain(step.y1)) {
            // bisect the dense output for the crossing time; everything on
            // the admissible side is still sampled
            double lo = step.t0, hi = step.t1;
            for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                step.eval(mid, ys);
                if (system.in_domain(ys))
                    lo = mid;
                else
                    hi = mid;
            }
            while (next_sample < grid.size() && grid[next_sample] < lo) {
                step.eval(grid[next_sample], ys);
                emit_sample(grid[next_sample], ys);
                ++next_sample;
            }
            domain_exit = true;
            traj.events.push_back({hi, EventKind::DomainExit,
                                   "state left the admissible domain of " + system.label});
            act.stop = true;
            return act;
        }
        while (next_sample < grid.size() && grid[next_sample] <= step.t1 + t_eps) {
            if (std::abs(grid[next_sample] - step.t1) <= t_eps) {
                emit_sample(grid[next_sample], step.y1);
            } else {
                step.eval(grid[next_sample], ys);
                emit_sample(grid[next_sample], ys);
            }
            ++next_sample;
        }
        return act;
    };

    double t_reached = 0;
    const StepOutcome outcome =
        integrate_adaptive(system.rhs, y, 0.0, settings.t_end, settings.step_control(),
                           observer, &t_reached, grid);

    switch (outcome) {
        case StepOutcome::Done:
            traj.completed = true;
            break;
        case StepOutcome::Halted:
            break; // domain exit already logged
        case StepOutcome::Unevaluable:
            if (!domain_exit)
                traj.events.push_back({t_reached, EventKind::SingularityAbort,
                                       "right-hand side not evaluable"});
            break;
        case StepOutcome::Underflow:
            traj.events.push_back(
                {t_reached, EventKind::StepUnderflowAbort, "required step below h_min"});
            break;
    }
    return traj;
}

} // namespace curved
