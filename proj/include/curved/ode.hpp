#ifndef CURVED_ODE_HPP
#define CURVED_ODE_HPP

#include <functional>
#include <span>
#include <vector>

namespace curved {

/// Autonomous right-hand side. Writes dy/dt into deriv and returns false
/// when the state is not evaluable (singular pair, degenerate radius, left
/// domain); a false return rejects the trial step.
using OdeRhs = std::function<bool(std::span<const double>, std::span<double>)>;

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double h_max = 1.0;
};

/// One accepted step with the data needed for cubic Hermite dense output.
struct DenseStep {
    double t0 = 0, t1 = 0;
    std::vector<double> y0, y1, f0, f1;

    void eval(double t, std::span<double> out) const;
};

enum class StepOutcome {
    Done,         // reached t_end
    Underflow,    // required step below h_min while error-limited
    Unevaluable,  // required step below h_min while the RHS kept failing
    Halted,       // observer asked to stop
};

/// Observer result after each accepted step. `modified` means the observer
/// changed y1 in place (constraint projection); the cached FSAL derivative
/// is then recomputed.
struct ObserverAction {
    bool stop = false;
    bool modified = false;
};

/// Adaptive eighth-order Dormand-Prince driver with PI step-size control.
/// The observer sees every accepted step in order. `checkpoints` (sorted,
/// optional) are times the stepper must land on exactly, so sampled states
/// are genuine integration states rather than interpolants; the cubic
/// Hermite dense output serves event localization between them.
StepOutcome integrate_adaptive(const OdeRhs& rhs, std::vector<double>& y, double t0,
                               double t_end, const StepControl& ctl,
                               const std::function<ObserverAction(DenseStep&)>& observer,
                               double* t_reached = nullptr,
                               std::span<const double> checkpoints = {});

/// Fixed-step Dormand-Prince 5 driver (no error control); for convergence
/// tests. Returns false if the RHS failed.
bool integrate_fixed(const OdeRhs& rhs, std::vector<double>& y, double t0, double t_end,
                     int nsteps);

} // namespace curved

#endif
