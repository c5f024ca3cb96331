#ifndef CURVED_RUNNER_HPP
#define CURVED_RUNNER_HPP

#include <string>

#include "curved/analysis.hpp"
#include "curved/scenario.hpp"

namespace curved {

/// Exit-code contract: 0 success, 2 singularity abort, 3 validation error.
enum ExitCode : int { exit_ok = 0, exit_singularity = 2, exit_validation = 3 };

struct RunResult {
    int exit_code = exit_ok;
    Trajectory trajectory;
    OrbitClass verdict = OrbitClass::Inconclusive;
    ConfinementReport confinement;
    std::array<bool, 6> rotation{};
};

/// Simulate a scenario and write trajectory.csv, drift.csv and summary.txt
/// under out_dir (created if missing).
RunResult run_scenario(const Scenario& sc, const std::string& out_dir);

/// Simulate without touching the filesystem.
RunResult run_scenario(const Scenario& sc);

/// Trajectory CSV: t, per body w,x,y,z,dw,dx,dy,dz, then the integrals
/// h, c_wx, c_wy, c_wz, c_xy, c_xz, c_yz.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Per-integral drift table: initial, final, max absolute and relative
/// drift over the samples.
void write_drift_csv(const Trajectory& traj, const std::string& path);

/// Max relative drift of integral k (0 = h, 1.. = momenta) over the
/// trajectory; absolute drift when the initial value is below 1e-9.
double integral_drift(const Trajectory& traj, int k);

/// Max absolute drift of integral k.
double integral_drift_abs(const Trajectory& traj, int k);

} // namespace curved

#endif
