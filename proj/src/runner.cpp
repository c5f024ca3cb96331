#include "curved/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "curved/csvio.hpp"

namespace curved {

double integral_drift_abs(const Trajectory& traj, int k) {
    if (traj.integrals.empty()) return 0;
    const double v0 = traj.integrals.front()[k];
    double worst = 0;
    for (const Integrals& in : traj.integrals) worst = std::max(worst, std::abs(in[k] - v0));
    return worst;
}

double integral_drift(const Trajectory& traj, int k) {
    if (traj.integrals.empty()) return 0;
    const double v0 = std::abs(traj.integrals.front()[k]);
    const double scale = v0 > 1e-9 ? v0 : 1.0;
    return integral_drift_abs(traj, k) / scale;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    CsvTable table;
    const int n = traj.configs.empty() ? 0 : traj.configs.front().count();
    table.header.push_back("t");
    for (int i = 1; i <= n; ++i)
        for (const char* c : {"w", "x", "y", "z", "dw", "dx", "dy", "dz"})
            table.header.push_back(std::string(c) + std::to_string(i));
    for (const char* name : integral_names) table.header.push_back(name);

    for (size_t k = 0; k < traj.size(); ++k) {
        std::vector<std::string> row;
        row.push_back(format_double(traj.times[k]));
        if (n > 0) {
            const Configuration& c = traj.configs[k];
            for (int i = 0; i < n; ++i) {
                row.push_back(format_double(c.positions[i].w));
                row.push_back(format_double(c.positions[i].x));
                row.push_back(format_double(c.positions[i].y));
                row.push_back(format_double(c.positions[i].z));
                row.push_back(format_double(c.velocities[i].w));
                row.push_back(format_double(c.velocities[i].x));
                row.push_back(format_double(c.velocities[i].y));
                row.push_back(format_double(c.velocities[i].z));
            }
            for (int j = 0; j < 7; ++j) row.push_back(format_double(traj.integrals[k][j]));
        }
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

void write_drift_csv(const Trajectory& traj, const std::string& path) {
    CsvTable table;
    table.header = {"integral", "initial", "final", "max_abs_drift", "max_rel_drift"};
    if (!traj.integrals.empty()) {
        for (int k = 0; k < 7; ++k) {
            table.rows.push_back({integral_names[k],
                                  format_double(traj.integrals.front()[k]),
                                  format_double(traj.integrals.back()[k]),
                                  format_double(integral_drift_abs(traj, k)),
                                  format_double(integral_drift(traj, k))});
        }
    }
    write_csv(path, table);
}

RunResult run_scenario(const Scenario& sc) {
    RunResult res;
    switch (sc.kind) {
        case Scenario::Kind::Full: {
            const Configuration start =
                make_configuration(sc.space, sc.masses, sc.positions, sc.velocities);
            res.trajectory = simulate_full(start, sc.settings, sc.samples);
            break;
        }
        case Scenario::Kind::Family: {
            const ReducedSystem sys = family_system(*sc.family, sc.family_state);
            std::vector<double> y0 = {sc.family_state[0], sc.family_state[1]};
            const Family f = sc.family->family;
            const bool beta_only = f == Family::NhBinary || f == Family::NhEulerian3;
            if (sys.dim == 3) {
                y0.push_back(beta_only ? sc.beta0 : sc.alpha0);
            } else {
                y0.push_back(sc.alpha0);
                y0.push_back(sc.beta0);
            }
            res.trajectory = simulate_reduced(sys, y0, sc.settings, sc.samples);
            break;
        }
        case Scenario::Kind::Criterion: {
            const ReducedSystem sys = criterion_system(*sc.ansatz);
            std::vector<double> y0 = sc.criterion_core;
            if (state_dim(*sc.ansatz) - core_dim(*sc.ansatz) == 2) {
                y0.push_back(sc.alpha0);
                y0.push_back(sc.beta0);
            } else {
                y0.push_back(sc.ansatz->tag == AnsatzTag::NegativeHyperbolic ? sc.beta0
                                                                             : sc.alpha0);
            }
            res.trajectory = simulate_reduced(sys, y0, sc.settings, sc.samples);
            break;
        }
    }

    for (const Event& ev : res.trajectory.events)
        if (ev.kind == EventKind::SingularityAbort) res.exit_code = exit_singularity;

    if (res.trajectory.configs.size() >= 16) {
        res.verdict = classify(res.trajectory);
        res.confinement = confinement_report(res.trajectory, sc.space);
        res.rotation = rotation_signature(res.trajectory);
    }
    return res;
}

namespace {

std::string event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::SingularityAbort: return "singularity-abort";
        case EventKind::StepUnderflowAbort: return "step-underflow";
        case EventKind::DomainExit: return "domain-exit";
    }
    return "?";
}

} // namespace

RunResult run_scenario(const Scenario& sc, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunResult res = run_scenario(sc);

    write_trajectory_csv(res.trajectory, out_dir + "/trajectory.csv");
    write_drift_csv(res.trajectory, out_dir + "/drift.csv");

    std::ofstream sum(out_dir + "/summary.txt", std::ios::binary);
    sum << "scenario: " << sc.label << "\n";
    sum << "space: " << (sc.space.spherical() ? "S3" : "H3") << "\n";
    sum << "samples: " << res.trajectory.size() << "\n";
    sum << "completed: " << (res.trajectory.completed ? "yes" : "no") << "\n";
    if (res.trajectory.configs.size() >= 16) {
        sum << "classification: " << orbit_class_name(res.verdict) << "\n";
        sum << "confinement: "
            << (res.confinement.verdict == Confinement::AllConfined ? "AllConfined"
                                                                    : "CrossesContinuum");
        if (res.confinement.worst_body >= 0)
            sum << " (max radius variation "
                << format_double(res.confinement.variation[res.confinement.worst_body])
                << " at body " << res.confinement.worst_body + 1 << ")";
        sum << "\n";
        sum << "rotation:";
        bool any = false;
        for (int k = 0; k < 6; ++k)
            if (res.rotation[k]) {
                sum << " " << plane_names[k];
                any = true;
            }
        if (!any) sum << " none";
        sum << "\n";
    } else {
        sum << "classification: Inconclusive (too few samples)\n";
    }
    for (int k = 0; k < 7; ++k)
        sum << "drift " << integral_names[k] << ": "
            << format_double(integral_drift(res.trajectory, k)) << "\n";
    for (const Event& ev : res.trajectory.events)
        sum << "event: t=" << format_double(ev.t) << " " << event_kind_name(ev.kind) << " "
            << ev.detail << "\n";
    sum << "exit: " << res.exit_code << "\n";
    return res;
}

} // namespace curved
