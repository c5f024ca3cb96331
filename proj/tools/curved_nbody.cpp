#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "curved/acceptance.hpp"
#include "curved/csvio.hpp"
#include "curved/parallel.hpp"
#include "curved/runner.hpp"

namespace {

using namespace curved;

int cmd_run(const std::string& scenario_path, const std::string& out_dir, double tol,
            double t_end) {
    Scenario sc;
    try {
        sc = parse_scenario_file(scenario_path);
    } catch (const ScenarioError& e) {
        std::cerr << scenario_path << ":" << e.line << ": " << e.what() << "\n";
        return exit_validation;
    }
    if (tol > 0) {
        sc.settings.rel_tol = tol;
        sc.settings.abs_tol = tol * 1e-2;
    }
    if (t_end > 0) sc.settings.t_end = t_end;
    const std::string dir = !out_dir.empty() ? out_dir : (!sc.out_dir.empty() ? sc.out_dir : "out");

    RunResult res;
    try {
        res = run_scenario(sc, dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
    std::cout << "scenario: " << sc.label << "\n"
              << "samples: " << res.trajectory.size() << "\n"
              << "completed: " << (res.trajectory.completed ? "yes" : "no") << "\n";
    if (res.trajectory.configs.size() >= 16)
        std::cout << "classification: " << orbit_class_name(res.verdict) << "\n";
    std::cout << "artifacts: " << dir << "/trajectory.csv, drift.csv, summary.txt\n";
    return res.exit_code;
}

struct ParamSet {
    FamilyParams p;
    std::optional<double> h_only; // pe-lagrangian energy mode
};

void append_fixed_point_rows(CsvTable& table, Family fam, const FamilyParams& p) {
    FamilySpec spec{fam, p};
    const char* hs = p.h ? nullptr : "";
    (void)hs;

    // per-parameter polynomial, where the family has one
    std::optional<Polynomial> poly;
    switch (fam) {
        case Family::PeLagrangian:
            poly = p.h ? pe_lagrangian_energy_polynomial(p.m, *p.h)
                       : pe_lagrangian_momentum_polynomial(p.m, p.mom_wx);
            break;
        case Family::NeLagrangian:
            if (p.h) poly = ne_lagrangian_energy_polynomial(p.m, *p.h);
            break;
        case Family::PeeLagrangian:
            poly = Polynomial({p.mom_wx * p.mom_wx,
                               -2.0 * p.mom_wx * p.mom_wx,
                               p.mom_wx * p.mom_wx - p.mom_yz * p.mom_yz});
            break;
        case Family::NhBinary: {
            const double m6 = std::pow(p.m, 6);
            poly = Polynomial({-m6, -m6, std::pow(p.mom_yz, 4)});
            break;
        }
        default: break;
    }

    auto param_cells = [&]() -> std::vector<std::string> {
        return {std::string(family_name(fam)), format_double(p.m), format_double(p.mom_wx),
                format_double(p.mom_yz), p.h ? format_double(*p.h) : ""};
    };

    std::vector<FamilyFixedPoint> fps;
    std::string kind = "fixed-point";
    if (fam == Family::PeLagrangian && p.h) {
        // energy mode: every admissible polynomial root corresponds to an
        // equilibrium radius with its own momentum constant
        const auto roots = isolate_real_roots(*poly, 0.0, 1.0);
        for (const RootBracket& rb : roots) {
            const double z = rb.root;
            const double c2 = 24.0 * std::sqrt(3.0) * std::pow(p.m, 3) *
                              std::sqrt(1.0 - z * z) / std::pow(1.0 + 3.0 * z * z, 1.5);
            FamilyParams pc = p;
            pc.h.reset();
            pc.mom_wx = std::sqrt(c2);
            for (const auto& fp : fixed_points({fam, pc}))
                if (std::abs(fp.state[0] - z) < 1e-6) fps.push_back(fp);
        }
        kind = "energy-root";
    } else {
        fps = fixed_points(spec);
    }

    const int descartes = poly ? descartes_positive_count(*poly) : -1;

    auto row = param_cells();
    row.insert(row.end(), {"summary", "", "", "", "", "", "", "", "",
                           descartes >= 0 ? std::to_string(descartes) : "",
                           std::to_string(fps.size())});
    table.rows.push_back(row);

    for (const auto& fp : fps) {
        auto r = param_cells();
        r.push_back(kind);
        r.push_back(format_double(fp.state[0]));
        r.push_back(format_double(fp.state[1]));
        r.push_back(format_double(fp.residual));
        r.push_back(format_double(fp.eig[0].real()));
        r.push_back(format_double(fp.eig[0].imag()));
        r.push_back(format_double(fp.eig[1].real()));
        r.push_back(format_double(fp.eig[1].imag()));
        r.push_back(fp.closed_form_residual ? format_double(*fp.closed_form_residual) : "");
        r.push_back(descartes >= 0 ? std::to_string(descartes) : "");
        r.push_back(std::to_string(fps.size()));
        table.rows.push_back(r);
    }
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_double(tok));
    return out;
}

int cmd_fixed_points(const std::string& family_name_arg, double m, double c1, double c2,
                     std::optional<double> h, const std::string& sweep,
                     const std::string& out_dir) {
    const auto fam = family_from_name(family_name_arg);
    if (!fam) {
        std::cerr << "unknown family '" << family_name_arg << "'\n";
        return exit_validation;
    }
    FamilyParams base;
    base.m = m;
    base.mom_wx = c1;
    base.mom_yz = c2;
    base.h = h;

    std::vector<FamilyParams> combos;
    if (!sweep.empty()) {
        const size_t eq = sweep.find('=');
        if (eq == std::string::npos) {
            std::cerr << "sweep must look like key=v1,v2,...\n";
            return exit_validation;
        }
        const std::string key = sweep.substr(0, eq);
        std::vector<double> vals;
        try {
            vals = parse_list(sweep.substr(eq + 1));
        } catch (const std::exception& e) {
            std::cerr << "bad sweep: " << e.what() << "\n";
            return exit_validation;
        }
        for (double v : vals) {
            FamilyParams p = base;
            if (key == "m")
                p.m = v;
            else if (key == "h")
                p.h = v;
            else if (key == "c1" || key == "b" || key == "d1" || key == "c")
                p.mom_wx = v;
            else if (key == "c2" || key == "d2" || key == "a")
                p.mom_yz = v;
            else {
                std::cerr << "unknown sweep key '" << key << "'\n";
                return exit_validation;
            }
            combos.push_back(p);
        }
    } else {
        combos.push_back(base);
    }

    CsvTable table;
    table.header = {"family",  "m",       "mom_wx",  "mom_yz",  "h",
                    "kind",    "state1",  "state2",  "residual", "eig1_re",
                    "eig1_im", "eig2_re", "eig2_im", "closed_form_residual",
                    "descartes_count", "numeric_count"};

    for (const FamilyParams& p : combos) {
        try {
            if (*fam == Family::PeLagrangian && p.h) {
                append_fixed_point_rows(table, *fam, p);
            } else {
                FamilySpec spec{*fam, p};
                validate(spec);
                append_fixed_point_rows(table, *fam, p);
            }
        } catch (const std::exception& e) {
            std::cerr << "invalid parameters for " << family_name_arg << ": " << e.what()
                      << "\n";
            return exit_validation;
        }
    }

    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/fixed_points.csv";
    write_csv(path, table);
    std::cout << "wrote " << path << " (" << table.rows.size() << " rows)\n";
    return exit_ok;
}

int cmd_phase_portrait(const std::string& family_name_arg, double m, double c1, double c2,
                       std::optional<double> h, const std::string& ic_list, double t_end,
                       int samples, const std::string& out_dir) {
    const auto fam = family_from_name(family_name_arg);
    if (!fam) {
        std::cerr << "unknown family '" << family_name_arg << "'\n";
        return exit_validation;
    }
    FamilySpec spec{*fam, {}};
    spec.p.m = m;
    spec.p.mom_wx = c1;
    spec.p.mom_yz = c2;
    spec.p.h = h;
    try {
        validate(spec);
    } catch (const std::exception& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return exit_validation;
    }

    std::vector<std::array<double, 2>> ics;
    if (!ic_list.empty()) {
        std::stringstream ss(ic_list);
        std::string orbit;
        while (std::getline(ss, orbit, ';')) {
            if (orbit.empty()) continue;
            std::vector<double> v;
            try {
                v = parse_list(orbit);
            } catch (const std::exception& e) {
                std::cerr << "bad initial condition '" << orbit << "': " << e.what() << "\n";
                return exit_validation;
            }
            if (v.size() != 2) {
                std::cerr << "initial conditions need two numbers each\n";
                return exit_validation;
            }
            ics.push_back({v[0], v[1]});
        }
    }

    const auto names = family_state_names(*fam);
    CsvTable table;
    table.header = {"orbit", "kind", "t", names[0], names[1]};

    IntegratorSettings st;
    st.t_end = t_end;
    st.rel_tol = 1e-10;
    st.abs_tol = 1e-12;

    // orbits are independent; fan out under the thread cap
    std::vector<Trajectory> trajs(ics.size());
    parallel_for(static_cast<int>(ics.size()), [&](int k) {
        ReducedSystem sys;
        sys.dim = 2;
        sys.label = std::string(family_name(*fam));
        sys.space = family_space(*fam);
        sys.rhs = [spec](std::span<const double> y, std::span<double> dy) -> bool {
            if (!family_in_domain(spec, y)) return false;
            family_rhs(spec, y, dy);
            return std::isfinite(dy[1]);
        };
        sys.in_domain = [spec](std::span<const double> y) {
            return family_in_domain(spec, y.first(2));
        };
        trajs[k] = simulate_reduced(sys, ics[k], st, samples);
    });

    for (size_t k = 0; k < trajs.size(); ++k) {
        const Trajectory& tr = trajs[k];
        for (size_t i = 0; i < tr.size(); ++i)
            table.rows.push_back({std::to_string(k + 1), "point",
                                  format_double(tr.times[i]),
                                  format_double(tr.reduced_states[i][0]),
                                  format_double(tr.reduced_states[i][1])});
        for (const Event& ev : tr.events)
            if (ev.kind == EventKind::DomainExit)
                table.rows.push_back({std::to_string(k + 1), "domain-exit",
                                      format_double(ev.t), "", ""});
    }
    for (const auto& fp : fixed_points(spec))
        table.rows.push_back({"", "fixed-point", "", format_double(fp.state[0]),
                              format_double(fp.state[1])});

    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/portrait.csv";
    write_csv(path, table);
    std::cout << "wrote " << path << " (" << table.rows.size() << " rows)\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curved-nbody: N-body dynamics on the 3-sphere and hyperbolic 3-space"};
    app.require_subcommand(1);

    // run
    std::string scenario_path, out_dir;
    double tol = 0, t_end_override = 0;
    auto* run = app.add_subcommand("run", "simulate a scenario file and export artifacts");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--tol", tol, "override rel_tol (abs_tol = tol/100)");
    run->add_option("--t-end", t_end_override, "override integration time");

    // fixed-points
    std::string fp_family, fp_sweep, fp_out = "out";
    double fp_m = 1, fp_c1 = 0, fp_c2 = 0;
    std::optional<double> fp_h;
    auto* fp = app.add_subcommand("fixed-points", "tabulate family fixed points");
    fp->set_help_flag("--help", "print help"); // frees -h / --h for the energy constant
    fp->add_option("--family", fp_family)->required();
    fp->add_option("--m", fp_m, "mass");
    fp->add_option("--c1,--c,--b,--d1", fp_c1, "wx momentum constant");
    fp->add_option("--c2,--a,--d2", fp_c2, "yz momentum constant");
    fp->add_option("--h", fp_h, "energy constant (energy-parameterized families)");
    fp->add_option("--sweep", fp_sweep, "parameter sweep, e.g. h=0,8.5,10");
    fp->add_option("--out", fp_out, "output directory");

    // phase-portrait
    std::string pp_family, pp_ic, pp_out = "out";
    double pp_m = 1, pp_c1 = 0, pp_c2 = 0, pp_tend = 30;
    int pp_samples = 400;
    std::optional<double> pp_h;
    auto* pp = app.add_subcommand("phase-portrait", "sample family orbits for plotting");
    pp->set_help_flag("--help", "print help");
    pp->add_option("--family", pp_family)->required();
    pp->add_option("--m", pp_m, "mass");
    pp->add_option("--c1,--c,--b,--d1", pp_c1, "wx momentum constant");
    pp->add_option("--c2,--a,--d2", pp_c2, "yz momentum constant");
    pp->add_option("--h", pp_h, "energy constant");
    pp->add_option("--ic", pp_ic, "initial conditions 'x,v;x,v;...' (may be empty)");
    pp->add_option("--t-end", pp_tend, "integration time per orbit");
    pp->add_option("--samples", pp_samples, "samples per orbit");
    pp->add_option("--out", pp_out, "output directory");

    // verify
    std::uint64_t seed = 20260811ULL;
    auto* verify = app.add_subcommand("verify", "run the acceptance checks");
    verify->add_option("--seed", seed, "seed for the randomized sweeps");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, out_dir, tol, t_end_override);
        if (fp->parsed())
            return cmd_fixed_points(fp_family, fp_m, fp_c1, fp_c2, fp_h, fp_sweep, fp_out);
        if (pp->parsed())
            return cmd_phase_portrait(pp_family, pp_m, pp_c1, pp_c2, pp_h, pp_ic, pp_tend,
                                      pp_samples, pp_out);
        if (verify->parsed()) {
            const int failures = curved::print_acceptance(std::cout, seed);
            return failures == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return curved::exit_validation;
    }
    return 0;
}
