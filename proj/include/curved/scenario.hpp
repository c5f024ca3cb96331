#ifndef CURVED_SCENARIO_HPP
#define CURVED_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "curved/families.hpp"
#include "curved/rotopulse.hpp"
#include "curved/simulate.hpp"

namespace curved {

/// A simulation scenario: exactly one of the three initial-data forms
/// (full ambient configuration, named family state, or raw ansatz-class
/// state) plus integrator settings and the sampling grid.
///
/// Scenario files are flat `key = value` text; `#` starts a comment.
/// See docs/scenario-format.md for the schema.
struct Scenario {
    enum class Kind { Full, Family, Criterion };
    Kind kind = Kind::Full;
    Space space;

    // Kind::Full
    std::vector<double> masses;
    std::vector<Vec4> positions;
    std::vector<Vec4> velocities;

    // Kind::Family
    std::optional<FamilySpec> family;
    std::array<double, 2> family_state{};

    // Kind::Criterion
    std::optional<Ansatz> ansatz;
    std::vector<double> criterion_core;

    double alpha0 = 0, beta0 = 0;

    IntegratorSettings settings;
    int samples = 500;
    std::string out_dir; // optional; --out overrides

    std::string label;
};

/// Parse + validate; throws ScenarioError carrying a 1-based line number.
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

} // namespace curved

#endif
