#ifndef CURVED_ACCEPTANCE_HPP
#define CURVED_ACCEPTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace curved {

struct AcceptanceResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The acceptance checks: deterministic end-to-end verification runs with
/// pinned tolerances. `seed` drives the randomized sweeps.
std::vector<AcceptanceResult> run_acceptance(std::uint64_t seed);

/// Prints one PASS/FAIL line per check; returns the number of failures.
int print_acceptance(std::ostream& os, std::uint64_t seed);

} // namespace curved

#endif
