// Acceptance suite: one pass/fail line per criterion; nonzero exit on any
// failure. Seed for the randomized sweeps can be given as argv[1].
#include <cstdint>
#include <cstdlib>
#include <iostream>

#include "curved/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 20260811ULL;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    const int failures = curved::print_acceptance(std::cout, seed);
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria passed\n";
    return 0;
}
