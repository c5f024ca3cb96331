#ifndef CURVED_ERRORS_HPP
#define CURVED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curved {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Point unusable for projection: near the origin / null cone, or on the
// wrong sheet of the hyperboloid.
struct DegeneratePoint : Error {
    using Error::Error;
};

// Input violates the manifold or tangency constraint beyond tol_constraint.
struct OffManifold : Error {
    using Error::Error;
};

// A pair (i, j) is at or beyond the collision/antipodal singularity.
struct SingularPair : Error {
    SingularPair(int i_, int j_, double qij_)
        : Error("singular pair (" + std::to_string(i_) + "," + std::to_string(j_) +
                "), q_ij = " + std::to_string(qij_)),
          i(i_), j(j_), qij(qij_) {}
    int i, j;
    double qij;
};

// An angular-velocity denominator vanished (all radii of one block zero).
struct DegenerateRadius : Error {
    using Error::Error;
};

// Rotopulsating ansatz class that provably has no solutions.
struct UnsupportedClass : Error {
    using Error::Error;
};

// Scenario file failed validation; line is 1-based, 0 if not tied to a line.
struct ScenarioError : Error {
    ScenarioError(int line_, const std::string& what_)
        : Error(what_), line(line_) {}
    int line;
};

} // namespace curved

#endif
