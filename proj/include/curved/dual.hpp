#ifndef CURVED_DUAL_HPP
#define CURVED_DUAL_HPP

#include <cmath>

namespace curved {

// Forward-mode dual number: carries a value and one directional derivative.
// Used to get exact Jacobians of the scalar family systems.
struct Dual {
    double v = 0, d = 0;

    Dual() = default;
    Dual(double value) : v(value), d(0) {}
    Dual(double value, double deriv) : v(value), d(deriv) {}
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

inline Dual sqrt(Dual a) {
    const double s = std::sqrt(a.v);
    return {s, a.d / (2 * s)};
}
inline Dual sin(Dual a) { return {std::sin(a.v), a.d * std::cos(a.v)}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -a.d * std::sin(a.v)}; }
inline Dual sinh(Dual a) { return {std::sinh(a.v), a.d * std::cosh(a.v)}; }
inline Dual cosh(Dual a) { return {std::cosh(a.v), a.d * std::sinh(a.v)}; }

// double passthroughs so templated code works for both scalar types
inline double value_of(double x) { return x; }
inline double value_of(Dual x) { return x.v; }

} // namespace curved

#endif
