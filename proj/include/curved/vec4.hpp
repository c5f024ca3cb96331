#ifndef CURVED_VEC4_HPP
#define CURVED_VEC4_HPP

#include <cmath>

namespace curved {

// Ambient coordinate vector (w, x, y, z) of R^4 / R^{3,1}.
struct Vec4 {
    double w = 0, x = 0, y = 0, z = 0;

    Vec4& operator+=(const Vec4& o) { w += o.w; x += o.x; y += o.y; z += o.z; return *this; }
    Vec4& operator-=(const Vec4& o) { w -= o.w; x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec4& operator*=(double s) { w *= s; x *= s; y *= s; z *= s; return *this; }
};

inline Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
inline Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
inline Vec4 operator*(double s, Vec4 a) { return a *= s; }
inline Vec4 operator*(Vec4 a, double s) { return a *= s; }

} // namespace curved

#endif
