#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace billiards {

// Euclidean coordinates. Planar scenes keep the third slot at zero, so every
// operation below is dimension-agnostic.
struct Vector {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    constexpr Vector() = default;
    constexpr Vector(double x, double y, double z = 0.0) : c{x, y, z} {}

    constexpr double operator[](std::size_t i) const { return c[i]; }
    constexpr double& operator[](std::size_t i) { return c[i]; }

    constexpr double x() const { return c[0]; }
    constexpr double y() const { return c[1]; }
    constexpr double z() const { return c[2]; }

    constexpr Vector& operator+=(const Vector& o) {
        c[0] += o.c[0]; c[1] += o.c[1]; c[2] += o.c[2];
        return *this;
    }
    constexpr Vector& operator-=(const Vector& o) {
        c[0] -= o.c[0]; c[1] -= o.c[1]; c[2] -= o.c[2];
        return *this;
    }
    constexpr Vector& operator*=(double s) {
        c[0] *= s; c[1] *= s; c[2] *= s;
        return *this;
    }

    friend constexpr bool operator==(const Vector&, const Vector&) = default;
};

constexpr Vector operator+(Vector a, const Vector& b) { return a += b; }
constexpr Vector operator-(Vector a, const Vector& b) { return a -= b; }
constexpr Vector operator*(Vector a, double s) { return a *= s; }
constexpr Vector operator*(double s, Vector a) { return a *= s; }
constexpr Vector operator-(const Vector& a) { return {-a[0], -a[1], -a[2]}; }

constexpr double dot(const Vector& a, const Vector& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

constexpr Vector cross(const Vector& a, const Vector& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm2(const Vector& a) { return dot(a, a); }
inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vector& a, const Vector& b) { return norm(a - b); }

inline bool is_finite(const Vector& a) {
    return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

// A direction on the unit sphere. Only constructible through normalisation,
// so ‖v‖ = 1 holds to rounding for every instance.
class UnitVector {
public:
    // Default direction is +x.
    constexpr UnitVector() : v_{1.0, 0.0, 0.0} {}

    // Throws std::invalid_argument for zero or non-finite input.
    static UnitVector normalize(const Vector& v);

    // For values that are already unit to rounding (e.g. a reflection of a
    // unit vector); renormalises so drift never accumulates.
    static UnitVector renormalize(const Vector& v) { return normalize(v); }

    constexpr const Vector& vec() const { return v_; }
    constexpr operator const Vector&() const { return v_; }
    constexpr double operator[](std::size_t i) const { return v_[i]; }

    constexpr UnitVector operator-() const { return UnitVector(-v_); }

    friend constexpr bool operator==(const UnitVector&, const UnitVector&) = default;

private:
    constexpr explicit UnitVector(const Vector& v) : v_(v) {}
    Vector v_;
};

// Row-major 3x3 rotation matrix.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    constexpr Vector operator*(const Vector& v) const {
        return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
                m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
                m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
    }
    constexpr Vector transpose_times(const Vector& v) const {
        return {m[0] * v[0] + m[3] * v[1] + m[6] * v[2],
                m[1] * v[0] + m[4] * v[1] + m[7] * v[2],
                m[2] * v[0] + m[5] * v[1] + m[8] * v[2]};
    }
};

// Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 rotation_from_angles(double yaw, double pitch, double roll);

}  // namespace billiards
