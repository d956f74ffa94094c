#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <ostream>

namespace spinrep {

using cplx = std::complex<double>;
using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using CVec3 = std::array<cplx, 3>;

// q = w + x i + y j + z k, Hamilton product, i j = k.
struct Quaternion {
    double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_)
        : w(w_), x(x_), y(y_), z(z_) {}

    // q = c1 + c2 j with c1 in span(1,i), c2 in span(1,i) (so c2 j spans (j,k)).
    static constexpr Quaternion from_complex_pair(cplx c1, cplx c2) {
        return {c1.real(), c1.imag(), c2.real(), c2.imag()};
    }
    static constexpr Quaternion from_imag(const Vec3& v) { return {0.0, v[0], v[1], v[2]}; }
    static constexpr Quaternion from_real4(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

    constexpr cplx complex1() const { return {w, x}; }
    constexpr cplx complex2() const { return {y, z}; }
    constexpr Vec3 imag() const { return {x, y, z}; }
    constexpr Vec4 real4() const { return {w, x, y, z}; }

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
    constexpr Quaternion operator+(const Quaternion& o) const {
        return {w + o.w, x + o.x, y + o.y, z + o.z};
    }
    constexpr Quaternion operator-(const Quaternion& o) const {
        return {w - o.w, x - o.x, y - o.y, z - o.z};
    }
    constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
    constexpr Quaternion operator/(double s) const { return {w / s, x / s, y / s, z / s}; }
    friend constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }

    constexpr Quaternion operator*(const Quaternion& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
    constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Quaternion inverse() const { return conj() / norm2(); }
    Quaternion normalized() const { return *this / norm(); }

    constexpr Quaternion& operator+=(const Quaternion& o) { return *this = *this + o; }
    constexpr Quaternion& operator-=(const Quaternion& o) { return *this = *this - o; }
};

inline constexpr Quaternion Q_ONE{1, 0, 0, 0};
inline constexpr Quaternion Q_I{0, 1, 0, 0};
inline constexpr Quaternion Q_J{0, 0, 1, 0};
inline constexpr Quaternion Q_K{0, 0, 0, 1};

inline constexpr double dot(const Quaternion& p, const Quaternion& q) {
    return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
}

// exp of an imaginary quaternion: cos|v| + sin|v| v/|v|.
inline Quaternion exp_imag(const Vec3& v) {
    double t = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (t < 1e-300) return Q_ONE;
    double s = std::sin(t) / t;
    return {std::cos(t), s * v[0], s * v[1], s * v[2]};
}

// left/right multiplication by a complex scalar (identified with w + xi)
inline constexpr Quaternion cmul_left(cplx c, const Quaternion& q) {
    return Quaternion{c.real(), c.imag(), 0, 0} * q;
}
inline constexpr Quaternion cmul_right(const Quaternion& q, cplx c) {
    return q * Quaternion{c.real(), c.imag(), 0, 0};
}

inline constexpr double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline constexpr Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }
inline constexpr Vec3 add3(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline constexpr Vec3 sub3(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline constexpr Vec3 scale3(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << "(" << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ")";
}

}  // namespace spinrep
