#pragma once

#include <cmath>
#include <ostream>

#include "nkgeo/errors.hpp"

namespace nkgeo {

/// Construction tolerance for unit quaternions.
inline constexpr double kUnitTol = 1e-12;
/// Orthonormality tolerance for frame-to-rotation solving.
inline constexpr double kFrameTol = 1e-9;

/// Quaternion w + x i + y j + z k with the Hamilton product (ij = k).
struct Quat {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quat() = default;
    constexpr Quat(double w_, double x_, double y_, double z_) noexcept
        : w(w_), x(x_), y(y_), z(z_) {}

    static constexpr Quat one() noexcept { return {1.0, 0.0, 0.0, 0.0}; }

    [[nodiscard]] constexpr Quat conjugate() const noexcept { return {w, -x, -y, -z}; }
    [[nodiscard]] constexpr double norm_sq() const noexcept { return w * w + x * x + y * y + z * z; }
    [[nodiscard]] double norm() const noexcept { return std::sqrt(norm_sq()); }

    constexpr Quat& operator+=(const Quat& o) noexcept {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quat& operator-=(const Quat& o) noexcept {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quat& operator*=(double s) noexcept {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
    constexpr Quat& operator/=(double s) noexcept { return *this *= 1.0 / s; }

    friend constexpr Quat operator+(Quat a, const Quat& b) noexcept { return a += b; }
    friend constexpr Quat operator-(Quat a, const Quat& b) noexcept { return a -= b; }
    friend constexpr Quat operator-(const Quat& a) noexcept { return {-a.w, -a.x, -a.y, -a.z}; }
    friend constexpr Quat operator*(Quat a, double s) noexcept { return a *= s; }
    friend constexpr Quat operator*(double s, Quat a) noexcept { return a *= s; }
    friend constexpr Quat operator/(Quat a, double s) noexcept { return a /= s; }

    friend constexpr Quat operator*(const Quat& a, const Quat& b) noexcept {
        return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    }

    friend std::ostream& operator<<(std::ostream& os, const Quat& q) {
        return os << "(" << q.w << " + " << q.x << "i + " << q.y << "j + " << q.z << "k)";
    }
};

constexpr double dot(const Quat& a, const Quat& b) noexcept {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Imaginary quaternion (zero real part); the copy of R^3 where the cross
/// product is the imaginary part of the Hamilton product:
/// u v = -<u,v> + u x v for imaginary u, v.
struct ImQuat {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr ImQuat() = default;
    constexpr ImQuat(double x_, double y_, double z_) noexcept : x(x_), y(y_), z(z_) {}

    [[nodiscard]] constexpr Quat as_quat() const noexcept { return {0.0, x, y, z}; }
    [[nodiscard]] constexpr double norm_sq() const noexcept { return x * x + y * y + z * z; }
    [[nodiscard]] double norm() const noexcept { return std::sqrt(norm_sq()); }

    constexpr ImQuat& operator+=(const ImQuat& o) noexcept {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr ImQuat& operator-=(const ImQuat& o) noexcept {
        x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr ImQuat& operator*=(double s) noexcept {
        x *= s; y *= s; z *= s;
        return *this;
    }
    constexpr ImQuat& operator/=(double s) noexcept { return *this *= 1.0 / s; }

    friend constexpr ImQuat operator+(ImQuat a, const ImQuat& b) noexcept { return a += b; }
    friend constexpr ImQuat operator-(ImQuat a, const ImQuat& b) noexcept { return a -= b; }
    friend constexpr ImQuat operator-(const ImQuat& a) noexcept { return {-a.x, -a.y, -a.z}; }
    friend constexpr ImQuat operator*(ImQuat a, double s) noexcept { return a *= s; }
    friend constexpr ImQuat operator*(double s, ImQuat a) noexcept { return a *= s; }
    friend constexpr ImQuat operator/(ImQuat a, double s) noexcept { return a /= s; }

    friend std::ostream& operator<<(std::ostream& os, const ImQuat& q) {
        return os << "(" << q.x << "i + " << q.y << "j + " << q.z << "k)";
    }
};

constexpr double dot(const ImQuat& a, const ImQuat& b) noexcept {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr ImQuat cross(const ImQuat& a, const ImQuat& b) noexcept {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

constexpr ImQuat im_part(const Quat& q) noexcept { return {q.x, q.y, q.z}; }

/// Quaternion constrained to the unit sphere S^3; |norm - 1| <= 1e-12 at
/// construction, inverse equals conjugate.
class UnitQuat {
  public:
    UnitQuat() noexcept : q_(Quat::one()) {}

    explicit UnitQuat(const Quat& q) : q_(q) {
        if (std::abs(q.norm() - 1.0) > kUnitTol)
            throw NotUnit("quaternion norm deviates from 1 beyond 1e-12");
    }

    /// Normalizing factory for numerically drifted input.
    static UnitQuat normalized(const Quat& q) {
        const double n = q.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw InvalidInput("cannot normalize a zero or non-finite quaternion");
        return UnitQuat(q / n, Unchecked{});
    }

    static UnitQuat one() noexcept { return UnitQuat(); }

    [[nodiscard]] const Quat& q() const noexcept { return q_; }
    [[nodiscard]] UnitQuat inverse() const noexcept { return UnitQuat(q_.conjugate(), Unchecked{}); }

    friend UnitQuat operator*(const UnitQuat& a, const UnitQuat& b) noexcept {
        return UnitQuat(a.q_ * b.q_, Unchecked{});
    }

    friend std::ostream& operator<<(std::ostream& os, const UnitQuat& q) { return os << q.q_; }

  private:
    struct Unchecked {};
    UnitQuat(const Quat& q, Unchecked) noexcept : q_(q) {}

    Quat q_;
};

/// h v h^{-1}: the SO(3) action of a unit quaternion on imaginary quaternions.
/// Preserves norms and cross products.
inline ImQuat conjugate_by(const UnitQuat& h, const ImQuat& v) noexcept {
    return im_part(h.q() * v.as_quat() * h.q().conjugate());
}

/// Solves h i h^{-1} = u1, h j h^{-1} = u2, h k h^{-1} = u3 for a
/// right-handed orthonormal frame (u1, u2, u3).
///
/// h is determined up to sign; the representative with w >= 0 is returned,
/// ties broken toward positive x, then y, then z.
inline UnitQuat rotation_from_frame(const ImQuat& u1, const ImQuat& u2, const ImQuat& u3) {
    const ImQuat cols[3] = {u1, u2, u3};
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            const double want = (a == b) ? 1.0 : 0.0;
            if (std::abs(dot(cols[a], cols[b]) - want) > kFrameTol)
                throw NonOrthonormalFrame("frame Gram matrix deviates from identity beyond 1e-9");
        }
    if (dot(cross(u1, u2), u3) < 0.0)
        throw LeftHandedFrame("frame is left-handed: <u1 x u2, u3> < 0");

    // Rotation matrix with columns u1, u2, u3, converted via the standard
    // largest-diagonal branch.
    const double m[3][3] = {{u1.x, u2.x, u3.x}, {u1.y, u2.y, u3.y}, {u1.z, u2.z, u3.z}};
    const double tr = m[0][0] + m[1][1] + m[2][2];
    Quat h;
    if (tr >= m[0][0] && tr >= m[1][1] && tr >= m[2][2]) {
        const double s = std::sqrt(tr + 1.0) * 2.0;  // 4w
        h = {0.25 * s, (m[2][1] - m[1][2]) / s, (m[0][2] - m[2][0]) / s, (m[1][0] - m[0][1]) / s};
    } else if (m[0][0] >= m[1][1] && m[0][0] >= m[2][2]) {
        const double s = std::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]) * 2.0;  // 4x
        h = {(m[2][1] - m[1][2]) / s, 0.25 * s, (m[0][1] + m[1][0]) / s, (m[0][2] + m[2][0]) / s};
    } else if (m[1][1] >= m[2][2]) {
        const double s = std::sqrt(1.0 - m[0][0] + m[1][1] - m[2][2]) * 2.0;  // 4y
        h = {(m[0][2] - m[2][0]) / s, (m[0][1] + m[1][0]) / s, 0.25 * s, (m[1][2] + m[2][1]) / s};
    } else {
        const double s = std::sqrt(1.0 - m[0][0] - m[1][1] + m[2][2]) * 2.0;  // 4z
        h = {(m[1][0] - m[0][1]) / s, (m[0][2] + m[2][0]) / s, (m[1][2] + m[2][1]) / s, 0.25 * s};
    }

    const bool flip = h.w < 0.0 ||
                      (h.w == 0.0 && (h.x < 0.0 || (h.x == 0.0 && (h.y < 0.0 || (h.y == 0.0 && h.z < 0.0)))));
    if (flip) h = -h;
    return UnitQuat::normalized(h);
}

}  // namespace nkgeo
