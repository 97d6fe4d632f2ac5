#pragma once

#include <array>
#include <cmath>

#include "nkgeo/quaternion.hpp"

namespace nkgeo {

/// Base points of tangent operations must agree componentwise to this.
inline constexpr double kBaseTol = 1e-12;
/// Tangency defect below this is projected away at construction, beyond it
/// the input is rejected.
inline constexpr double kTangencyTol = 1e-8;

inline constexpr double kSqrt3 = 1.7320508075688772;
/// Global factor 2/(3 sqrt 3) carried by the tensor G.
inline constexpr double kGFactor = 2.0 / (3.0 * kSqrt3);

/// A point (p, q) of S^3 x S^3.
struct NKPoint {
    UnitQuat p;
    UnitQuat q;

    NKPoint() = default;
    NKPoint(UnitQuat p_, UnitQuat q_) noexcept : p(p_), q(q_) {}

    static NKPoint origin() noexcept { return {UnitQuat::one(), UnitQuat::one()}; }
};

inline bool same_base(const NKPoint& a, const NKPoint& b, double tol = kBaseTol) noexcept {
    const Quat dp = a.p.q() - b.p.q();
    const Quat dq = a.q.q() - b.q.q();
    const auto worst = [](const Quat& d) {
        return std::max(std::max(std::abs(d.w), std::abs(d.x)), std::max(std::abs(d.y), std::abs(d.z)));
    };
    return worst(dp) <= tol && worst(dq) <= tol;
}

inline void require_same_base(const NKPoint& a, const NKPoint& b) {
    if (!same_base(a, b)) throw BaseMismatch("tangent operation across different base points");
}

/// A tangent vector (U, V) at (p, q): U _|_ p and V _|_ q in R^4.
///
/// Small tangency defects (inner product with the base below 1e-8 relative)
/// are projected away at construction; larger ones are rejected, since a
/// silent large correction would hide a bug upstream.
class NKTangent {
  public:
    NKTangent(NKPoint base, const Quat& u, const Quat& v) : base_(base), u_(u), v_(v) {
        const double du = dot(u_, base_.p.q());
        const double dv = dot(v_, base_.q.q());
        if (std::abs(du) > kTangencyTol * std::max(1.0, u_.norm()) ||
            std::abs(dv) > kTangencyTol * std::max(1.0, v_.norm()))
            throw NotTangent("vector has a normal component beyond the projection tolerance");
        u_ -= base_.p.q() * du;
        v_ -= base_.q.q() * dv;
    }

    [[nodiscard]] const NKPoint& base() const noexcept { return base_; }
    [[nodiscard]] const Quat& u() const noexcept { return u_; }
    [[nodiscard]] const Quat& v() const noexcept { return v_; }

    /// Left trivialization p^{-1} U of the first component (imaginary).
    [[nodiscard]] ImQuat alpha() const noexcept { return im_part(base_.p.q().conjugate() * u_); }
    /// Left trivialization q^{-1} V of the second component (imaginary).
    [[nodiscard]] ImQuat beta() const noexcept { return im_part(base_.q.q().conjugate() * v_); }

    friend NKTangent operator+(const NKTangent& a, const NKTangent& b) {
        require_same_base(a.base_, b.base_);
        return {a.base_, a.u_ + b.u_, a.v_ + b.v_};
    }
    friend NKTangent operator-(const NKTangent& a, const NKTangent& b) {
        require_same_base(a.base_, b.base_);
        return {a.base_, a.u_ - b.u_, a.v_ - b.v_};
    }
    friend NKTangent operator-(const NKTangent& a) { return {a.base_, -a.u_, -a.v_}; }
    friend NKTangent operator*(const NKTangent& a, double s) { return {a.base_, a.u_ * s, a.v_ * s}; }
    friend NKTangent operator*(double s, const NKTangent& a) { return a * s; }

  private:
    NKPoint base_;
    Quat u_, v_;
};

// ---------------------------------------------------------------------------
// Frame fields E_i = (p e_i, 0), F_i = (0, q e_i) with e_1 = i, e_2 = j,
// e_3 = -k, and linear combinations of them.
// ---------------------------------------------------------------------------

enum class FrameFamily { E, F };

struct FrameIndex {
    FrameFamily family;
    int i;  // 1..3

    FrameIndex(FrameFamily f, int idx) : family(f), i(idx) {
        if (i < 1 || i > 3) throw InvalidInput("frame index must lie in {1,2,3}");
    }
};

/// Totally antisymmetric symbol on {1,2,3}.
constexpr int epsilon_symbol(int i, int j, int k) noexcept { return (i - j) * (j - k) * (k - i) / 2; }

/// Imaginary axis of the k-th frame field within one factor (note the sign
/// of the third axis).
constexpr ImQuat frame_axis(int i) noexcept {
    return i == 1 ? ImQuat{1.0, 0.0, 0.0} : i == 2 ? ImQuat{0.0, 1.0, 0.0} : ImQuat{0.0, 0.0, -1.0};
}

inline NKTangent frame_field(FrameIndex idx, const NKPoint& at) {
    const Quat axis = frame_axis(idx.i).as_quat();
    if (idx.family == FrameFamily::E) return {at, at.p.q() * axis, Quat{}};
    return {at, Quat{}, at.q.q() * axis};
}

/// Coefficients over the ordered basis (E1, E2, E3, F1, F2, F3).
struct FrameCombo {
    std::array<double, 6> coeff{};

    static int slot(FrameIndex idx) noexcept {
        return (idx.family == FrameFamily::F ? 3 : 0) + idx.i - 1;
    }
    double& operator[](FrameIndex idx) noexcept { return coeff[static_cast<size_t>(slot(idx))]; }
    double operator[](FrameIndex idx) const noexcept { return coeff[static_cast<size_t>(slot(idx))]; }

    /// Evaluates the combination as a tangent vector at a point.
    [[nodiscard]] NKTangent at(const NKPoint& pt) const {
        Quat u{}, v{};
        for (int i = 1; i <= 3; ++i) {
            const Quat axis = frame_axis(i).as_quat();
            u += pt.p.q() * axis * coeff[static_cast<size_t>(i - 1)];
            v += pt.q.q() * axis * coeff[static_cast<size_t>(i + 2)];
        }
        return {pt, u, v};
    }

    friend FrameCombo operator*(FrameCombo c, double s) noexcept {
        for (double& x : c.coeff) x *= s;
        return c;
    }
    friend FrameCombo operator+(FrameCombo a, const FrameCombo& b) noexcept {
        for (size_t i = 0; i < 6; ++i) a.coeff[i] += b.coeff[i];
        return a;
    }
    friend FrameCombo operator-(FrameCombo a, const FrameCombo& b) noexcept {
        for (size_t i = 0; i < 6; ++i) a.coeff[i] -= b.coeff[i];
        return a;
    }
};

/// Lie bracket of two frame fields, computed from the factor-wise commutator
/// [p u, p v] = 2 p (u x v) and expressed back in the frame basis. The
/// coefficients are exact integers.
inline FrameCombo lie_bracket_frame(FrameIndex a, FrameIndex b) {
    FrameCombo out;
    if (a.family != b.family) return out;  // mixed brackets vanish
    const ImQuat w = cross(frame_axis(a.i), frame_axis(b.i)) * 2.0;
    for (int k = 1; k <= 3; ++k) out[{a.family, k}] = dot(w, frame_axis(k));
    return out;
}

/// Levi-Civita connection of the Hermitian metric on frame-field pairs,
/// encoded as table data.
inline FrameCombo connection_table(FrameIndex a, FrameIndex b) {
    FrameCombo out;
    const bool ae = a.family == FrameFamily::E;
    const bool be = b.family == FrameFamily::E;
    for (int k = 1; k <= 3; ++k) {
        const int e = epsilon_symbol(a.i, b.i, k);
        if (e == 0) continue;
        if (ae && be) {
            out[{FrameFamily::E, k}] -= e;
        } else if (ae && !be) {
            out[{FrameFamily::E, k}] += e / 3.0;
            out[{FrameFamily::F, k}] -= e / 3.0;
        } else if (!ae && be) {
            out[{FrameFamily::F, k}] += e / 3.0;
            out[{FrameFamily::E, k}] -= e / 3.0;
        } else {
            out[{FrameFamily::F, k}] -= e;
        }
    }
    return out;
}

/// The covariant derivative of J on frame-field pairs, encoded as table
/// data. Consistent with connection_table and with tensor_G at every point.
inline FrameCombo nabla_J_table(FrameIndex a, FrameIndex b) {
    FrameCombo out;
    const bool ae = a.family == FrameFamily::E;
    const bool be = b.family == FrameFamily::E;
    for (int k = 1; k <= 3; ++k) {
        const double e = kGFactor * epsilon_symbol(a.i, b.i, k);
        if (e == 0.0) continue;
        if (ae && be) {
            out[{FrameFamily::E, k}] = -e;
            out[{FrameFamily::F, k}] = -2.0 * e;
        } else if (ae != be) {
            out[{FrameFamily::E, k}] = -e;
            out[{FrameFamily::F, k}] = e;
        } else {
            out[{FrameFamily::E, k}] = 2.0 * e;
            out[{FrameFamily::F, k}] = e;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrics and structure tensors.
// ---------------------------------------------------------------------------

/// Product of the round metrics: <U,U'> + <V,V'>.
inline double metric_euclidean(const NKTangent& a, const NKTangent& b) {
    require_same_base(a.base(), b.base());
    return dot(a.u(), b.u()) + dot(a.v(), b.v());
}

/// The Hermitian metric
///   g(Z,Z') = 4/3 (<U,U'> + <V,V'>) - 2/3 (<p^-1 U, q^-1 V'> + <p^-1 U', q^-1 V>).
inline double metric_g(const NKTangent& a, const NKTangent& b) {
    require_same_base(a.base(), b.base());
    const double plain = dot(a.u(), b.u()) + dot(a.v(), b.v());
    const double mixed = dot(a.alpha(), b.beta()) + dot(b.alpha(), a.beta());
    return (4.0 / 3.0) * plain - (2.0 / 3.0) * mixed;
}

/// The almost complex structure
///   J(U,V) = (2 p q^-1 V - U, -2 q p^-1 U + V) / sqrt 3,   J^2 = -Id.
inline NKTangent almost_complex_J(const NKTangent& t) {
    const Quat& p = t.base().p.q();
    const Quat& q = t.base().q.q();
    const Quat pv = p * q.conjugate() * t.v();
    const Quat qu = q * p.conjugate() * t.u();
    return {t.base(), (pv * 2.0 - t.u()) / kSqrt3, (t.v() - qu * 2.0) / kSqrt3};
}

/// g computed as the Hermitian average (1/2)(<Z,Z'> + <JZ,JZ'>); agrees with
/// metric_g and serves as its independent cross-check.
inline double metric_g_via_J(const NKTangent& a, const NKTangent& b) {
    return 0.5 * (metric_euclidean(a, b) + metric_euclidean(almost_complex_J(a), almost_complex_J(b)));
}

/// The almost product structure P(U,V) = (p q^-1 V, q p^-1 U);
/// P^2 = Id, PJ = -JP, g(PZ,PZ') = g(Z,Z').
inline NKTangent almost_product_P(const NKTangent& t) {
    const Quat& p = t.base().p.q();
    const Quat& q = t.base().q.q();
    return {t.base(), p * q.conjugate() * t.v(), q * p.conjugate() * t.u()};
}

/// The plain product structure Q(U,V) = (-U, V).
inline NKTangent product_Q(const NKTangent& t) { return {t.base(), -t.u(), t.v()}; }

/// Q expressed through P: (2 PJZ - JZ) / sqrt 3.
inline NKTangent q_from_p(const NKTangent& t) {
    const NKTangent jz = almost_complex_J(t);
    return (almost_product_P(jz) * 2.0 - jz) * (1.0 / kSqrt3);
}

/// P expressed through Q: (Z - sqrt 3 Q(JZ)) / 2.
inline NKTangent p_from_q(const NKTangent& t) {
    return (t - product_Q(almost_complex_J(t)) * kSqrt3) * 0.5;
}

/// The skew-symmetric tensor G = nabla J evaluated pointwise: with
/// X = (p a, q b), Y = (p c, q d) for imaginary a, b, c, d,
///   G(X,Y) = 2/(3 sqrt 3) (p (b x c + a x d + a x c - 2 b x d),
///                          q (-a x d - b x c + 2 a x c - b x d)).
inline NKTangent tensor_G(const NKTangent& x, const NKTangent& y) {
    require_same_base(x.base(), y.base());
    const ImQuat a = x.alpha(), b = x.beta(), c = y.alpha(), d = y.beta();
    const ImQuat first = cross(b, c) + cross(a, d) + cross(a, c) - cross(b, d) * 2.0;
    const ImQuat second = -cross(a, d) - cross(b, c) + cross(a, c) * 2.0 - cross(b, d);
    return {x.base(), x.base().p.q() * first.as_quat() * kGFactor,
            x.base().q.q() * second.as_quat() * kGFactor};
}

/// Difference between the Euclidean and the Hermitian Levi-Civita
/// connections: nabla^E_X Y - nabla~_X Y = (J G(X, PY) + J G(Y, PX)) / 2.
inline NKTangent euclidean_connection_relation(const NKTangent& x, const NKTangent& y) {
    const NKTangent t1 = almost_complex_J(tensor_G(x, almost_product_P(y)));
    const NKTangent t2 = almost_complex_J(tensor_G(y, almost_product_P(x)));
    return (t1 + t2) * 0.5;
}

// ---------------------------------------------------------------------------
// Isometries (a p c^-1, b q c^-1).
// ---------------------------------------------------------------------------

inline NKPoint isometry_translate(const UnitQuat& a, const UnitQuat& b, const UnitQuat& c,
                                  const NKPoint& pt) {
    return {a * pt.p * c.inverse(), b * pt.q * c.inverse()};
}

inline NKTangent isometry_pushforward(const UnitQuat& a, const UnitQuat& b, const UnitQuat& c,
                                      const NKTangent& t) {
    const NKPoint moved = isometry_translate(a, b, c, t.base());
    const Quat ci = c.inverse().q();
    return {moved, a.q() * t.u() * ci, b.q() * t.v() * ci};
}

// R^8 helpers used by oracle comparisons and file output.

inline std::array<double, 8> point_components(const NKPoint& pt) noexcept {
    const Quat& p = pt.p.q();
    const Quat& q = pt.q.q();
    return {p.w, p.x, p.y, p.z, q.w, q.x, q.y, q.z};
}

/// Euclidean distance of two points as vectors in R^8.
inline double distance_r8(const NKPoint& a, const NKPoint& b) noexcept {
    const auto ca = point_components(a), cb = point_components(b);
    double s = 0.0;
    for (size_t i = 0; i < 8; ++i) {
        const double d = ca[i] - cb[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace nkgeo
