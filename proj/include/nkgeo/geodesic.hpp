#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include "nkgeo/manifold.hpp"
#include "nkgeo/rational.hpp"

namespace nkgeo {

/// Relative threshold below which c1 / c2 are classified as zero.
inline constexpr double kClassifyTol = 1e-10;

/// Trichotomy of geodesics by the conserved quantities: Constant for zero
/// velocity, Case1 for c1 = 0, Case2 for c1 != 0 and c2 = 0, Case3 otherwise.
enum class GeodesicCase { Constant, Case1, Case2, Case3 };

enum class PEigenClass { MinusOne, PlusOne, Neither };

/// Closed-form constants of one sphere factor. In the canonical frame the
/// factor's trivialized velocity is
///   alpha(t) = a i + b cos(ct) j - b sin(ct) k,
/// and the factor curve mixes the characteristic frequencies A >= B with
/// ratio phi (theta = atan phi). For Constant/Case1/Case2 only `a` is used.
struct FactorConstants {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double A = 0.0;
    double B = 0.0;
    double phi = 0.0;
    double theta = 0.0;
};

/// Classified initial data plus every derived constant of the closed form.
struct GeodesicParams {
    GeodesicCase kind = GeodesicCase::Constant;
    NKPoint base;                 // curve start; the closed form is translated here
    UnitQuat h;                   // canonical-frame rotation: h i h^-1 = c1/|c1|, ...
    ImQuat c1;                    // conserved alpha + beta
    ImQuat c2;                    // oscillating component of alpha - beta at t = 0
    double d1 = 0.0;              // <alpha - beta, c1> / |c1|^2
    FactorConstants x_factor;     // first sphere factor
    FactorConstants y_factor;     // second sphere factor (the tilded constants)

    /// Third axis of the rotating frame, -(c1/|c1|) x c2 (zero outside Case3).
    [[nodiscard]] ImQuat c3() const {
        const double n = c1.norm();
        return n > 0.0 ? -cross(c1 / n, c2) : ImQuat{};
    }
};

/// Evaluable geodesic; speed is the (constant) g-norm of the velocity.
struct GeodesicCurve {
    GeodesicParams params;
    double speed = 0.0;
};

// ---------------------------------------------------------------------------
// Factor curves.
// ---------------------------------------------------------------------------

/// cos(rate t) + sin(rate t) i, the single-frequency factor of Case1/Case2.
inline Quat circle_factor(double rate, double t) noexcept {
    return {std::cos(rate * t), std::sin(rate * t), 0.0, 0.0};
}

/// The two-frequency Case3 factor in phi form:
///   [mu cos(At) + (1-mu) cos(Bt)] + [mu sin(At) + (1-mu) sin(Bt)] i
///   + s [sin(At) - sin(Bt)] j + s [cos(At) - cos(Bt)] k,
/// with mu = 1/(1+phi^2) and s = phi/(1+phi^2). Unit norm for every t.
inline Quat mixed_factor(const FactorConstants& k, double t) noexcept {
    const double mu = 1.0 / (1.0 + k.phi * k.phi);
    const double wt = k.phi * k.phi * mu;
    const double s = k.phi * mu;
    const double ca = std::cos(k.A * t), sa = std::sin(k.A * t);
    const double cb = std::cos(k.B * t), sb = std::sin(k.B * t);
    return {mu * ca + wt * cb, mu * sa + wt * sb, s * (sa - sb), s * (ca - cb)};
}

/// Same curve written through theta = atan(phi): mu = cos^2 theta,
/// s = sin theta cos theta. Kept as an independent algebraic route.
inline Quat mixed_factor_theta(const FactorConstants& k, double t) noexcept {
    const double ct = std::cos(k.theta), st = std::sin(k.theta);
    const double c2 = ct * ct, s2 = st * st, sc = st * ct;
    const double ca = std::cos(k.A * t), sa = std::sin(k.A * t);
    const double cb = std::cos(k.B * t), sb = std::sin(k.B * t);
    return {c2 * ca + s2 * cb, c2 * sa + s2 * sb, sc * (sa - sb), sc * (ca - cb)};
}

/// Trivialized factor velocity in the canonical frame.
inline ImQuat canonical_alpha(const FactorConstants& k, double t) noexcept {
    return {k.a, k.b * std::cos(k.c * t), -k.b * std::sin(k.c * t)};
}

namespace detail {

inline Quat factor_curve(const GeodesicParams& gp, bool second, double t) noexcept {
    const FactorConstants& k = second ? gp.y_factor : gp.x_factor;
    switch (gp.kind) {
        case GeodesicCase::Constant: return Quat::one();
        case GeodesicCase::Case1:
        case GeodesicCase::Case2: return circle_factor(k.a, t);
        case GeodesicCase::Case3: return mixed_factor(k, t);
    }
    return Quat::one();
}

/// Characteristic data of f' = f (a i + b cos(ct) j - b sin(ct) k):
/// roots A i, B i of l^2 - c i l + (a^2 + b^2 - ac) = 0 and the coefficient
/// ratio phi, the positive root of b phi^2 - (c - 2a) phi - b = 0.
inline void fill_frequencies(FactorConstants& k) noexcept {
    const double disc = std::sqrt((2.0 * k.a - k.c) * (2.0 * k.a - k.c) + 4.0 * k.b * k.b);
    k.A = 0.5 * (k.c + disc);
    k.B = 0.5 * (k.c - disc);
    k.phi = (k.c - 2.0 * k.a + disc) / (2.0 * k.b);
    k.theta = std::atan(k.phi);
}

/// Completes a unit axis to a right-handed orthonormal frame and returns the
/// rotation mapping i to it. Secondary axis by Gram-Schmidt against j,
/// falling back to k when the axis is nearly parallel to j.
inline UnitQuat frame_from_axis(const ImQuat& axis) {
    ImQuat u2 = ImQuat{0.0, 1.0, 0.0} - axis * axis.y;
    if (u2.norm_sq() < 0.25) u2 = ImQuat{0.0, 0.0, 1.0} - axis * axis.z;
    u2 /= u2.norm();
    return rotation_from_frame(axis, u2, cross(axis, u2));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Classification.
// ---------------------------------------------------------------------------

/// Classifies an initial condition and derives every closed-form constant.
/// Zero velocity is not an error and yields the Constant case.
inline GeodesicParams derive_params(const NKPoint& start, const NKTangent& velocity) {
    require_same_base(start, velocity.base());
    GeodesicParams gp;
    gp.base = start;

    const ImQuat a0 = velocity.alpha();
    const ImQuat b0 = velocity.beta();
    const double scale = std::sqrt(a0.norm_sq() + b0.norm_sq());
    if (scale == 0.0) return gp;  // Constant

    gp.c1 = a0 + b0;
    const double c1n = gp.c1.norm();
    const double zero_tol = kClassifyTol * scale;

    if (c1n <= zero_tol) {
        gp.kind = GeodesicCase::Case1;
        gp.c1 = ImQuat{};
        const ImQuat sym = (a0 - b0) * 0.5;  // projects out the classified-away c1 residue
        const double amp = sym.norm();
        gp.h = detail::frame_from_axis(sym / amp);
        gp.x_factor.a = amp;
        gp.y_factor.a = -amp;
        return gp;
    }

    const ImQuat diff = a0 - b0;
    gp.d1 = dot(diff, gp.c1) / (c1n * c1n);
    gp.c2 = diff - gp.c1 * gp.d1;
    gp.x_factor.a = 0.5 * (1.0 + gp.d1) * c1n;
    gp.y_factor.a = 0.5 * (1.0 - gp.d1) * c1n;

    if (gp.c2.norm() <= zero_tol) {
        gp.kind = GeodesicCase::Case2;
        gp.c2 = ImQuat{};
        gp.h = detail::frame_from_axis(gp.c1 / c1n);
        return gp;
    }

    gp.kind = GeodesicCase::Case3;
    const double c2n = gp.c2.norm();
    gp.x_factor.b = 0.5 * c2n;
    gp.y_factor.b = -0.5 * c2n;
    gp.x_factor.c = gp.y_factor.c = (2.0 / 3.0) * c1n;
    const ImQuat u1 = gp.c1 / c1n;
    const ImQuat u2 = gp.c2 / c2n;
    gp.h = rotation_from_frame(u1, u2, cross(u1, u2));  // third axis is -c3/|c3|
    detail::fill_frequencies(gp.x_factor);
    detail::fill_frequencies(gp.y_factor);
    return gp;
}

inline GeodesicCurve make_geodesic(const NKPoint& start, const NKTangent& velocity) {
    GeodesicCurve curve{derive_params(start, velocity), 0.0};
    curve.speed = std::sqrt(std::max(0.0, metric_g(velocity, velocity)));
    return curve;
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

/// Point on the geodesic: (p0 h x(t) h^-1, q0 h y(t) h^-1).
inline NKPoint eval(const GeodesicCurve& curve, double t) {
    const GeodesicParams& gp = curve.params;
    const Quat& h = gp.h.q();
    const Quat hx = h * detail::factor_curve(gp, false, t) * h.conjugate();
    const Quat hy = h * detail::factor_curve(gp, true, t) * h.conjugate();
    return {UnitQuat::normalized(gp.base.p.q() * hx), UnitQuat::normalized(gp.base.q.q() * hy)};
}

/// Velocity (x alpha, y beta) pushed through the frame rotation and the left
/// translation; its g-norm equals curve.speed for every t.
inline NKTangent eval_velocity(const GeodesicCurve& curve, double t) {
    const GeodesicParams& gp = curve.params;
    const Quat& h = gp.h.q();
    const Quat xf = detail::factor_curve(gp, false, t);
    const Quat yf = detail::factor_curve(gp, true, t);
    const Quat du = gp.base.p.q() * (h * (xf * canonical_alpha(gp.x_factor, t).as_quat()) * h.conjugate());
    const Quat dv = gp.base.q.q() * (h * (yf * canonical_alpha(gp.y_factor, t).as_quat()) * h.conjugate());
    const NKPoint at{UnitQuat::normalized(gp.base.p.q() * (h * xf * h.conjugate())),
                     UnitQuat::normalized(gp.base.q.q() * (h * yf * h.conjugate()))};
    return {at, du, dv};
}

// ---------------------------------------------------------------------------
// Properties.
// ---------------------------------------------------------------------------

/// True iff the curve is also a geodesic of the Euclidean product metric
/// (c1 = 0 or c2 = 0; alpha and beta constant).
inline bool is_euclidean_geodesic(const GeodesicParams& gp) noexcept {
    return gp.kind != GeodesicCase::Case3;
}

/// Eigenvector class of the velocity under P: MinusOne iff c1 = 0, PlusOne
/// iff c1 != 0, c2 = 0, d1 = 0, Neither otherwise.
inline PEigenClass p_eigenvector_class(const GeodesicParams& gp) noexcept {
    switch (gp.kind) {
        case GeodesicCase::Constant:
        case GeodesicCase::Case1: return PEigenClass::MinusOne;
        case GeodesicCase::Case2:
            return std::abs(gp.d1) <= kClassifyTol ? PEigenClass::PlusOne : PEigenClass::Neither;
        case GeodesicCase::Case3: return PEigenClass::Neither;
    }
    return PEigenClass::Neither;
}

/// Closedness verdict with the rational approximations that produced it.
struct ClosednessReport {
    bool closed = false;
    double period = 0.0;                  // smallest common period when closed
    std::optional<Rational> ratio_x;      // a/a~ (Case2) or B/A (Case3)
    std::optional<Rational> ratio_y;      // B~/A~ (Case3)
};

/// Rationality test for the frequency ratios, with an explicit denominator
/// cap. Anchoring on the conserved sums (a + a~ = |c1|, A + B = A~ + B~ = c)
/// turns the approximated ratios into exact integer frequency multiples, so
/// the fundamental period is a gcd computation.
inline ClosednessReport closedness_report(const GeodesicParams& gp, long long max_den = 1'000'000) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    ClosednessReport rep;
    switch (gp.kind) {
        case GeodesicCase::Constant:
            rep.closed = true;
            rep.period = 0.0;
            return rep;
        case GeodesicCase::Case1:
            rep.closed = true;
            rep.period = two_pi / std::abs(gp.x_factor.a);
            return rep;
        case GeodesicCase::Case2: {
            const double a = gp.x_factor.a, at = gp.y_factor.a;
            const double mx = std::max(std::abs(a), std::abs(at));
            // a stationary factor imposes no constraint on the period
            if (std::abs(at) <= 1e-12 * mx) {
                rep.closed = true;
                rep.period = two_pi / std::abs(a);
                return rep;
            }
            if (std::abs(a) <= 1e-12 * mx) {
                rep.closed = true;
                rep.period = two_pi / std::abs(at);
                return rep;
            }
            rep.ratio_x = rational_approx(a / at, max_den);
            if (!rep.ratio_x) return rep;
            const long long p = rep.ratio_x->num, q = rep.ratio_x->den;
            if (p + q == 0) return rep;  // incompatible with a + a~ = |c1| > 0
            // a = p u, a~ = q u for u = |c1|/(p+q); gcd(p, q) = 1 for a convergent
            rep.closed = true;
            rep.period = two_pi * std::abs(static_cast<double>(p + q)) / gp.c1.norm();
            return rep;
        }
        case GeodesicCase::Case3: {
            rep.ratio_x = rational_approx(gp.x_factor.B / gp.x_factor.A, max_den);
            rep.ratio_y = rational_approx(gp.y_factor.B / gp.y_factor.A, max_den);
            if (!rep.ratio_x || !rep.ratio_y) return rep;
            // A + B = c > 0 and A > 0 force p + q > 0 on both factors
            const long long dx = rep.ratio_x->num + rep.ratio_x->den;
            const long long dy = rep.ratio_y->num + rep.ratio_y->den;
            if (dx <= 0 || dy <= 0) return rep;
            const long long l = std::lcm(dx, dy);
            // frequencies as integer multiples of c / l
            const long long fa = rep.ratio_x->den * (l / dx);
            const long long fb = rep.ratio_x->num * (l / dx);
            const long long fat = rep.ratio_y->den * (l / dy);
            const long long fbt = rep.ratio_y->num * (l / dy);
            const long long g = std::gcd(std::gcd(std::abs(fa), std::abs(fb)),
                                         std::gcd(std::abs(fat), std::abs(fbt)));
            if (g == 0) return rep;
            rep.closed = true;
            rep.period = two_pi * static_cast<double>(l) /
                         (gp.x_factor.c * static_cast<double>(g));
            return rep;
        }
    }
    return rep;
}

/// The smallest period when the geodesic is closed, absent otherwise.
/// The Constant case reports period 0.
inline std::optional<double> closedness(const GeodesicParams& gp, long long max_den = 1'000'000) {
    const ClosednessReport rep = closedness_report(gp, max_den);
    if (!rep.closed) return std::nullopt;
    return rep.period;
}

/// Rescales time so the curve has unit speed; phi and theta are invariant,
/// every rate and amplitude divides by the speed.
inline GeodesicCurve arclength_reparam(const GeodesicCurve& curve) {
    if (!(curve.speed > 0.0)) throw ZeroSpeedCurve("cannot reparametrize a zero-speed curve");
    const double s = curve.speed;
    GeodesicCurve out = curve;
    out.params.c1 /= s;
    out.params.c2 /= s;
    for (FactorConstants* k : {&out.params.x_factor, &out.params.y_factor}) {
        k->a /= s;
        k->b /= s;
        k->c /= s;
        k->A /= s;
        k->B /= s;
    }
    out.speed = 1.0;
    return out;
}

}  // namespace nkgeo
