#pragma once

#include <utility>
#include <vector>

#include "nkgeo/geodesic.hpp"
#include "nkgeo/manifold.hpp"

namespace nkgeo {

enum class Projection { Renormalize, None };

struct IntegratorConfig {
    double step = 1e-3;
    double t_end = 10.0;
    Projection projection = Projection::Renormalize;
};

/// State of the reduced first-order system
///   x' = x alpha,  y' = y beta,  alpha' = 2/3 alpha x beta,  beta' = -alpha',
/// with x, y relative to the start point (left-trivialized at (1,1)).
/// Under Projection::Renormalize x and y are kept unit by per-step
/// renormalization; alpha and beta are imaginary by representation.
struct IntegratorState {
    Quat x = Quat::one();
    Quat y = Quat::one();
    ImQuat alpha;
    ImQuat beta;
    double t = 0.0;
};

namespace detail {

struct StateDeriv {
    Quat dx, dy;
    ImQuat dalpha, dbeta;
};

inline StateDeriv reduced_rhs(const IntegratorState& s) noexcept {
    const ImQuat w = cross(s.alpha, s.beta) * (2.0 / 3.0);
    return {s.x * s.alpha.as_quat(), s.y * s.beta.as_quat(), w, -w};
}

inline IntegratorState offset(const IntegratorState& s, const StateDeriv& d, double dt) noexcept {
    return {s.x + d.dx * dt, s.y + d.dy * dt, s.alpha + d.dalpha * dt, s.beta + d.dbeta * dt,
            s.t + dt};
}

}  // namespace detail

/// One classical RK4 step of the reduced system.
inline IntegratorState rk4_step(const IntegratorState& s, double dt, Projection proj) noexcept {
    const auto k1 = detail::reduced_rhs(s);
    const auto k2 = detail::reduced_rhs(detail::offset(s, k1, 0.5 * dt));
    const auto k3 = detail::reduced_rhs(detail::offset(s, k2, 0.5 * dt));
    const auto k4 = detail::reduced_rhs(detail::offset(s, k3, dt));
    const double w = dt / 6.0;
    IntegratorState out;
    out.x = s.x + (k1.dx + (k2.dx + k3.dx) * 2.0 + k4.dx) * w;
    out.y = s.y + (k1.dy + (k2.dy + k3.dy) * 2.0 + k4.dy) * w;
    out.alpha = s.alpha + (k1.dalpha + (k2.dalpha + k3.dalpha) * 2.0 + k4.dalpha) * w;
    out.beta = s.beta + (k1.dbeta + (k2.dbeta + k3.dbeta) * 2.0 + k4.dbeta) * w;
    out.t = s.t + dt;
    if (proj == Projection::Renormalize) {
        out.x /= out.x.norm();
        out.y /= out.y.norm();
    }
    return out;
}

/// Fixed-step RK4 trace of the reduced system on [0, t_end]. States sit on
/// the grid i * step, plus a final partial step landing exactly on t_end
/// when the grid misses it.
inline std::vector<IntegratorState> integrate_states(const NKPoint& start,
                                                     const NKTangent& velocity,
                                                     const IntegratorConfig& cfg) {
    if (!(cfg.step > 0.0)) throw NonPositiveStep("integrator step must be positive");
    require_same_base(start, velocity.base());
    IntegratorState s;
    s.alpha = velocity.alpha();
    s.beta = velocity.beta();

    const auto n = static_cast<long long>(std::floor(cfg.t_end / cfg.step + 1e-9));
    std::vector<IntegratorState> trace;
    trace.reserve(static_cast<size_t>(std::max(n, 0LL)) + 2);
    trace.push_back(s);
    for (long long i = 1; i <= n; ++i) {
        s = rk4_step(s, cfg.step, cfg.projection);
        s.t = static_cast<double>(i) * cfg.step;  // keep the grid free of summation drift
        trace.push_back(s);
    }
    const double rem = cfg.t_end - static_cast<double>(n) * cfg.step;
    if (rem > 1e-12 * std::max(1.0, std::abs(cfg.t_end))) {
        s = rk4_step(s, rem, cfg.projection);
        s.t = cfg.t_end;
        trace.push_back(s);
    }
    return trace;
}

/// Advances a state to t_target using full steps of `step` plus one partial
/// landing step.
inline IntegratorState advance_to(IntegratorState s, double t_target, double step,
                                  Projection proj) {
    if (!(step > 0.0)) throw NonPositiveStep("integrator step must be positive");
    while (s.t + step <= t_target + 1e-12) s = rk4_step(s, step, proj);
    const double rem = t_target - s.t;
    if (rem > 1e-12) s = rk4_step(s, rem, proj);
    s.t = t_target;
    return s;
}

/// Translates a relative state back to the curve through `start`.
inline NKPoint state_point(const NKPoint& start, const IntegratorState& s) {
    return {UnitQuat::normalized(start.p.q() * s.x), UnitQuat::normalized(start.q.q() * s.y)};
}

inline std::vector<std::pair<double, NKPoint>> integrate(const NKPoint& start,
                                                         const NKTangent& velocity,
                                                         const IntegratorConfig& cfg) {
    std::vector<std::pair<double, NKPoint>> out;
    const auto trace = integrate_states(start, velocity, cfg);
    out.reserve(trace.size());
    for (const auto& s : trace) out.emplace_back(s.t, state_point(start, s));
    return out;
}

// ---------------------------------------------------------------------------
// Conservation metrics.
// ---------------------------------------------------------------------------

/// max_t |(alpha + beta)(t) - (alpha + beta)(0)|; the flow keeps the sum
/// exactly constant, so this measures integrator quality.
inline double conserved_c1_drift(const std::vector<IntegratorState>& trace) {
    if (trace.empty()) throw EmptyTrace("conserved_c1_drift needs a nonempty trace");
    const ImQuat c1 = trace.front().alpha + trace.front().beta;
    double worst = 0.0;
    for (const auto& s : trace) worst = std::max(worst, (s.alpha + s.beta - c1).norm());
    return worst;
}

/// max_t |<alpha - beta, c1>(t) - <alpha - beta, c1>(0)|.
inline double inner_product_drift(const std::vector<IntegratorState>& trace) {
    if (trace.empty()) throw EmptyTrace("inner_product_drift needs a nonempty trace");
    const ImQuat c1 = trace.front().alpha + trace.front().beta;
    const double ref = dot(trace.front().alpha - trace.front().beta, c1);
    double worst = 0.0;
    for (const auto& s : trace) worst = std::max(worst, std::abs(dot(s.alpha - s.beta, c1) - ref));
    return worst;
}

/// Drift of |eps(t)| where eps is the part of alpha - beta orthogonal to c1;
/// the cross-product flow rotates eps without changing its norm.
inline double epsilon_norm_conservation(const std::vector<IntegratorState>& trace) {
    if (trace.empty()) throw EmptyTrace("epsilon_norm_conservation needs a nonempty trace");
    const IntegratorState& s0 = trace.front();
    const ImQuat c1 = s0.alpha + s0.beta;
    const double scale = std::sqrt(s0.alpha.norm_sq() + s0.beta.norm_sq());
    if (c1.norm() <= kClassifyTol * scale)
        throw ZeroC1("epsilon is defined only for runs with c1 != 0");
    const double c1n2 = c1.norm_sq();
    const auto eps_norm = [&](const IntegratorState& s) {
        const ImQuat d = s.alpha - s.beta;
        return (d - c1 * (dot(d, c1) / c1n2)).norm();
    };
    const double ref = eps_norm(s0);
    double worst = 0.0;
    for (const auto& s : trace) worst = std::max(worst, std::abs(eps_norm(s) - ref));
    return worst;
}

/// g-norm of the trivialized velocity (x alpha, y beta); left invariance
/// makes it independent of the position part of the state.
inline double trivialized_speed(const IntegratorState& s) noexcept {
    const double plain = s.alpha.norm_sq() + s.beta.norm_sq();
    const double mixed = 2.0 * dot(s.alpha, s.beta);
    return std::sqrt(std::max(0.0, (4.0 / 3.0) * plain - (2.0 / 3.0) * mixed));
}

inline double speed_drift(const std::vector<IntegratorState>& trace) {
    if (trace.empty()) throw EmptyTrace("speed_drift needs a nonempty trace");
    const double ref = trivialized_speed(trace.front());
    double worst = 0.0;
    for (const auto& s : trace) worst = std::max(worst, std::abs(trivialized_speed(s) - ref));
    return worst;
}

// ---------------------------------------------------------------------------
// Finite-difference geodesic-equation residual.
// ---------------------------------------------------------------------------

/// g-norm of (tangential gamma'' - J G(gamma', P gamma')) at time t, with
/// gamma'' by central differences in R^8 and the normal directions (p,q),
/// (-p,q) removed (together they span the per-factor radial directions).
/// Zero for an exact geodesic up to O(fd_step^2).
inline double geodesic_residual(const GeodesicCurve& curve, double t, double fd_step = 1e-4) {
    if (!(fd_step > 0.0)) throw NonPositiveStep("finite-difference step must be positive");
    const NKPoint c0 = eval(curve, t);
    const NKPoint cp = eval(curve, t + fd_step);
    const NKPoint cm = eval(curve, t - fd_step);
    const double h2 = fd_step * fd_step;
    Quat d2u = (cp.p.q() - c0.p.q() * 2.0 + cm.p.q()) / h2;
    Quat d2v = (cp.q.q() - c0.q.q() * 2.0 + cm.q.q()) / h2;
    d2u -= c0.p.q() * dot(d2u, c0.p.q());
    d2v -= c0.q.q() * dot(d2v, c0.q.q());
    const NKTangent acceleration{c0, d2u, d2v};

    const NKTangent vel = eval_velocity(curve, t);
    const NKTangent rhs = almost_complex_J(tensor_G(vel, almost_product_P(vel)));
    const NKTangent diff = acceleration - rhs;
    return std::sqrt(std::max(0.0, metric_g(diff, diff)));
}

}  // namespace nkgeo
