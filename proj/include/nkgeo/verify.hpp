#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nkgeo/integrator.hpp"
#include "nkgeo/sampling.hpp"

namespace nkgeo {

/// One named verification result. For most checks `max_dev` is a measured
/// deviation bounded above by `tol`; when `lower_bound` is set the value is
/// a measured ratio or margin required to stay at or above `tol`.
struct Check {
    std::string name;
    double max_dev = 0.0;
    double tol = 0.0;
    bool lower_bound = false;
    bool pass = false;
};

inline bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

/// Replaceable J operator, so identity checks can be pointed at a corrupted
/// structure to demonstrate their own power.
using JOperator = std::function<NKTangent(const NKTangent&)>;

namespace detail {

inline Check upper(std::string name, double dev, double tol) {
    return {std::move(name), dev, tol, false, dev <= tol};
}
inline Check lower(std::string name, double val, double min) {
    return {std::move(name), val, min, true, val >= min};
}

inline double max_abs(const Quat& q) noexcept {
    return std::max(std::max(std::abs(q.w), std::abs(q.x)), std::max(std::abs(q.y), std::abs(q.z)));
}

inline double max_abs_diff(const NKTangent& a, const NKTangent& b) noexcept {
    return std::max(max_abs(a.u() - b.u()), max_abs(a.v() - b.v()));
}

inline const std::array<FrameIndex, 6>& all_frames() {
    static const std::array<FrameIndex, 6> frames = {
        FrameIndex{FrameFamily::E, 1}, FrameIndex{FrameFamily::E, 2}, FrameIndex{FrameFamily::E, 3},
        FrameIndex{FrameFamily::F, 1}, FrameIndex{FrameFamily::F, 2}, FrameIndex{FrameFamily::F, 3}};
    return frames;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tensor identity suite.
// ---------------------------------------------------------------------------

inline std::vector<Check> identity_checks(std::uint64_t seed, int tangent_count = 1000,
                                          int table_points = 100, JOperator jop = {}) {
    using detail::max_abs_diff;
    if (!jop) jop = [](const NKTangent& z) { return almost_complex_J(z); };
    Rng rng(seed);

    double d_jj = 0, d_pp = 0, d_pj = 0, d_gj = 0, d_gp = 0, d_psym = 0;
    double d_gskew = 0, d_gjy = 0, d_gcompat = 0, d_forms = 0, d_q = 0, d_p = 0;
    for (int n = 0; n < tangent_count; ++n) {
        const NKPoint pt = random_point(rng);
        const NKTangent z = random_tangent(rng, pt);
        const NKTangent z2 = random_tangent(rng, pt);
        const NKTangent z3 = random_tangent(rng, pt);
        const NKTangent jz = jop(z), jz2 = jop(z2);
        const NKTangent pz = almost_product_P(z), pz2 = almost_product_P(z2);

        d_jj = std::max(d_jj, max_abs_diff(jop(jz), -z));
        d_pp = std::max(d_pp, max_abs_diff(almost_product_P(pz), z));
        d_pj = std::max(d_pj, max_abs_diff(almost_product_P(jz), -jop(pz)));
        d_gj = std::max(d_gj, std::abs(metric_g(jz, jz2) - metric_g(z, z2)));
        d_gp = std::max(d_gp, std::abs(metric_g(pz, pz2) - metric_g(z, z2)));
        d_psym = std::max(d_psym, std::abs(metric_g(pz, z2) - metric_g(z, pz2)));

        const NKTangent g12 = tensor_G(z, z2);
        d_gskew = std::max(d_gskew, max_abs_diff(g12, -tensor_G(z2, z)));
        d_gjy = std::max(d_gjy, max_abs_diff(tensor_G(z, jz2), -jop(g12)));
        d_gcompat = std::max(d_gcompat,
                             std::abs(metric_g(g12, z3) + metric_g(tensor_G(z, z3), z2)));

        const double hermitian = 0.5 * (metric_euclidean(z, z2) + metric_euclidean(jz, jz2));
        d_forms = std::max(d_forms, std::abs(metric_g(z, z2) - hermitian));

        d_q = std::max(d_q, max_abs_diff(product_Q(z),
                                         (almost_product_P(jz) * 2.0 - jz) * (1.0 / kSqrt3)));
        d_p = std::max(d_p, max_abs_diff(pz, (z - product_Q(jz) * kSqrt3) * 0.5));
    }

    double d_table = 0;
    for (int n = 0; n < table_points; ++n) {
        const NKPoint pt = random_point(rng);
        for (const FrameIndex a : detail::all_frames())
            for (const FrameIndex b : detail::all_frames()) {
                const NKTangent lhs = tensor_G(frame_field(a, pt), frame_field(b, pt));
                d_table = std::max(d_table, max_abs_diff(lhs, nabla_J_table(a, b).at(pt)));
            }
    }

    double d_bracket = 0;
    for (const FrameIndex a : detail::all_frames())
        for (const FrameIndex b : detail::all_frames()) {
            const FrameCombo got = lie_bracket_frame(a, b);
            FrameCombo want;
            if (a.family == b.family)
                for (int k = 1; k <= 3; ++k)
                    want[{a.family, k}] = -2.0 * epsilon_symbol(a.i, b.i, k);
            for (size_t s = 0; s < 6; ++s)
                d_bracket = std::max(d_bracket, std::abs(got.coeff[s] - want.coeff[s]));
        }

    return {
        detail::upper("J^2 = -Id", d_jj, 1e-10),
        detail::upper("P^2 = Id", d_pp, 1e-10),
        detail::upper("PJ = -JP", d_pj, 1e-10),
        detail::upper("g(JZ,JZ') = g(Z,Z')", d_gj, 1e-10),
        detail::upper("g(PZ,PZ') = g(Z,Z')", d_gp, 1e-10),
        detail::upper("g(PZ,Z') = g(Z,PZ')", d_psym, 1e-10),
        detail::upper("G(X,Y) + G(Y,X) = 0", d_gskew, 1e-10),
        detail::upper("G(X,JY) = -JG(X,Y)", d_gjy, 1e-10),
        detail::upper("g(G(X,Y),Z) + g(G(X,Z),Y) = 0", d_gcompat, 1e-10),
        detail::upper("metric forms agree", d_forms, 1e-10),
        detail::upper("Q = (2PJ - J)/sqrt3", d_q, 1e-10),
        detail::upper("P = (Id - sqrt3 QJ)/2", d_p, 1e-10),
        detail::upper("G on frames = nabla-J table", d_table, 1e-12),
        detail::upper("frame brackets = structure constants", d_bracket, 0.0),
    };
}

// ---------------------------------------------------------------------------
// Closed-form geodesic suite.
// ---------------------------------------------------------------------------

inline std::vector<Check> geodesic_checks(std::uint64_t seed, int curves_per_case = 10) {
    using detail::max_abs_diff;
    Rng rng(seed);

    double d_round = 0, d_eval0 = 0, d_unit = 0, d_speed_const = 0, d_speed_formula = 0;
    double d_arclen = 0, d_iso = 0, d_sum = 0, d_prod = 0, d_phi = 0, d_sub = 0, d_theta = 0;
    double d_resid = 0, d_peig = 0;
    double neither_margin = 1e308, false_drift = 1e308;
    double true_drift = 0;

    const GeodesicCase kinds[3] = {GeodesicCase::Case1, GeodesicCase::Case2, GeodesicCase::Case3};
    const IntegratorConfig drift_cfg{1e-3, 10.0, Projection::Renormalize};

    for (const GeodesicCase kind : kinds) {
        for (int n = 0; n < curves_per_case; ++n) {
            const NKPoint start = random_point(rng);
            const NKTangent vel = random_case_velocity(rng, kind, start);
            const GeodesicCurve curve = make_geodesic(start, vel);
            const GeodesicParams& gp = curve.params;

            d_round = std::max(d_round, max_abs_diff(eval_velocity(curve, 0.0), vel));
            d_eval0 = std::max(d_eval0, distance_r8(eval(curve, 0.0), start));

            for (int s = 0; s < 40; ++s) {
                const double t = uniform(rng, -20.0, 20.0);
                if (kind == GeodesicCase::Case3) {
                    d_unit = std::max(d_unit, std::abs(mixed_factor(gp.x_factor, t).norm() - 1.0));
                    d_unit = std::max(d_unit, std::abs(mixed_factor(gp.y_factor, t).norm() - 1.0));
                    d_theta = std::max(d_theta, detail::max_abs(mixed_factor(gp.x_factor, t) -
                                                                mixed_factor_theta(gp.x_factor, t)));
                    d_theta = std::max(d_theta, detail::max_abs(mixed_factor(gp.y_factor, t) -
                                                                mixed_factor_theta(gp.y_factor, t)));
                } else {
                    d_unit = std::max(d_unit, std::abs(circle_factor(gp.x_factor.a, t).norm() - 1.0));
                }
                const NKTangent v = eval_velocity(curve, t);
                d_speed_const = std::max(d_speed_const,
                                         std::abs(std::sqrt(metric_g(v, v)) - curve.speed));
            }

            if (kind != GeodesicCase::Case1)
                d_speed_formula = std::max(
                    d_speed_formula,
                    std::abs(curve.speed - std::sqrt((1.0 / 3.0 + gp.d1 * gp.d1) * gp.c1.norm_sq() +
                                                     gp.c2.norm_sq())));

            const GeodesicCurve unit_curve = arclength_reparam(curve);
            for (int s = 0; s < 10; ++s) {
                const NKTangent v = eval_velocity(unit_curve, uniform(rng, -5.0, 5.0));
                d_arclen = std::max(d_arclen, std::abs(std::sqrt(metric_g(v, v)) - 1.0));
            }

            {
                const UnitQuat a = random_unit_quat(rng), b = random_unit_quat(rng),
                               c = random_unit_quat(rng);
                const NKPoint moved = isometry_translate(a, b, c, start);
                const NKTangent mvel = isometry_pushforward(a, b, c, vel);
                const GeodesicCurve mcurve = make_geodesic(moved, mvel);
                for (int s = 0; s < 10; ++s) {
                    const double t = uniform(rng, 0.0, 8.0);
                    d_iso = std::max(d_iso, distance_r8(eval(mcurve, t),
                                                        isometry_translate(a, b, c, eval(curve, t))));
                }
            }

            if (kind == GeodesicCase::Case3) {
                for (const FactorConstants* k : {&gp.x_factor, &gp.y_factor}) {
                    d_sum = std::max(d_sum, std::abs(k->A + k->B - k->c));
                    d_prod = std::max(d_prod, std::abs(k->A * k->B -
                                                       (k->a * k->c - k->a * k->a - k->b * k->b)));
                    d_phi = std::max(d_phi, std::abs(k->b * k->phi * k->phi -
                                                     (k->c - 2.0 * k->a) * k->phi - k->b));
                    const double ct = std::cos(k->theta), st = std::sin(k->theta);
                    const double denom = 1.0 + k->phi * k->phi;
                    d_sub = std::max(d_sub, std::abs(ct * ct - 1.0 / denom));
                    d_sub = std::max(d_sub, std::abs(st * ct - k->phi / denom));
                }
            }

            for (int s = 0; s < 10; ++s)
                d_resid = std::max(d_resid, geodesic_residual(curve, uniform(rng, 0.0, 8.0), 1e-4));

            // P-eigenvector prediction against P gamma' = +/- gamma'
            const PEigenClass cls = p_eigenvector_class(gp);
            for (int s = 0; s < 10; ++s) {
                const NKTangent v = eval_velocity(curve, uniform(rng, 0.0, 8.0));
                const NKTangent pv = almost_product_P(v);
                const double dev_minus = max_abs_diff(pv, -v);
                const double dev_plus = max_abs_diff(pv, v);
                if (cls == PEigenClass::MinusOne) d_peig = std::max(d_peig, dev_minus);
                if (cls == PEigenClass::PlusOne) d_peig = std::max(d_peig, dev_plus);
                if (cls == PEigenClass::Neither)
                    neither_margin = std::min(neither_margin, std::min(dev_minus, dev_plus));
            }

            // Euclidean-coincidence predicate against measured alpha drift
            const auto trace = integrate_states(start, vel, drift_cfg);
            double drift = 0;
            for (const auto& st : trace)
                drift = std::max(drift, (st.alpha - trace.front().alpha).norm());
            if (is_euclidean_geodesic(gp))
                true_drift = std::max(true_drift, drift);
            else
                false_drift = std::min(false_drift, drift);
        }
    }

    // targeted PlusOne coverage: Case2 with d1 = 0
    for (int n = 0; n < curves_per_case; ++n) {
        const NKPoint start = random_point(rng);
        const ImQuat c1 = random_unit_im(rng) * uniform(rng, 0.6, 1.8);
        const NKTangent vel = tangent_from_trivialized(start, c1 * 0.5, c1 * 0.5);
        const GeodesicCurve curve = make_geodesic(start, vel);
        if (p_eigenvector_class(curve.params) != PEigenClass::PlusOne) {
            d_peig = 1e300;  // misclassification
            break;
        }
        for (int s = 0; s < 10; ++s) {
            const NKTangent v = eval_velocity(curve, uniform(rng, 0.0, 8.0));
            d_peig = std::max(d_peig, max_abs_diff(almost_product_P(v), v));
        }
    }

    return {
        detail::upper("velocity round-trip at t=0", d_round, 1e-10),
        detail::upper("eval(0) = start", d_eval0, 1e-12),
        detail::upper("factor curves stay unit", d_unit, 1e-9),
        detail::upper("speed constant along curve", d_speed_const, 1e-10),
        detail::upper("speed matches invariant formula", d_speed_formula, 1e-10),
        detail::upper("arclength reparam has unit speed", d_arclen, 1e-10),
        detail::upper("isometry invariance", d_iso, 1e-10),
        detail::upper("constants: A + B = c", d_sum, 1e-12),
        detail::upper("constants: AB = ac - a^2 - b^2", d_prod, 1e-12),
        detail::upper("constants: b phi^2 - (c-2a) phi - b = 0", d_phi, 1e-12),
        detail::upper("theta substitution identities", d_sub, 1e-12),
        detail::upper("theta form = phi form", d_theta, 1e-12),
        detail::upper("geodesic-equation residual", d_resid, 1e-5),
        detail::upper("P-eigenvector classes match P gamma' = +/- gamma'", d_peig, 1e-9),
        detail::lower("P-eigenvector Neither margin", neither_margin, 1e-3),
        detail::upper("Euclidean-coincident curves: alpha drift", true_drift, 1e-8),
        detail::lower("non-coincident curves: alpha drift margin", false_drift, 1e-3),
    };
}

// ---------------------------------------------------------------------------
// Oracle suite: RK4 against the closed form, conservation, convergence.
// ---------------------------------------------------------------------------

namespace detail {

inline double state_distance(const IntegratorState& a, const IntegratorState& b) noexcept {
    return std::sqrt((a.x - b.x).norm_sq() + (a.y - b.y).norm_sq());
}

/// Max pointwise distance between a run at step h and a run at step h/2,
/// compared on the coarse grid.
inline double self_error(const NKPoint& start, const NKTangent& vel, double step, double t_end) {
    const auto coarse = integrate_states(start, vel, {step, t_end, Projection::Renormalize});
    const auto fine = integrate_states(start, vel, {0.5 * step, t_end, Projection::Renormalize});
    double worst = 0.0;
    for (size_t i = 0; i < coarse.size() && 2 * i < fine.size(); ++i)
        worst = std::max(worst, state_distance(coarse[i], fine[2 * i]));
    return worst;
}

}  // namespace detail

inline std::vector<Check> oracle_checks(std::uint64_t seed, int ic_count = 30,
                                        const IntegratorConfig& cfg = {1e-3, 10.0,
                                                                       Projection::Renormalize}) {
    Rng rng(seed);
    double d_cmp = 0, d_c1 = 0, d_inner = 0, d_eps = 0, d_speed = 0, d_eps_form = 0;

    const GeodesicCase kinds[3] = {GeodesicCase::Case1, GeodesicCase::Case2, GeodesicCase::Case3};
    for (int n = 0; n < ic_count; ++n) {
        const GeodesicCase kind = kinds[n % 3];
        const NKPoint start = random_point(rng);
        const NKTangent vel = random_case_velocity(rng, kind, start);
        const GeodesicCurve curve = make_geodesic(start, vel);

        const auto trace = integrate_states(start, vel, cfg);
        for (const auto& s : trace)
            d_cmp = std::max(d_cmp, distance_r8(state_point(start, s), eval(curve, s.t)));

        d_c1 = std::max(d_c1, conserved_c1_drift(trace));
        d_speed = std::max(d_speed, speed_drift(trace));
        if (kind != GeodesicCase::Case1) {
            d_inner = std::max(d_inner, inner_product_drift(trace));
            d_eps = std::max(d_eps, epsilon_norm_conservation(trace));
        }

        if (kind == GeodesicCase::Case3) {
            const GeodesicParams& gp = curve.params;
            const ImQuat c3 = gp.c3();
            const double rate = (2.0 / 3.0) * gp.c1.norm();
            const double c1n2 = gp.c1.norm_sq();
            for (const auto& s : trace) {
                const ImQuat d = s.alpha - s.beta;
                const ImQuat eps_num = d - gp.c1 * (dot(d, gp.c1) / c1n2);
                const ImQuat eps_form =
                    gp.c2 * std::cos(rate * s.t) + c3 * std::sin(rate * s.t);
                d_eps_form = std::max(d_eps_form, (eps_num - eps_form).norm());
            }
        }
    }

    // step-refinement behavior on one curve per case
    double self_err = 0, factor = 1e308;
    for (const GeodesicCase kind : kinds) {
        const NKPoint start = random_point(rng);
        const NKTangent vel = random_case_velocity(rng, kind, start);
        self_err = std::max(self_err, detail::self_error(start, vel, cfg.step, cfg.t_end));
        const double e_coarse = detail::self_error(start, vel, 1e-2, cfg.t_end);
        const double e_fine = detail::self_error(start, vel, 5e-3, cfg.t_end);
        if (e_coarse > 0.0 && e_fine > 0.0) factor = std::min(factor, e_coarse / e_fine);
    }

    return {
        detail::upper("closed form vs RK4 (R^8)", d_cmp, 1e-6),
        detail::upper("c1 drift", d_c1, 1e-8),
        detail::upper("<alpha-beta, c1> drift", d_inner, 1e-8),
        detail::upper("|eps| drift", d_eps, 1e-8),
        detail::upper("speed drift along flow", d_speed, 1e-8),
        detail::upper("eps closed form vs integrated", d_eps_form, 1e-7),
        detail::upper("RK4 self-error at base step", self_err, 1e-7),
        detail::lower("RK4 step-halving error factor", factor, 12.0),
    };
}

}  // namespace nkgeo
