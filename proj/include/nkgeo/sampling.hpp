#pragma once

#include <random>

#include "nkgeo/geodesic.hpp"
#include "nkgeo/manifold.hpp"

namespace nkgeo {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ImQuat random_im_quat(Rng& rng, double sigma = 1.0) {
    std::normal_distribution<double> g(0.0, sigma);
    return {g(rng), g(rng), g(rng)};
}

inline ImQuat random_unit_im(Rng& rng) {
    ImQuat v = random_im_quat(rng);
    while (v.norm() < 1e-6) v = random_im_quat(rng);
    return v / v.norm();
}

inline UnitQuat random_unit_quat(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Quat q{g(rng), g(rng), g(rng), g(rng)};
    while (q.norm() < 1e-6) q = {g(rng), g(rng), g(rng), g(rng)};
    return UnitQuat::normalized(q);
}

inline NKPoint random_point(Rng& rng) { return {random_unit_quat(rng), random_unit_quat(rng)}; }

/// Tangent with left-trivialized components alpha0, beta0.
inline NKTangent tangent_from_trivialized(const NKPoint& at, const ImQuat& alpha0,
                                          const ImQuat& beta0) {
    return {at, at.p.q() * alpha0.as_quat(), at.q.q() * beta0.as_quat()};
}

inline NKTangent random_tangent(Rng& rng, const NKPoint& at, double sigma = 1.0) {
    return tangent_from_trivialized(at, random_im_quat(rng, sigma), random_im_quat(rng, sigma));
}

inline NKTangent random_tangent(Rng& rng, double sigma = 1.0) {
    const NKPoint at = random_point(rng);
    return random_tangent(rng, at, sigma);
}

/// Velocity that classifies into the requested case by construction.
/// Magnitudes are kept O(1) so downstream finite-difference checks stay in
/// their calibrated range.
inline NKTangent random_case_velocity(Rng& rng, GeodesicCase kind, const NKPoint& at) {
    switch (kind) {
        case GeodesicCase::Constant:
            return {at, Quat{}, Quat{}};
        case GeodesicCase::Case1: {
            const ImQuat a0 = random_unit_im(rng) * uniform(rng, 0.4, 1.3);
            return tangent_from_trivialized(at, a0, -a0);
        }
        case GeodesicCase::Case2: {
            const ImQuat c1 = random_unit_im(rng) * uniform(rng, 0.6, 1.8);
            // |d1| bounded away from 0: d1 = 0 is the PlusOne eigenvector class,
            // which callers construct explicitly when they want it
            const double d1 = (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uniform(rng, 0.15, 1.4);
            return tangent_from_trivialized(at, c1 * (0.5 * (1.0 + d1)), c1 * (0.5 * (1.0 - d1)));
        }
        case GeodesicCase::Case3: {
            const ImQuat c1 = random_unit_im(rng) * uniform(rng, 0.6, 1.8);
            const double d1 = uniform(rng, -1.3, 1.3);
            ImQuat c2 = random_unit_im(rng);
            c2 -= c1 * (dot(c2, c1) / c1.norm_sq());
            while (c2.norm() < 1e-3) {  // resample when accidentally parallel to c1
                c2 = random_unit_im(rng);
                c2 -= c1 * (dot(c2, c1) / c1.norm_sq());
            }
            c2 *= uniform(rng, 0.3, 1.0) / c2.norm();
            const ImQuat alpha0 = (c1 * (1.0 + d1) + c2) * 0.5;
            const ImQuat beta0 = (c1 * (1.0 - d1) - c2) * 0.5;
            return tangent_from_trivialized(at, alpha0, beta0);
        }
    }
    return {at, Quat{}, Quat{}};
}

inline NKTangent random_case_velocity(Rng& rng, GeodesicCase kind) {
    const NKPoint at = random_point(rng);
    return random_case_velocity(rng, kind, at);
}

}  // namespace nkgeo
