#include <catch2/catch_amalgamated.hpp>

#include "nkgeo/manifold.hpp"
#include "nkgeo/sampling.hpp"

using namespace nkgeo;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs(const Quat& q) {
    return std::max(std::max(std::abs(q.w), std::abs(q.x)), std::max(std::abs(q.y), std::abs(q.z)));
}
double tangent_dev(const NKTangent& a, const NKTangent& b) {
    return std::max(max_abs(a.u() - b.u()), max_abs(a.v() - b.v()));
}

const FrameIndex E1{FrameFamily::E, 1}, E2{FrameFamily::E, 2}, E3{FrameFamily::E, 3};
const FrameIndex F1{FrameFamily::F, 1}, F2{FrameFamily::F, 2}, F3{FrameFamily::F, 3};

}  // namespace

TEST_CASE("tangent construction projects small defects and rejects large ones") {
    const NKPoint o = NKPoint::origin();
    // at (1,1) a tangent must have zero real parts
    CHECK_THROWS_AS(NKTangent(o, Quat{0.5, 1, 0, 0}, Quat{}), NotTangent);
    const NKTangent t{o, Quat{1e-9, 1, 0, 0}, Quat{}};
    CHECK(std::abs(dot(t.u(), o.p.q())) < 1e-18);
    CHECK((t.alpha() - ImQuat{1, 0, 0}).norm() < 1e-12);
}

TEST_CASE("left trivialization is imaginary at random points") {
    Rng rng(5);
    for (int n = 0; n < 200; ++n) {
        const NKTangent t = random_tangent(rng);
        CHECK(std::abs(dot(t.u(), t.base().p.q())) < 1e-10);
        const Quat a = t.base().p.q().conjugate() * t.u();
        CHECK(std::abs(a.w) < 1e-10);
    }
}

TEST_CASE("frame fields") {
    const NKPoint o = NKPoint::origin();
    CHECK(tangent_dev(frame_field(E1, o), NKTangent(o, Quat{0, 1, 0, 0}, Quat{})) == 0.0);
    CHECK(tangent_dev(frame_field(F3, o), NKTangent(o, Quat{}, Quat{0, 0, 0, -1})) == 0.0);

    const NKPoint pij{UnitQuat(Quat{0, 1, 0, 0}), UnitQuat(Quat{0, 0, 1, 0})};
    // E2 at (i, j) is (i*j, 0) = (k, 0)
    CHECK(tangent_dev(frame_field(E2, pij), NKTangent(pij, Quat{0, 0, 0, 1}, Quat{})) < 1e-15);

    CHECK_THROWS_AS(FrameIndex(FrameFamily::E, 0), InvalidInput);
    CHECK_THROWS_AS(FrameIndex(FrameFamily::F, 4), InvalidInput);
}

TEST_CASE("frame fields are g-orthogonal with the stated norms") {
    Rng rng(7);
    for (int n = 0; n < 20; ++n) {
        const NKPoint pt = random_point(rng);
        // g(E_i, E_j) = 4/3 delta_ij, g(E_i, F_j) = -2/3 delta_ij
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) {
                const double gee = metric_g(frame_field({FrameFamily::E, i}, pt),
                                            frame_field({FrameFamily::E, j}, pt));
                const double gef = metric_g(frame_field({FrameFamily::E, i}, pt),
                                            frame_field({FrameFamily::F, j}, pt));
                CHECK_THAT(gee, WithinAbs(i == j ? 4.0 / 3.0 : 0.0, 1e-12));
                CHECK_THAT(gef, WithinAbs(i == j ? -2.0 / 3.0 : 0.0, 1e-12));
            }
    }
}

TEST_CASE("euclidean metric on frames and random tangents") {
    const NKPoint o = NKPoint::origin();
    CHECK_THAT(metric_euclidean(frame_field(E1, o), frame_field(E1, o)), WithinAbs(1.0, 1e-15));
    CHECK_THAT(metric_euclidean(frame_field(E1, o), frame_field(F1, o)), WithinAbs(0.0, 1e-15));

    Rng rng(11);
    const NKPoint pt = random_point(rng);
    const NKTangent z = random_tangent(rng, pt), z2 = random_tangent(rng, pt);
    const double direct = dot(z.u(), z2.u()) + dot(z.v(), z2.v());
    CHECK_THAT(metric_euclidean(z, z2), WithinAbs(direct, 1e-15));

    const NKPoint other = random_point(rng);
    CHECK_THROWS_AS(metric_euclidean(z, random_tangent(rng, other)), BaseMismatch);
}

TEST_CASE("metric g values at the origin and the dual-formula oracle") {
    const NKPoint o = NKPoint::origin();
    CHECK_THAT(metric_g(frame_field(E1, o), frame_field(E1, o)), WithinAbs(4.0 / 3.0, 1e-15));
    CHECK_THAT(metric_g(frame_field(E1, o), frame_field(F1, o)), WithinAbs(-2.0 / 3.0, 1e-15));

    Rng rng(19);
    for (int n = 0; n < 1000; ++n) {
        const NKPoint pt = random_point(rng);
        const NKTangent z = random_tangent(rng, pt), z2 = random_tangent(rng, pt);
        CHECK_THAT(metric_g(z, z2), WithinAbs(metric_g_via_J(z, z2), 1e-12));
    }
}

TEST_CASE("J on frames and J^2 = -Id") {
    const NKPoint o = NKPoint::origin();
    const double s = 1.0 / kSqrt3;
    // J(i, 0) = (-i, -2i)/sqrt3
    CHECK(tangent_dev(almost_complex_J(frame_field(E1, o)),
                      NKTangent(o, Quat{0, -s, 0, 0}, Quat{0, -2 * s, 0, 0})) < 1e-15);
    // J(0, j) = (2j, j)/sqrt3
    CHECK(tangent_dev(almost_complex_J(frame_field(F2, o)),
                      NKTangent(o, Quat{0, 0, 2 * s, 0}, Quat{0, 0, s, 0})) < 1e-15);

    Rng rng(29);
    for (int n = 0; n < 1000; ++n) {
        const NKTangent z = random_tangent(rng);
        CHECK(tangent_dev(almost_complex_J(almost_complex_J(z)), -z) < 1e-12);
    }
}

TEST_CASE("P and Q basics") {
    const NKPoint o = NKPoint::origin();
    const NKTangent z{o, Quat{0, 0.3, -0.2, 1.0}, Quat{0, -1.0, 0.4, 0.2}};
    // P at (1,1) swaps the components
    CHECK(tangent_dev(almost_product_P(z), NKTangent(o, z.v(), z.u())) == 0.0);

    // P(E1) at (i,j): E1 = (i*i, 0) = (-1, 0) and P gives (0, j i^-1 (-1)) = (0, -k)
    const NKPoint pij{UnitQuat(Quat{0, 1, 0, 0}), UnitQuat(Quat{0, 0, 1, 0})};
    const NKTangent e1 = frame_field(E1, pij);
    CHECK(tangent_dev(almost_product_P(e1), NKTangent(pij, Quat{}, Quat{0, 0, 0, -1})) < 1e-15);

    CHECK(tangent_dev(product_Q(frame_field(E1, o)), -frame_field(E1, o)) == 0.0);
    CHECK(tangent_dev(product_Q(frame_field(F1, o)), frame_field(F1, o)) == 0.0);

    Rng rng(37);
    for (int n = 0; n < 1000; ++n) {
        const NKTangent t = random_tangent(rng);
        CHECK(tangent_dev(almost_product_P(almost_product_P(t)), t) < 1e-12);
        CHECK(tangent_dev(q_from_p(t), product_Q(t)) < 1e-12);
        CHECK(tangent_dev(p_from_q(t), almost_product_P(t)) < 1e-12);
        CHECK(tangent_dev(almost_product_P(almost_complex_J(t)),
                          -almost_complex_J(almost_product_P(t))) < 1e-12);
        const NKTangent t2 = random_tangent(rng, t.base());
        CHECK_THAT(metric_g(almost_product_P(t), almost_product_P(t2)),
                   WithinAbs(metric_g(t, t2), 1e-12));
        CHECK_THAT(metric_g(almost_product_P(t), t2), WithinAbs(metric_g(t, almost_product_P(t2)), 1e-12));
        CHECK_THAT(metric_g(almost_complex_J(t), almost_complex_J(t2)),
                   WithinAbs(metric_g(t, t2), 1e-12));
    }
}

TEST_CASE("tensor G frozen values at the origin") {
    const NKPoint o = NKPoint::origin();
    // G(E1, F2) = 2/(3 sqrt 3) (k, -k)
    CHECK(tangent_dev(tensor_G(frame_field(E1, o), frame_field(F2, o)),
                      NKTangent(o, Quat{0, 0, 0, kGFactor}, Quat{0, 0, 0, -kGFactor})) < 1e-15);
    // G(E1, E2) = 2/(3 sqrt 3) (k, 2k), i.e. -2/(3 sqrt 3) (E3 + 2 F3) at (1,1)
    CHECK(tangent_dev(tensor_G(frame_field(E1, o), frame_field(E2, o)),
                      NKTangent(o, Quat{0, 0, 0, kGFactor}, Quat{0, 0, 0, 2 * kGFactor})) < 1e-15);

    Rng rng(41);
    for (int n = 0; n < 500; ++n) {
        const NKTangent x = random_tangent(rng);
        CHECK(tangent_dev(tensor_G(x, x), NKTangent(x.base(), Quat{}, Quat{})) < 1e-12);
    }
}

TEST_CASE("G identities on random tangents") {
    Rng rng(43);
    for (int n = 0; n < 1000; ++n) {
        const NKPoint pt = random_point(rng);
        const NKTangent x = random_tangent(rng, pt), y = random_tangent(rng, pt),
                        z = random_tangent(rng, pt);
        CHECK(tangent_dev(tensor_G(x, y), -tensor_G(y, x)) < 1e-12);
        CHECK(tangent_dev(tensor_G(x, almost_complex_J(y)),
                          -almost_complex_J(tensor_G(x, y))) < 1e-12);
        CHECK(std::abs(metric_g(tensor_G(x, y), z) + metric_g(tensor_G(x, z), y)) < 1e-12);
    }
}

TEST_CASE("bracket table") {
    FrameCombo b = lie_bracket_frame(E1, E2);
    CHECK(b[E3] == -2.0);
    CHECK(b[E1] == 0.0);
    CHECK(b[F3] == 0.0);
    b = lie_bracket_frame(E1, F2);
    for (double c : b.coeff) CHECK(c == 0.0);
    b = lie_bracket_frame(F2, F3);
    CHECK(b[F1] == -2.0);
    b = lie_bracket_frame(F3, F2);
    CHECK(b[F1] == 2.0);
}

TEST_CASE("connection table") {
    FrameCombo c = connection_table(E1, E2);
    CHECK(c[E3] == -1.0);
    c = connection_table(F1, E2);
    CHECK_THAT(c[F3], WithinAbs(1.0 / 3.0, 1e-15));
    CHECK_THAT(c[E3], WithinAbs(-1.0 / 3.0, 1e-15));
    c = connection_table(E2, E2);
    for (double v : c.coeff) CHECK(v == 0.0);
}

TEST_CASE("nabla-J table values and consistency with G") {
    FrameCombo t = nabla_J_table(E1, E2);
    CHECK_THAT(t[E3], WithinAbs(-kGFactor, 1e-15));
    CHECK_THAT(t[F3], WithinAbs(-2.0 * kGFactor, 1e-15));
    t = nabla_J_table(F1, F2);
    CHECK_THAT(t[E3], WithinAbs(2.0 * kGFactor, 1e-15));
    CHECK_THAT(t[F3], WithinAbs(kGFactor, 1e-15));
    t = nabla_J_table(E1, E1);
    for (double v : t.coeff) CHECK(v == 0.0);

    const std::array<FrameIndex, 6> all = {E1, E2, E3, F1, F2, F3};
    Rng rng(47);
    for (int n = 0; n < 100; ++n) {
        const NKPoint pt = random_point(rng);
        for (const FrameIndex a : all)
            for (const FrameIndex b : all) {
                const NKTangent lhs = tensor_G(frame_field(a, pt), frame_field(b, pt));
                CHECK(tangent_dev(lhs, nabla_J_table(a, b).at(pt)) < 1e-12);
            }
    }
}

TEST_CASE("connection difference term") {
    const NKPoint o = NKPoint::origin();
    Rng rng(53);
    // for X = Y the two symmetrized terms coincide
    for (int n = 0; n < 100; ++n) {
        const NKTangent z = random_tangent(rng);
        const NKTangent lhs = euclidean_connection_relation(z, z);
        const NKTangent rhs = almost_complex_J(tensor_G(z, almost_product_P(z)));
        CHECK(tangent_dev(lhs, rhs) < 1e-12);
    }
    // at (1,1) with Z = (alpha, beta): J G(Z, PZ) = 2/3 (alpha x beta, -alpha x beta)
    for (int n = 0; n < 100; ++n) {
        const ImQuat a = random_im_quat(rng), b = random_im_quat(rng);
        const NKTangent z{o, a.as_quat(), b.as_quat()};
        const ImQuat axb = cross(a, b);
        const NKTangent expect{o, axb.as_quat() * (2.0 / 3.0), axb.as_quat() * (-2.0 / 3.0)};
        CHECK(tangent_dev(euclidean_connection_relation(z, z), expect) < 1e-12);
    }
}

TEST_CASE("isometry translation and pushforward") {
    const NKPoint o = NKPoint::origin();
    Rng rng(59);
    const UnitQuat one = UnitQuat::one();
    const NKPoint pt = random_point(rng);
    CHECK(distance_r8(isometry_translate(one, one, one, pt), pt) == 0.0);

    const UnitQuat a = random_unit_quat(rng), b = random_unit_quat(rng);
    const NKPoint moved = isometry_translate(a, b, one, o);
    CHECK(distance_r8(moved, NKPoint{a, b}) < 1e-15);

    const UnitQuat h = random_unit_quat(rng);
    const NKTangent z{o, Quat{0, 1, 0, 0}, Quat{}};
    const NKTangent pushed = isometry_pushforward(h, h, h, z);
    CHECK(distance_r8(pushed.base(), o) < 1e-12);
    CHECK(max_abs(pushed.u() - conjugate_by(h, ImQuat{1, 0, 0}).as_quat()) < 1e-12);

    for (int n = 0; n < 300; ++n) {
        const UnitQuat ra = random_unit_quat(rng), rb = random_unit_quat(rng), rc = random_unit_quat(rng);
        const NKPoint base = random_point(rng);
        const NKTangent z1 = random_tangent(rng, base), z2 = random_tangent(rng, base);
        const NKTangent w1 = isometry_pushforward(ra, rb, rc, z1);
        const NKTangent w2 = isometry_pushforward(ra, rb, rc, z2);
        CHECK_THAT(metric_g(w1, w2), WithinAbs(metric_g(z1, z2), 1e-12));
    }
}
