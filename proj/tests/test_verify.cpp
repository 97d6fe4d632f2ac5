#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "nkgeo/verify.hpp"

using namespace nkgeo;

TEST_CASE("identity suite passes on the real structures") {
    const auto checks = identity_checks(42, 300, 30);
    REQUIRE(checks.size() == 14);
    for (const auto& c : checks) {
        INFO(c.name << " dev=" << c.max_dev << " tol=" << c.tol);
        CHECK(c.pass);
    }
    CHECK(all_pass(checks));
}

TEST_CASE("geodesic suite passes") {
    const auto checks = geodesic_checks(42, 4);
    for (const auto& c : checks) {
        INFO(c.name << " dev=" << c.max_dev << " tol=" << c.tol);
        CHECK(c.pass);
    }
}

TEST_CASE("oracle suite passes") {
    const auto checks = oracle_checks(42, 9);
    for (const auto& c : checks) {
        INFO(c.name << " dev=" << c.max_dev << " tol=" << c.tol);
        CHECK(c.pass);
    }
}

TEST_CASE("a sign bug in J is caught and named") {
    // corrupt the sign of the second component's first term
    const JOperator broken = [](const NKTangent& t) {
        const Quat& p = t.base().p.q();
        const Quat& q = t.base().q.q();
        const Quat pv = p * q.conjugate() * t.v();
        const Quat qu = q * p.conjugate() * t.u();
        return NKTangent{t.base(), (pv * 2.0 - t.u()) / kSqrt3, (t.v() + qu * 2.0) / kSqrt3};
    };
    const auto checks = identity_checks(42, 50, 2, broken);
    CHECK_FALSE(all_pass(checks));
    const auto pj = std::find_if(checks.begin(), checks.end(),
                                 [](const Check& c) { return c.name == "PJ = -JP"; });
    REQUIRE(pj != checks.end());
    CHECK_FALSE(pj->pass);
    // checks that do not involve J still pass
    for (const auto& c : checks)
        if (c.name == "G on frames = nabla-J table" || c.name == "frame brackets = structure constants" ||
            c.name == "P^2 = Id")
            CHECK(c.pass);
}
