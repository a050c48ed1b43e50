#include "doctest.h"
#include "test_util.hpp"

#include "ivcl/classify.hpp"
#include "ivcl/hierarchy.hpp"

using namespace ivcl;
using testutil::cur;
using testutil::poly;

namespace {

void check_same_through(const EpsCurrent& a, const EpsCurrent& b, int K) {
    for (int k = 0; k <= K; ++k) {
        CAPTURE(k);
        CHECK(a[k] == b[k]);
    }
}

}  // namespace

TEST_CASE("burgers currents") {
    CHECK(burgers_current(0) == cur("u", 0, true));
    CHECK(burgers_current(1) == cur("u^2 + eps u_x", 1, true));
    CHECK(burgers_current(2) == cur("u^3 + 3 eps u u_x + eps^2 u_xx", 2, true));
    auto& o = testutil::oracles();
    for (int n = 0; n <= 4; ++n) {
        CAPTURE(n);
        EpsCurrent w = burgers_current(n);
        CHECK(w.exact());
        CHECK(w.graded(0));
        CHECK(w == cur(o["burgers"][std::size_t(n)].get<std::string>(), n, true));
    }
}

TEST_CASE("negative currents") {
    CHECK(negative_current(0) == cur("1", 0, true));
    CHECK(negative_current(1) == cur("u^-1 + eps u^-2 u_x", 1, true));
    auto& o = testutil::oracles();
    for (int n = 0; n <= 3; ++n) {
        CAPTURE(n);
        EpsCurrent w = negative_current(n);
        CHECK(w.exact());
        CHECK(w.K() <= n);
        CHECK(w == cur(o["negative"][std::size_t(n)].get<std::string>(), n, true));
    }
    // the other sign convention flips odd powers of eps
    EpsCurrent p = negative_current(3, +1), m = negative_current(3, -1);
    for (int k = 0; k <= 3; ++k) CHECK(p[k] == (k % 2 ? -m[k] : m[k]));
    CHECK_THROWS(negative_current(2, 0));
}

TEST_CASE("viscous CH current") {
    CHECK(viscous_ch_current(0)[0] == poly("u^2"));
    check_same_through(viscous_ch_current(2), cur("u^2 + eps u u_x + eps^2 u u_xx", 2), 2);
    EpsCurrent w = viscous_ch_current(5);
    CHECK_FALSE(w.exact());
    check_same_through(w, specialize(CoeffExpr::u(), 5), 5);
}

TEST_CASE("R on u_x gives the viscous CH flow") {
    EpsCurrent r = apply_pseudo(recursion_operator(), poly("u_x"), 3);
    CHECK_FALSE(r.exact());
    CHECK(r.K() == 3);
    check_same_through(r, viscous_ch_current(3).dx(), 3);
    check_same_through(r, cur(testutil::oracles()["R_on_ux"].get<std::string>(), 3), 3);
}

TEST_CASE("R inverse on u_x exposes the integration constant") {
    CoeffExpr c = CoeffExpr::symbol(const_symbol("c"));
    EpsCurrent r = apply_pseudo(inverse_recursion_operator(c), poly("u_x"), 4);
    CHECK(r.exact());
    EpsCurrent want = negative_current(1).dx().scaled(c);
    check_same_through(r, want, 4);
    CHECK(apply_pseudo(inverse_recursion_operator(), poly("u_x"), 4).is_zero());
}

TEST_CASE("R and its inverse cancel") {
    std::mt19937 rng(7);
    const int K = 4;
    for (int trial = 0; trial < 3; ++trial) {
        EpsCurrent w = testutil::random_current(rng, K, 2, true);
        EpsCurrent flow = w.dx();
        EpsCurrent a = apply_pseudo(compose(recursion_operator(), inverse_recursion_operator()), flow, K);
        EpsCurrent b = apply_pseudo(compose(inverse_recursion_operator(), recursion_operator()), flow, K);
        check_same_through(a, flow, K);
        check_same_through(b, flow, K);
    }
}

TEST_CASE("inverse of d_x demands a total derivative") {
    CHECK_THROWS_WITH_AS(apply_pseudo(recursion_operator(), poly("u_x^2"), 2), doctest::Contains("not a total derivative"),
                         AlgebraError);
    CHECK_THROWS_AS(apply_pseudo(recursion_operator(), cur("u_x", 1), 3), AlgebraError);
}

TEST_CASE("burgers involution") {
    auto v = burgers_involution_suite(4);
    CHECK(v.size() == 10);
    for (const auto& p : v) {
        CAPTURE(p.n);
        CAPTURE(p.m);
        CHECK(p.pass);
    }
}

TEST_CASE("negative involution") {
    for (int sign : {-1, 1}) {
        auto v = negative_involution_suite(3, sign);
        CHECK(v.size() == 3);
        for (const auto& p : v) CHECK(p.pass);
    }
    CHECK(involution_check(negative_current(1), negative_current(2), 3).pass);
}

TEST_CASE("viscous CH commutes with the negative flows") {
    for (int K = 0; K <= 5; ++K) {
        auto v = mixed_involution_suite(K, 2);
        for (const auto& p : v) {
            CAPTURE(K);
            CAPTURE(p.m);
            CHECK(p.pass);
            CHECK(p.through == K);
        }
    }
    // and not with the other sign convention
    auto r = involution_check(viscous_ch_current(3), negative_current(1, +1), 3);
    CHECK_FALSE(r.pass);
    CHECK(r.failing_order == 1);
}

TEST_CASE("viscous CH does not commute with burgers beyond leading order") {
    auto r = involution_check(viscous_ch_current(4), burgers_current(2), 4);
    CHECK_FALSE(r.pass);
}

TEST_CASE("recursion consistency") {
    auto v = recursion_consistency(3, 5);
    REQUIRE(v.size() == 2);
    for (const auto& r : v) {
        CAPTURE(r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("positive currents") {
    CHECK(positive_current(0, 3)[0] == poly("u"));
    check_same_through(positive_current(1, 4), viscous_ch_current(4), 4);
    EpsCurrent p2 = positive_current(2, 4);
    CHECK(p2[0] == poly("u^3"));
    CHECK(involution_check(p2, viscous_ch_current(4), 4).pass);
}

TEST_CASE("hierarchy flow json") {
    json j = to_json(make_flow(Family::Negative, 2));
    CHECK(j["family"] == "negative");
    CHECK(j["exact"] == true);
    CHECK(current_from_json(j["current"]) == negative_current(2));
    CHECK(parse_family("viscousCH") == Family::ViscousCH);
    CHECK_THROWS(parse_family("kdv"));
}
